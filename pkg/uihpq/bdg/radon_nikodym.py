r"""
Exact check of the change of measure between the contour paths of infinite
p-forests and of critical (p = 1/2) forests, stopped at the hitting times of
x on the left and -x on the right.
"""
import logging
from fractions import Fraction

from ..exceptions import BudgetExceeded
from ..trees import count_forests, enumerate_forests, gw_probability

logger = logging.getLogger(__name__)

RN_BUDGET = 10 ** 6


def stopped_contour(left, right):
    r"""
    Contour values on [U, T] of the trees ``left`` (indices -x..-1) and
    ``right`` (indices 0..x-1); returns (times, values).
    """
    x = len(right)
    times, values = [], []
    t = -sum(2 * tree.size + 1 for tree in left)
    for i, tree in zip(range(-x, 0), left):
        heights = tree.heights
        for v in tree.contour():
            times.append(t)
            values.append(heights[v] - i)
            t += 1
    for i, tree in enumerate(right):
        heights = tree.heights
        for v in tree.contour():
            times.append(t)
            values.append(heights[v] - i)
            t += 1
    times.append(t)
    values.append(-x)
    return times, values


def hitting_times(times, values, x):
    r"""
    U_x: first visit to x left of 0; T_{-x}: first visit to -x right of 0.
    """
    U = min(t for t, c in zip(times, values) if t <= 0 and c == x)
    T = min(t for t, c in zip(times, values) if t >= 0 and c == -x)
    return U, T


def radon_nikodym_check(p, x, cap, budget=RN_BUDGET):
    r"""
    For every stopped path with v(f, x) <= cap edges, compare the p-GW
    probability with (4p(1-p))^v (2(1-p))^(2x) times the critical one.
    """
    p = Fraction(p)
    if not 0 < p <= Fraction(1, 2) or x < 1 or cap < 0:
        raise ValueError("Invalid parameters: p={}, x={}, cap={}".format(p, x, cap))
    paths = sum(count_forests(v, 2 * x) for v in range(cap + 1))
    if paths > budget:
        raise BudgetExceeded("{} paths exceed {}".format(paths, budget))
    half = Fraction(1, 2)
    mismatches = []
    checked = 0
    for v in range(cap + 1):
        for forest in enumerate_forests(v, 2 * x):
            trees = forest.plane_trees
            times, values = stopped_contour(trees[:x], trees[x:])
            U, T = hitting_times(times, values, x)
            edges = Fraction(T - U - 2 * x, 2)
            lhs = Fraction(1)
            rhs = Fraction(1)
            for t in trees:
                lhs *= gw_probability(t, p)
                rhs *= gw_probability(t, half)
            rhs *= (4 * p * (1 - p)) ** int(edges) * (2 * (1 - p)) ** (2 * x)
            if edges != v or lhs != rhs:
                mismatches.append({'words': [t.to_word() for t in trees], 'v': str(edges)})
            checked += 1
    logger.info('radon-nikodym p=%s x=%d cap=%d: %d paths, %d mismatches', p, x, cap, checked,
                len(mismatches))
    return {'p': str(p), 'x': x, 'cap': cap, 'paths': checked, 'exact': not mismatches,
            'mismatches': mismatches}
