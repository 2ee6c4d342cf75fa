r"""
Contour and shifted label functions of labeled forests, and the exact law of
the first trees of a uniform forest.
"""
from collections import namedtuple
from fractions import Fraction

import numpy as np

from ..exceptions import BudgetExceeded
from .forest import count_forests

PrefixLawTV = namedtuple('PrefixLawTV', ['tv_lower', 'tv_enumerated', 'residual_conditional',
                                         'residual_product'])

PREFIX_SIZE_BUDGET = 10 ** 4


class ContourLabelPair(object):
    r"""
    Contour function C and shifted label function L at integer times
    ``start, ..., start + len - 1``, together with the tree index and the
    vertex visited at each time.
    """

    def __init__(self, contour, labels, tree, vertex, start=0):
        self.contour = np.asarray(contour, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.tree = np.asarray(tree, dtype=np.int64)
        self.vertex = np.asarray(vertex, dtype=np.int64)
        self.start = start

    def __len__(self):
        return len(self.contour)

    @property
    def end(self):
        return self.start + len(self.contour) - 1

    def C(self, j):
        return int(self.contour[j - self.start])

    def L(self, j):
        return int(self.labels[j - self.start])

    def __repr__(self):
        return 'ContourLabelPair([{}, {}])'.format(self.start, self.end)


def _tree_visits(lt, index, shift):
    t = lt.tree
    visits = t.contour()
    heights = t.heights
    return ([heights[v] - index for v in visits],
            [lt.labels[v] + shift for v in visits],
            [index] * len(visits),
            visits)


def contour_label(f, b):
    r"""
    Contour and label functions of the labeled forest ``f`` shifted by the
    bridge ``b``: tree i is attached at the (i+1)-th down-step of b.
    """
    if f.sigma != b.sigma:
        raise ValueError("Invalid dimensions: forest has {} trees, bridge has sigma={}".format(
            f.sigma, b.sigma))
    ds = b.down_steps()
    C, L, I, V = [], [], [], []
    for i, lt in enumerate(f):
        c, l, idx, v = _tree_visits(lt, i, b[ds.at(i + 1)])
        C += c
        L += l
        I += idx
        V += v
    C.append(-f.sigma)
    L.append(0)
    I.append(f.sigma)
    V.append(-1)
    return ContourLabelPair(C, L, I, V)


def attachment(ds, i):
    r"""
    Down-step carrying tree i of an infinite forest.
    """
    return ds.at(i + 1) if i >= 0 else ds.at(i)


def contour_label_window(trees, window, ds):
    r"""
    Windowed variant: ``trees`` maps the consecutive indices lo..hi-1 (lo <= 0 <
    hi) to labeled trees, ``window`` is a `BridgeWindow` and ``ds`` its
    down-steps. Time 0 is the root of tree 0.
    """
    lo, hi = min(trees), max(trees) + 1
    C, L, I, V = [], [], [], []
    for i in range(lo, hi):
        c, l, idx, v = _tree_visits(trees[i], i, window[attachment(ds, i)])
        C += c
        L += l
        I += idx
        V += v
    start = -sum(2 * trees[i].size + 1 for i in range(lo, 0))
    return ContourLabelPair(C, L, I, V, start)


def exact_prefix_law_tv(n, sigma, k, p, tree_size_cap):
    r"""
    Total variation between the law of the first k trees of a uniform forest
    with sigma trees and n edges, and k independent p-GW trees.

    A fixed k-tuple of total size v has conditional probability
    count_forests(n - v, sigma - k) / count_forests(n, sigma) and product
    probability p^v (1-p)^(v+k); there are count_forests(v, k) such tuples.
    Tuples with v <= tree_size_cap are summed exactly; the two residual
    masses give the lower bound.
    """
    p = Fraction(p)
    if not 0 <= k <= sigma or n < 0:
        raise ValueError("Invalid prefix: n={}, sigma={}, k={}".format(n, sigma, k))
    if tree_size_cap > PREFIX_SIZE_BUDGET:
        raise BudgetExceeded("tree_size_cap {} exceeds {}".format(tree_size_cap, PREFIX_SIZE_BUDGET))
    total = count_forests(n, sigma)
    tv = Fraction(0)
    mass_conditional = Fraction(0)
    mass_product = Fraction(0)
    for v in range(tree_size_cap + 1):
        tuples = count_forests(v, k)
        if tuples == 0:
            continue
        cond = Fraction(count_forests(n - v, sigma - k), total) if v <= n else Fraction(0)
        prod = p ** v * (1 - p) ** (v + k)
        tv += tuples * abs(cond - prod)
        mass_conditional += tuples * cond
        mass_product += tuples * prod
    tv /= 2
    res_cond = 1 - mass_conditional
    res_prod = 1 - mass_product
    return PrefixLawTV(tv + abs(res_cond - res_prod) / 2, tv, res_cond, res_prod)
