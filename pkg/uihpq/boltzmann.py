r"""
Partition functions and Boltzmann samplers of the skewness family
g_p = p(1-p)/3, z_p = (1-p)/4, 0 <= p <= 1/2.

All partition functions are exact `Fraction`s. The tree of components of a
Boltzmann quadrangulation is a two-type GW tree with offspring laws
mu_circ (geometric) and mu_bullet (supported on odd integers), built here
from the same closed forms.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np
import pandas as pd

from .bdg import phi_finite, domain_size
from .exceptions import MaxAttemptsExceeded, SizeCapExceeded, TailNotCertifiable
from .planar_map import HalfEdgeMap, QuadrangulationWithBoundary
from .rng import as_generator
from .trees import Forest, GeometricLaw, TabulatedLaw, count_forests, sample_gw_geometric, \
    sample_uniform_bridge, uniform_labeling, DEFAULT_SIZE_CAP

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
EDGE = HalfEdgeMap((1, 0), (0, 1), 0)


def as_fraction(p):
    if isinstance(p, float):
        # decimal literals such as 0.45 are meant exactly
        return Fraction(repr(p))
    return Fraction(p)


def check_p(p, upper=HALF, strict=False):
    p = as_fraction(p)
    if p < 0 or p > upper or (strict and p == upper):
        raise ValueError("Invalid p: {}".format(p))
    return p


class SkewParams(object):

    def __init__(self, p):
        self.p = check_p(p)
        self.g = self.p * (1 - self.p) / 3
        self.z = (1 - self.p) / 4

    def __repr__(self):
        return 'SkewParams(p={}, g={}, z={})'.format(self.p, self.g, self.z)


def F_closed(p):
    p = check_p(p)
    return Fraction(2, 3) * (3 - 4 * p) / (1 - p)


def F_sigma(p, sigma):
    p = check_p(p)
    if sigma < 0:
        raise ValueError("Invalid sigma: {}".format(sigma))
    s = sigma
    return Fraction(factorial(2 * s), factorial(s) * factorial(s + 2)) \
        * (2 + s * (1 - 2 * p) / (1 - p)) / (1 - p) ** s


def Fhat_sigma(p, sigma):
    r"""
    Partition function of quadrangulations with a simple boundary of
    perimeter 2 sigma at weight g_p.
    """
    p = check_p(p)
    if sigma < 0:
        raise ValueError("Invalid sigma: {}".format(sigma))
    if sigma == 0:
        return Fraction(1)
    if p == 0:
        return Fraction(int(sigma == 1))
    s = sigma
    return (p / (3 * (1 - p) ** 2)) ** s \
        * Fraction(factorial(3 * s - 3), factorial(s) * factorial(2 * s - 1)) \
        * (3 * s * (1 - p) / p + 2 - 3 * s)


def Fbullet_sigma(p, sigma):
    p = check_p(p)
    if sigma < 0:
        raise ValueError("Invalid sigma: {}".format(sigma))
    return comb(2 * sigma, sigma) / (1 - p) ** sigma


def zF2(p):
    r"""
    z_p F(g_p, z_p)^2, the argument at which the simple-boundary series is
    evaluated.
    """
    p = check_p(p)
    return (3 - 4 * p) ** 2 / (9 * (1 - p))


def r_hat(p):
    p = check_p(p)
    if p == 0:
        return None
    return 4 * (1 - p) ** 2 / (9 * p)


def tail_ratio(p):
    r"""
    Limit of the ratio of consecutive terms of the simple-boundary series at
    zF2(p); equals 1 exactly at p = 1/2.
    """
    p = check_p(p)
    return p * (3 - 4 * p) ** 2 / (4 * (1 - p) ** 3)


def _ratio_factors(p):
    # t_(s+1) / t_s = a (3s)(3s-1)(3s-2) / ((s+1)(2s+1)(2s)) (slope (s+1) + 2) / (slope s + 2)
    return p / (3 * (1 - p) ** 2) * zF2(p), 3 * (1 - 2 * p) / p


def _term_ratio(a, slope, s):
    return a * Fraction((3 * s) * (3 * s - 1) * (3 * s - 2), (s + 1) * (2 * s + 1) * (2 * s)) \
        * (slope * (s + 1) + 2) / (slope * s + 2)


@lru_cache(maxsize=64)
def _series_terms(p, truncation):
    # t_sigma = Fhat_sigma(p) zF2(p)^sigma for sigma = 0..truncation
    if p == 0:
        return tuple([Fraction(1), Fraction(1)] + [Fraction(0)] * (truncation - 1))[:truncation + 1]
    terms = [Fraction(1), Fhat_sigma(p, 1) * zF2(p)]
    a, slope = _ratio_factors(p)
    for s in range(1, truncation):
        terms.append(terms[-1] * _term_ratio(a, slope, s))
    return tuple(terms[:truncation + 1])


def series_terms(p, truncation):
    return _series_terms(check_p(p), truncation)


def series_sum(p, truncation, weighted=False):
    r"""
    sum_{1 <= sigma <= T} t_sigma, or of (2 sigma - 1) t_sigma when
    ``weighted``, by Horner's rule on the term ratios.
    """
    p = check_p(p)
    T = truncation
    if T < 1:
        return Fraction(0)
    if p == 0:
        return Fraction(1)
    a, slope = _ratio_factors(p)
    acc = Fraction(2 * T - 1 if weighted else 1)
    for s in range(T - 1, 0, -1):
        acc = (2 * s - 1 if weighted else 1) + _term_ratio(a, slope, s) * acc
    return Fhat_sigma(p, 1) * zF2(p) * acc


def series_tail_bound(p, truncation, weighted=False):
    r"""
    Upper bound on sum_{sigma > T} t_sigma (or of (2 sigma - 1) t_sigma when
    ``weighted``), T = truncation >= 1. Returns None when no bound applies.

    For p < 1/2 consecutive ratios are at most tail_ratio(p)(1 + 1/sigma),
    giving a geometric bound. At p = 1/2 the ratios are bounded by
    (sigma/(sigma+1))^(5/2) and the bound is the matching integral; this one
    is reported, not certified.
    """
    p = check_p(p)
    T = truncation
    t_T = series_terms(p, T)[T]
    if p == 0:
        return Fraction(0)
    if p == HALF:
        return 4 * t_T * T ** 2 if weighted else Fraction(2, 3) * t_T * T
    rho = tail_ratio(p) * (1 + Fraction(1, T))
    weight = 2 * T - 1 if weighted else 1
    if weighted:
        rho *= 1 + Fraction(2, 2 * T - 1)
    if rho >= 1:
        return None
    return weight * t_T * rho / (1 - rho)


class OffspringPair(object):
    r"""
    Offspring laws of the tree of components: mu_circ geometric with
    parameter 1 - 1/F, mu_bullet(2k+1) = zF2^(k+1) Fhat_(k+1) / (F - 1).
    """

    def __init__(self, p, tail_eps=Fraction(1, 10 ** 12), strict=True, max_truncation=1 << 14):
        self.p = check_p(p)
        F = F_closed(self.p)
        self.F = F
        self.m_circ = F - 1
        self.mu_circ = GeometricLaw(1 - 1 / F)
        tail_eps = as_fraction(tail_eps)

        if self.p == HALF:
            if strict:
                raise TailNotCertifiable('mu_bullet has no exponential moment at p = 1/2')
            truncation = 1024
        else:
            truncation = 64
            while True:
                bound = series_tail_bound(self.p, truncation)
                if bound is not None and bound / (F - 1) <= tail_eps:
                    break
                if truncation >= max_truncation:
                    raise TailNotCertifiable('tail above {} at truncation {}'.format(
                        float(tail_eps), truncation))
                truncation *= 2
        self.truncation = truncation
        self.tail = 1 - series_sum(self.p, truncation) / (F - 1)
        # critical pair: m_bullet = 1 / m_circ away from p = 1/2
        self.m_bullet = 1 / self.m_circ if self.p < HALF else None
        p_ = self.p

        def builder(length):
            ts = series_terms(p_, length)
            return [2 * k + 1 for k in range(length)], [t / (F - 1) for t in ts[1:length + 1]]

        self.mu_bullet = TabulatedLaw(builder, truncation, mean=self.m_bullet)
        logger.debug('offspring pair p=%s: truncation %d, tail %.3e', self.p, truncation, float(self.tail))

    def to_frame(self):
        rows = []
        for k, q in zip(self.mu_bullet.values.tolist(), self.mu_bullet.probs):
            rows.append({'k': k, 'numerator': str(q.numerator), 'denominator': str(q.denominator)})
        return pd.DataFrame(rows, columns=['k', 'numerator', 'denominator'])

    def __repr__(self):
        return 'OffspringPair(p={}, truncation={}, tail={:.3e})'.format(self.p, self.truncation,
                                                                         float(self.tail))


def offspring_pair(p, tail_eps=Fraction(1, 10 ** 12), strict=True):
    return OffspringPair(p, tail_eps, strict)


def criticality_check(p, truncation=2048):
    r"""
    Bracket m_bullet by the truncated series plus its tail bound and compare
    m_circ * m_bullet with 1.
    """
    p = check_p(p)
    F = F_closed(p)
    m_circ = F - 1
    partial = series_sum(p, truncation, weighted=True) / (F - 1)
    tail = series_tail_bound(p, truncation, weighted=True)
    upper = None if tail is None else partial + tail / (F - 1)
    low = m_circ * partial
    high = None if upper is None else m_circ * upper
    if high is None:
        verdict = 'uncertified'
    elif high < 1:
        verdict = 'subcritical'
    elif low <= 1 <= high:
        verdict = 'critical'
    else:
        verdict = 'supercritical'
    return {'p': str(p), 'm_circ': m_circ, 'm_bullet': (partial, upper), 'product': (low, high),
            'verdict': verdict}


def series_identity_check(p, truncation, eps):
    r"""
    Check that sum_sigma Fhat_sigma(g_p) zF2^sigma equals F(g_p, z_p): the
    truncated sum must lie below F within ``eps`` and the gap be covered by
    the tail bound.
    """
    p = check_p(p, strict=True)
    eps = as_fraction(eps)
    F = F_closed(p)
    partial = 1 + series_sum(p, truncation)
    tail = series_tail_bound(p, truncation) if truncation >= 1 else None
    residual = F - partial
    covered = tail is not None and residual <= tail + eps
    passed = abs(residual) <= eps and residual >= -eps and covered
    return {'p': str(p), 'truncation': truncation, 'residual': residual, 'tail_bound': tail,
            'passed': passed}


def count_quadrangulations(n, sigma):
    r"""
    Number of rooted quadrangulations with n inner faces and perimeter 2 sigma.
    """
    if n < 0 or sigma < 1:
        raise ValueError("Invalid dimensions: n={}, sigma={}".format(n, sigma))
    return comb(2 * sigma, sigma) * 3 ** n * count_forests(n, sigma) // (n + sigma + 1)


def mean_vertex_count(sigma, p):
    r"""
    Expected number of vertices under the pointed Boltzmann law.
    """
    p = check_p(p, strict=True)
    return 1 + sigma * (1 - p) / (1 - 2 * p)


def pointed_boltzmann_probability(n, sigma, p):
    r"""
    Probability of one rooted pointed quadrangulation with n inner faces and
    perimeter 2 sigma.
    """
    params = SkewParams(p)
    return params.g ** n * (1 - params.p) ** sigma / comb(2 * sigma, sigma)


def pointed_partial_sums(p, sigma, n_max):
    r"""
    sum_{n <= N} |pointed quadrangulations with n faces| g_p^n for N = 0..n_max,
    each to be compared with Fbullet_sigma(p).
    """
    g = SkewParams(p).g
    sums = []
    total = Fraction(0)
    for n in range(n_max + 1):
        total += domain_size(n, sigma) * g ** n
        sums.append(total)
    return sums


def sample_pointed_boltzmann(sigma, p, rng, size_cap=DEFAULT_SIZE_CAP):
    r"""
    BDG image of sigma independent uniformly labeled p-GW trees and a uniform
    bridge.
    """
    if sigma < 1:
        raise ValueError("Invalid sigma: {}".format(sigma))
    p = check_p(p)
    rng = as_generator(rng)
    trees = [uniform_labeling(sample_gw_geometric(p, size_cap, rng), rng) for _ in range(sigma)]
    return phi_finite(Forest(trees), sample_uniform_bridge(sigma, rng), check=False)


def sample_boltzmann(sigma, p, rng, max_attempts=10 ** 4, size_cap=DEFAULT_SIZE_CAP):
    r"""
    Forget the point of a pointed sample, accepting with probability
    (sigma + 1) / #V.
    """
    rng = as_generator(rng)
    acceptance = 0.
    for attempt in range(1, max_attempts + 1):
        pq = sample_pointed_boltzmann(sigma, p, rng, size_cap)
        vertices = pq.quad.map.num_vertices
        acceptance += (sigma + 1) / vertices
        if rng.random() * vertices < sigma + 1:
            return pq.quad
    raise MaxAttemptsExceeded(max_attempts, acceptance / max_attempts if max_attempts else None)


@lru_cache(maxsize=None)
def count_simple_quadrangulations(n, sigma):
    r"""
    Number of rooted quadrangulations with n inner faces and a simple boundary
    of perimeter 2 sigma, by the root-face peeling recursion.
    """
    if n < 0 or sigma < 1:
        raise ValueError("Invalid dimensions: n={}, sigma={}".format(n, sigma))
    if n == 0:
        return int(sigma == 1)
    m = sigma + 1
    return count_simple_quadrangulations(n - 1, m) + 2 * _simple_pairs(n - 1, m) \
        + sum(count_simple_quadrangulations(k, a) * _simple_pairs(n - 1 - k, m - a)
              for a in range(1, m - 1) for k in range(n))


@lru_cache(maxsize=None)
def _simple_pairs(n, m):
    # ordered pairs of simple pieces with n faces and half-perimeters summing to m
    return sum(count_simple_quadrangulations(k, a) * count_simple_quadrangulations(n - k, m - a)
               for a in range(1, m) for k in range(n + 1))


class PeelingTable(object):
    r"""
    Float weights of the root-face peeling at weight g_p. With r = r_hat(p),
    u_s = Fhat_s r^s decays polynomially; U2 and U3 are its second and third
    convolution powers. Tables double on demand.
    """

    def __init__(self, p, length=64):
        self.p = check_p(p)
        if self.p == 0:
            raise ValueError("Invalid p: {}".format(self.p))
        r = r_hat(self.p)
        self.leaf = float(r * r / SkewParams(self.p).g)
        self._build(length)

    def _build(self, length):
        p = self.p
        slope = float(3 * (1 - 2 * p) / p)
        s = np.arange(1, length, dtype=np.float64)
        ratios = 4. / 27 * (3 * s) * (3 * s - 1) * (3 * s - 2) / ((s + 1) * (2 * s + 1) * (2 * s)) \
            * (slope * (s + 1) + 2) / (slope * s + 2)
        u = np.zeros(length + 1)
        u[1] = float(4 * (3 - 4 * p) / (27 * p))
        u[2:] = u[1] * np.cumprod(ratios)
        self.u = u
        self.U2 = np.convolve(u, u)[:length + 1]
        self.U3 = np.convolve(u, self.U2)[:length + 1]
        self.length = length

    def ensure(self, m):
        while m > self.length:
            logger.debug('extending peeling table to %d', 2 * self.length)
            self._build(2 * self.length)

    def case_weights(self, sigma):
        r"""
        Unnormalized weights of (edge map, one piece, two pieces, three
        pieces) for a root face peeled off a map of half-perimeter sigma.
        """
        m = sigma + 1
        self.ensure(m)
        return np.array([self.leaf if sigma == 1 else 0., self.u[m], 2 * self.U2[m], self.U3[m]])

    def split_pair(self, m, rng):
        u = self.u
        return 1 + _choose(u[1:m] * u[m - 1:0:-1], rng)

    def split_triple(self, m, rng):
        a = 1 + _choose(self.u[1:m - 1] * self.U2[m - 1:1:-1], rng)
        b = self.split_pair(m - a, rng)
        return a, b, m - a - b


@lru_cache(maxsize=16)
def peeling_table(p):
    return PeelingTable(p)


def _choose(weights, rng):
    cdf = np.cumsum(weights)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side='right'))
    return min(idx, len(cdf) - 1)


def _peeling_plan(sigma, p, rng, size_cap):
    r"""
    Peel root faces until only edge maps remain. Returns the half-perimeter of
    every piece, its sub-pieces as ``(index, shared sides)`` in face order
    (None for an edge map) and the number of faces. Sub-pieces always get
    larger indices than their parent.
    """
    table = peeling_table(p)
    halves, parts = [sigma], [None]
    faces = 0
    stack = [0]
    while stack:
        k = stack.pop()
        case = _choose(table.case_weights(halves[k]), rng)
        if case == 0:
            continue
        faces += 1
        if 2 * faces + sigma > size_cap:
            raise SizeCapExceeded(size_cap, 'simple quadrangulation')
        m = halves[k] + 1
        if case == 1:
            split = [(m, 3)]
        elif case == 2:
            a = table.split_pair(m, rng)
            split = [(a, 2), (m - a, 1)] if rng.random() < .5 else [(a, 1), (m - a, 2)]
        else:
            split = [(h, 1) for h in table.split_triple(m, rng)]
        parts[k] = []
        for h, sides in split:
            parts[k].append((len(halves), sides))
            stack.append(len(halves))
            halves.append(h)
            parts.append(None)
    return halves, parts, faces


def _splice(rot, rot_inv, h1, h2):
    # merge the vertices of h1 and h2 at the corners following them
    a, b = rot[h1], rot[h2]
    rot[h1], rot[h2] = b, a
    rot_inv[b], rot_inv[a] = h1, h2


def _close_root_face(alpha, rot, rot_inv, pieces):
    r"""
    Glue ``pieces`` (root, shared sides, perimeter), in face order, along
    a new root face and return the new root edge. Each piece is rooted at
    the reverse of its last side and its boundary starts with its sides.
    """

    def walk(h, k):
        for _ in range(k):
            h = rot_inv[alpha[h]]
        return h

    root, sides, _ = pieces[0]
    first_side = alpha[walk(root, sides - 1)]
    outgoing = [walk(root, sides % perimeter) for root, sides, perimeter in pieces[1:]]
    for (root, _, _), h in zip(pieces, outgoing):
        _splice(rot, rot_inv, root, h)
    n1 = len(alpha)
    n2 = n1 + 1
    alpha += [n2, n1]
    last = pieces[-1][0]
    after, before = rot[last], rot_inv[first_side]
    rot += [after, first_side]
    rot_inv += [last, before]
    rot[last], rot_inv[after] = n1, n1
    rot[before], rot_inv[first_side] = n2, n2
    return n1


def _build_peeled(halves, parts):
    alpha, rot, rot_inv = [], [], []
    roots = [0] * len(halves)
    for k in range(len(halves) - 1, -1, -1):
        if parts[k] is None:
            h = len(alpha)
            alpha += [h + 1, h]
            rot += [h, h + 1]
            rot_inv += [h, h + 1]
            roots[k] = h
        else:
            roots[k] = _close_root_face(alpha, rot, rot_inv,
                                        [(roots[c], sides, 2 * halves[c]) for c, sides in parts[k]])
    return HalfEdgeMap(alpha, rot, roots[0])


def _check_simple_args(sigma, p):
    if sigma < 1:
        raise ValueError("Invalid sigma: {}".format(sigma))
    p = check_p(p)
    if p == 0 and sigma > 1:
        raise ValueError("Invalid sigma: no simple quadrangulation of perimeter {} at p = 0".format(
            2 * sigma))
    return p


def sample_simple_boltzmann(sigma, p, rng, size_cap=DEFAULT_SIZE_CAP):
    r"""
    Quadrangulation with a simple boundary of perimeter 2 sigma drawn with
    probability g_p^n / Fhat_sigma.

    Removing the root edge of such a map either leaves a simple map of
    half-perimeter sigma + 1 or, when the far corners of the root face touch
    the boundary, two or three simple maps glued at those corners; the edge
    map is the only map without faces. The sampler draws this peeling with
    the exact weights and glues the pieces back.
    """
    p = _check_simple_args(sigma, p)
    if p == 0:
        return QuadrangulationWithBoundary(EDGE)
    halves, parts, _ = _peeling_plan(sigma, p, as_generator(rng), size_cap)
    return QuadrangulationWithBoundary(_build_peeled(halves, parts))


def sample_simple_face_count(sigma, p, rng, size_cap=DEFAULT_SIZE_CAP):
    r"""
    Number of inner faces of `sample_simple_boltzmann`, without building the map.
    """
    p = _check_simple_args(sigma, p)
    if p == 0:
        return 0
    return _peeling_plan(sigma, p, as_generator(rng), size_cap)[2]


def simple_face_count_probability(n, sigma, p):
    return count_simple_quadrangulations(n, sigma) * SkewParams(p).g ** n / Fhat_sigma(p, sigma)


def depointing_gap(sigma, p, samples, rng):
    r"""
    Monte Carlo estimate of E[|1 - K / #V|] under the pointed law, K the
    normalizing constant 1 / E[1 / #V]; bounds the total variation between
    the pointed and unpointed Boltzmann laws.
    """
    rng = as_generator(rng)
    counts = np.array([sample_pointed_boltzmann(sigma, p, rng).quad.map.num_vertices
                       for _ in range(samples)], dtype=np.float64)
    K = 1.0 / np.mean(1.0 / counts)
    return {'gap': float(np.mean(np.abs(1.0 - K / counts))), 'mean_vertices': float(counts.mean()),
            'expected_mean_vertices': float(mean_vertex_count(sigma, p))}
