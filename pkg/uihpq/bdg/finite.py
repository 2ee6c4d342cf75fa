r"""
Finite BDG mapping: (labeled forest, bridge) -> rooted pointed
quadrangulation with a boundary.

Every corner i of the contour exploration emits one arc to its successor, the
next corner (cyclically) whose shifted label is one less, or to the extra
vertex v* when there is none. Arc i has half-edges 2i (at the corner) and
2i + 1 (at the successor).
"""
import itertools
import logging
import time
from collections import namedtuple
from math import comb

from ..exceptions import BudgetExceeded, UIHPQError
from ..planar_map import HalfEdgeMap, QuadrangulationWithBoundary, canonical_encoding, \
    validate_quadrangulation
from ..trees import Forest, contour_label, count_forests, enumerate_forests, enumerate_labelings, \
    enumerate_bridges

logger = logging.getLogger(__name__)

AUDIT_BUDGET = 10 ** 6

PointedQuadrangulation = namedtuple('PointedQuadrangulation', ['quad', 'pointed_vertex', 'labels'])


def successors(labels):
    r"""
    succ(i) for the cyclic label sequence, -1 standing for infinity.
    """
    n = len(labels)
    succ = [-1] * n
    nearest = {}
    for i in range(2 * n - 1, -1, -1):
        if i < n:
            succ[i] = nearest.get(labels[i] - 1, -1)
        nearest[labels[i % n]] = i % n
    return succ


def arcs_to_map(succ, corner_groups, root_corner, rotate):
    r"""
    Assemble the map from the successor arcs.

    ``corner_groups`` lists, per vertex of the forest, its corners in contour
    order. Incoming arcs enter a corner ordered by how far back their source
    lies, and v* sees its incoming arcs in decreasing order of source.
    The root is found by starting from the outgoing arc of ``root_corner``
    and turning ``rotate`` times around the face on its right.
    """
    n = len(succ)
    incoming = [[] for _ in range(n)]
    at_infinity = []
    for j, s in enumerate(succ):
        if s < 0:
            at_infinity.append(j)
        else:
            incoming[s].append(j)

    rot = [0] * (2 * n)

    def close(cycle):
        for i, h in enumerate(cycle):
            rot[h] = cycle[(i + 1) % len(cycle)]

    for corners in corner_groups:
        cycle = []
        for k in corners:
            cycle.extend(2 * j + 1 for j in sorted(incoming[k], key=lambda j: (k - j) % n))
            cycle.append(2 * k)
        close(cycle)
    close([2 * j + 1 for j in sorted(at_infinity, reverse=True)])

    alpha = [h ^ 1 for h in range(2 * n)]
    z = alpha[2 * root_corner]
    for _ in range(rotate):
        z = rot[alpha[z]]
    return HalfEdgeMap(alpha, rot, alpha[z])


def phi_finite(f, b, check=True):
    r"""
    Rooted pointed quadrangulation with |f| inner faces and perimeter 2 sigma.
    ``labels[v]`` are the shifted labels, v* carrying the minimum minus one.
    """
    if not f.labeled:
        raise ValueError("Invalid forest: trees must be labeled")
    cl = contour_label(f, b)
    n_corners = len(cl) - 1
    labels = cl.labels[:n_corners].tolist()
    succ = successors(labels)

    groups = {}
    for k in range(n_corners):
        groups.setdefault((int(cl.tree[k]), int(cl.vertex[k])), []).append(k)
    root_corner = 2 * f[0].size
    m = arcs_to_map(succ, list(groups.values()), root_corner, b.down_steps().at(1))

    vertex_labels = [0] * m.num_vertices
    for k in range(n_corners):
        vertex_labels[m.origin(2 * k)] = labels[k]
    pointed = m.origin(2 * succ.index(-1) + 1)
    vertex_labels[pointed] = min(labels) - 1
    q = QuadrangulationWithBoundary(m)
    if check:
        issues = validate_quadrangulation(q)
        if issues or q.size != f.size or q.sigma != b.sigma:
            raise UIHPQError('invalid BDG image: {}'.format(issues or 'wrong dimensions'))
    return PointedQuadrangulation(q, pointed, tuple(vertex_labels))


def domain_size(n, sigma):
    return 3 ** n * count_forests(n, sigma) * comb(2 * sigma, sigma)


def enumerate_domain(n, sigma):
    r"""
    All (labeled forest, bridge) pairs with sigma trees and n edges.
    """
    bridges = list(enumerate_bridges(sigma))
    for forest in enumerate_forests(n, sigma):
        labelings = [list(enumerate_labelings(t)) for t in forest]
        for trees in itertools.product(*labelings):
            for b in bridges:
                yield Forest(trees), b


def labels_consistent(pq):
    m = pq.quad.map
    return all(abs(pq.labels[m.origin(h)] - pq.labels[m.target(h)]) == 1
               for h in range(m.num_half_edges))


def phi_bijectivity_audit(n, sigma, budget=AUDIT_BUDGET):
    r"""
    Apply phi_finite to the whole domain and check injectivity and validity.
    """
    size = domain_size(n, sigma)
    if size > budget:
        raise BudgetExceeded("domain of size {} exceeds {}".format(size, budget))
    start = time.time()
    image = set()
    valid = True
    for f, b in enumerate_domain(n, sigma):
        pq = phi_finite(f, b, check=False)
        q = pq.quad
        if validate_quadrangulation(q) or q.size != n or q.sigma != sigma or not labels_consistent(pq):
            valid = False
        image.add(canonical_encoding(q.map, pointed=pq.pointed_vertex))
    elapsed = time.time() - start
    logger.info('audit n=%d sigma=%d: domain %d image %d valid %s', n, sigma, size, len(image), valid)
    return {'n': n, 'sigma': sigma, 'domain': size, 'image': len(image), 'valid': valid,
            'elapsed': elapsed}


def enumerate_quadrangulations(n, sigma):
    r"""
    Distinct rooted quadrangulations with n inner faces and perimeter 2 sigma,
    obtained by forgetting the point of the BDG image.
    """
    seen = set()
    for f, b in enumerate_domain(n, sigma):
        q = phi_finite(f, b, check=False).quad
        key = canonical_encoding(q.map)
        if key not in seen:
            seen.add(key)
            yield q
