r"""
Windowed BDG mapping for the infinite half-plane quadrangulations.

A `WindowSample` materializes, lazily and deterministically, the two-sided
bridge and the labeled p-GW trees attached to its down-steps (tree i >= 0 at
the (i+1)-th down-step to the right of 0, tree -i at the i-th one to the
left). Trees are drawn from their own sub-streams, so the object a tree index
refers to never depends on how far the window has been grown.

Balls are certified by label barriers: every vertex whose corners all lie
right of the first corner with label <= L(0) - R - 1 (or left of the last such
corner before 0) is at distance > R from f(0), so the arcs found among the
trees between the two barrier trees contain Ball_R(f(0)).
"""
import logging
from collections import namedtuple
from fractions import Fraction

import numpy as np

from ..exceptions import UnresolvedSuccessor, WindowTooSmall
from ..planar_map import HalfEdgeMap, canonical_encoding, combinatorial_ball
from ..rng import Stream, as_generator
from ..trees import BridgeWindow, PlaneTree, contour_label_window, sample_gw_geometric, uniform_labeling, \
    DEFAULT_SIZE_CAP

logger = logging.getLogger(__name__)

MAX_TREES = 10 ** 6
MAX_DOUBLINGS = 6

WindowFragment = namedtuple('WindowFragment', ['map', 'out_arc', 'center_vertex', 'labels',
                                               'unresolved', 'trees'])
SpineDecomposition = namedtuple('SpineDecomposition', ['spine', 'labels', 'hitting_times', 'left',
                                                       'right'])


def as_stream(rng):
    if isinstance(rng, Stream):
        return rng
    return Stream(int(as_generator(rng).integers(0, 2 ** 63)))


class WindowSample(object):
    r"""
    Uniformly labeled infinite p-forest and two-sided bridge, grown on demand.
    """

    def __init__(self, p, rng, stop_min=1, size_cap=DEFAULT_SIZE_CAP):
        self.p = Fraction(p)
        if not 0 <= self.p <= Fraction(1, 2):
            raise ValueError("Invalid p: {}".format(p))
        self.stream = as_stream(rng)
        self.size_cap = size_cap
        self.bridge = BridgeWindow(self.stream.child('bridge').generator()).extend(stop_min)
        self._trees = {}
        self._positive = []
        self._negative = []
        self._next_right = 0
        self._next_left = 1

    def at(self, i):
        r"""
        The i-th down-step of the bridge (i >= 1 right of 0, i <= -1 left).
        """
        b = self.bridge
        if i >= 1:
            while len(self._positive) < i:
                k = self._next_right
                if b[k + 1] == b[k] - 1:
                    self._positive.append(k)
                self._next_right += 1
            return self._positive[i - 1]
        if i <= -1:
            while len(self._negative) < -i:
                j = self._next_left
                if b[-j + 1] == b[-j] - 1:
                    self._negative.append(-j)
                self._next_left += 1
            return self._negative[-i - 1]
        raise ValueError("Invalid down-step index: {}".format(i))

    def attachment(self, i):
        return self.at(i + 1) if i >= 0 else self.at(i)

    def root_label(self, i):
        return self.bridge[self.attachment(i)]

    def tree(self, i):
        if i not in self._trees:
            t = sample_gw_geometric(self.p, self.size_cap, self.stream.child('tree', i))
            self._trees[i] = uniform_labeling(t, self.stream.child('labels', i))
        return self._trees[i]

    def min_label(self, i):
        return self.root_label(i) + min(self.tree(i).labels)

    @property
    def bounds(self):
        return (min(self._trees), max(self._trees) + 1) if self._trees else (0, 0)

    def barrier(self, level):
        r"""
        Tree range [lo, hi) reaching past the first corner after tree 0 and the
        last corner before tree 0 with label <= level.
        """
        hi = 1
        while self.min_label(hi) > level:
            hi += 1
            if hi > MAX_TREES:
                raise WindowTooSmall('no label <= {} within {} trees'.format(level, MAX_TREES))
        lo = -1
        while self.min_label(lo) > level:
            lo -= 1
            if -lo > MAX_TREES:
                raise WindowTooSmall('no label <= {} within {} trees'.format(level, MAX_TREES))
        return lo, hi + 1

    def contour(self, lo, hi):
        return contour_label_window({i: self.tree(i) for i in range(lo, hi)}, self.bridge, self)

    def successor(self, cl, j):
        r"""
        succ(j): first later corner with label L(j) - 1.
        """
        target = cl.L(j) - 1
        later = np.nonzero(cl.labels[j - cl.start + 1:] == target)[0]
        if not len(later):
            raise UnresolvedSuccessor('corner {} with label {}'.format(j, target + 1))
        return j + 1 + int(later[0])

    def __repr__(self):
        return 'WindowSample(p={}, trees={}, bridge={})'.format(self.p, self.bounds, self.bridge)


def phi_window(w, lo, hi):
    r"""
    Map fragment spanned by the arcs of the corners of trees lo..hi-1 whose
    successors lie in the same trees. Arcs are numbered in corner order; the
    fragment is rooted at the arc leaving f(0).
    """
    cl = w.contour(lo, hi)
    labels = cl.labels.tolist()
    n = len(labels)
    succ = [-1] * n
    nearest = {}
    for j in range(n - 1, -1, -1):
        succ[j] = nearest.get(labels[j] - 1, -1)
        nearest[labels[j]] = j
    arc_id = {}
    for j in range(n):
        if succ[j] >= 0:
            arc_id[j] = len(arc_id)
    incoming = [[] for _ in range(n)]
    for j, s in enumerate(succ):
        if s >= 0:
            incoming[s].append(j)

    groups = {}
    for j in range(n):
        groups.setdefault((int(cl.tree[j]), int(cl.vertex[j])), []).append(j)
    rot = [0] * (2 * len(arc_id))
    for corners in groups.values():
        cycle = []
        for k in corners:
            # successors point forward, so nearer sources have larger index
            cycle.extend(2 * arc_id[j] + 1 for j in sorted(incoming[k], reverse=True))
            if k in arc_id:
                cycle.append(2 * arc_id[k])
        for i, h in enumerate(cycle):
            rot[h] = cycle[(i + 1) % len(cycle)]
    alpha = [h ^ 1 for h in range(2 * len(arc_id))]
    center = -cl.start
    m = HalfEdgeMap(alpha, rot, 2 * arc_id[center])

    out_arc = {j + cl.start: 2 * a for j, a in arc_id.items()}
    vertex_labels = {}
    for j, a in arc_id.items():
        vertex_labels[m.origin(2 * a)] = labels[j]
    unresolved = [j + cl.start for j in range(n) if succ[j] < 0]
    return WindowFragment(m, out_arc, m.origin(2 * arc_id[center]), vertex_labels, unresolved, (lo, hi))


def root_half_edge(w, frag):
    r"""
    Root edge of the half-plane map: leave the last corner of tree 0 and
    follow the face on the right for d(1) steps, as in the finite case.
    """
    m = frag.map
    z = m.alpha[frag.out_arc[2 * w.tree(0).size]]
    for _ in range(w.at(1)):
        z = m.phi(z)
    return m.alpha[z]


def _ball(w, center, r, depth):
    level = w.root_label(0) - depth - 1
    lo, hi = w.barrier(level)
    frag = phi_window(w, lo, hi)
    if center == 'f0':
        return combinatorial_ball(frag.map, frag.center_vertex, r, frag.map.root)
    rho = root_half_edge(w, frag)
    return combinatorial_ball(frag.map, frag.map.origin(rho), r, rho)


def uihpq_ball(p, r, center='f0', rng=None, check_doubling=True, size_cap=DEFAULT_SIZE_CAP):
    r"""
    Ball of radius r of the UIHPQ_p around f(0) or around the root vertex.

    The ball is computed inside the barrier window of depth R and, with
    ``check_doubling``, recomputed at depth 2R + 1; the two canonical
    encodings must agree.
    """
    if center not in ('f0', 'root'):
        raise ValueError("Invalid center: {}".format(center))
    if r < 0:
        raise ValueError("Invalid radius: {}".format(r))
    if r == 0:
        return combinatorial_ball(HalfEdgeMap.vertex_map(), r=0)
    w = WindowSample(p, rng, stop_min=r + 2, size_cap=size_cap)
    depth = r if center == 'f0' else r + w.at(1) + 3
    ball = _ball(w, center, r, depth)
    if not check_doubling:
        return ball
    for _ in range(MAX_DOUBLINGS):
        depth = 2 * depth + 1
        wider = _ball(w, center, r, depth)
        if canonical_encoding(wider.submap) == canonical_encoding(ball.submap):
            return ball
        logger.warning('ball changed when doubling the window to depth %d', depth)
        ball = wider
    raise WindowTooSmall('ball not stable after {} doublings'.format(MAX_DOUBLINGS))


def _excursion_tree(b, start, stop, side):
    # contour of the excursions of b(side * k) above b(side * start), start <= k < stop
    word = ''.join('(' if b[side * (k + 1)] > b[side * k] else ')' for k in range(start, stop))
    return PlaneTree.from_word(word)


def uihpq0_spine(w, r):
    r"""
    Spine of the p = 0 half-plane tree. S_i is the first k >= 0 with b(k) = -i,
    the spine vertex s_i is the tree carried by the first down-step at or
    after S_i from level -i.

    ``left[i]`` is the plane tree coded by the excursions of b above -i
    between S_i and S_{i+1}: its root has one child per excursion, each child
    carrying the tree of its excursion. ``right[i]`` reads the negative side
    the same way.
    """
    if w.p != 0:
        raise ValueError("Invalid window: spine decomposition needs p = 0, got {}".format(w.p))
    b = w.bridge
    if min(b.right) > -(r + 1) or min(b.left) > -(r + 1):
        raise WindowTooSmall('bridge minima {} do not reach {}'.format(b.minima(), -(r + 1)))
    hits = [b.first_hit(-i, 1) for i in range(r + 2)]
    hits_left = [b.first_hit(-i, -1) for i in range(r + 2)]
    spine = []
    for i in range(r + 1):
        k = hits[i]
        while not (b[k] == -i and b[k + 1] == -i - 1):
            k += 1
        ordinal = 1
        while w.at(ordinal) < k:
            ordinal += 1
        spine.append(ordinal - 1)
    left = [_excursion_tree(b, hits[i], hits[i + 1] - 1, 1) for i in range(r + 1)]
    right = [_excursion_tree(b, hits_left[i], hits_left[i + 1] - 1, -1) for i in range(r + 1)]
    labels = [w.root_label(s) for s in spine]
    return SpineDecomposition(tuple(spine), tuple(labels), tuple(hits[:r + 1]), tuple(left), tuple(right))
