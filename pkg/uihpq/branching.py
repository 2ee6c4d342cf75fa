r"""
Decomposition of a quadrangulation with a boundary into its tree of
components and simple-boundary pieces, and the branching construction of the
half-plane quadrangulations for p < 1/2.

Scooping keeps the boundary edges only, doubling the edges with the outer
face on both sides. The result is a looptree: the outer walk of length 2 sigma
plus one loop per piece. Every loop is rooted at the edge leaving its parent
white vertex with the loop on its left, and the piece glued into it is rooted
at the same edge.
"""
import json
import logging
from collections import namedtuple

import numpy as np

from .boltzmann import offspring_pair, sample_simple_boltzmann, sample_simple_face_count, check_p, HALF
from .bdg.window import as_stream
from .exceptions import MaxAttemptsExceeded, NonSimplePiece, PerimeterMismatch, SizeCapExceeded
from .planar_map import HalfEdgeMap, QuadrangulationWithBoundary, boundary, is_simple_boundary, \
    map_from_dict, map_to_dict, restrict
from .rng import as_generator
from .trees import PlaneTree, enumerate_forests, loop_of, looptree_components, sample_kesten_two_type, \
    sample_two_type_gw, two_type_gw_probability, DEFAULT_SIZE_CAP

logger = logging.getLogger(__name__)

EDGE_MAP = QuadrangulationWithBoundary(HalfEdgeMap((1, 0), (0, 1), 0))

CutsetSample = namedtuple('CutsetSample', ['sizes', 'degrees'])


class Decomposition(object):
    r"""
    Tree of components (white vertices at even height, black at odd height)
    and, per black vertex, the rooted simple-boundary quadrangulation of
    perimeter deg(u) glued into its loop.
    """

    def __init__(self, tree, pieces):
        self.tree = tree
        self.pieces = dict(pieces)

    def black_vertices(self):
        heights = self.tree.heights
        return [u for u in range(self.tree.num_vertices) if heights[u] % 2]

    def degree(self, u):
        return len(self.tree.children[u]) + 1

    def check(self):
        r"""
        Raise if a black vertex has no piece or a piece does not fit its loop.
        """
        for u in self.black_vertices():
            if u not in self.pieces:
                raise PerimeterMismatch('black vertex {} has no piece'.format(u))
            q = self.pieces[u]
            if q.perimeter != self.degree(u):
                raise PerimeterMismatch('piece of black vertex {} has perimeter {}, loop has {}'.format(
                    u, q.perimeter, self.degree(u)))
            if not is_simple_boundary(q):
                raise NonSimplePiece('piece of black vertex {} has a non-simple boundary'.format(u))

    def to_dict(self):
        return {'tree': self.tree.to_word(),
                'pieces': [[u, map_to_dict(self.pieces[u])] for u in sorted(self.pieces)]}

    @classmethod
    def from_dict(cls, data):
        pieces = {}
        for u, piece in data['pieces']:
            q = map_from_dict(piece)
            pieces[int(u)] = q if isinstance(q, QuadrangulationWithBoundary) else QuadrangulationWithBoundary(q)
        return cls(PlaneTree.from_word(data['tree']), pieces)

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text):
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return 'Decomposition(tree={}, pieces={})'.format(self.tree.num_vertices, len(self.pieces))


def _outer_walk(m):
    walk = [m.alpha[m.root]]
    x = m.phi(walk[0])
    while x != walk[0]:
        walk.append(x)
        x = m.phi(x)
    return walk


def _scoop(q):
    m = q.map
    walk = _outer_walk(m)
    index = {x: i for i, x in enumerate(walk)}
    # x' = 2i keeps the outer face on its left, x'' = 2i + 1 the loop
    rot = [0] * (2 * len(walk))
    for cycle in m.vertices:
        slots = []
        for h in cycle:
            x = m.alpha[h]
            if x in index:
                slots += [2 * index[x] + 1, 2 * index[m.rot[h]]]
        for i, h in enumerate(slots):
            rot[h] = slots[(i + 1) % len(slots)]
    alpha = [h ^ 1 for h in range(len(rot))]
    return HalfEdgeMap(alpha, rot, 1), walk


def scoop(q):
    r"""
    Rooted looptree made of the boundary edges of q, rooted along the root of q.
    """
    if not q.map.alpha:
        return HalfEdgeMap.vertex_map()
    return _scoop(q)[0]


def tree_of_components(q):
    return looptree_components(scoop(q)).tree


def _piece(q, x):
    r"""
    Simple-boundary piece on the inner side of the outer half-edge x.
    """
    m = q.map
    outer = q.outer_face
    h = m.alpha[x]
    if m.face_of[h] == outer:
        return EDGE_MAP
    face_of = m.face_of
    seen = {face_of[h]}
    stack = [face_of[h]]
    keep = set()
    while stack:
        face = stack.pop()
        for g in m.faces[face]:
            keep.add(g)
            keep.add(m.alpha[g])
            other = face_of[m.alpha[g]]
            if other != outer and other not in seen:
                seen.add(other)
                stack.append(other)
    submap, _ = restrict(m, keep, h)
    return QuadrangulationWithBoundary(submap)


def psi(q):
    r"""
    Tree of components of q and the piece of every black vertex.
    """
    if not q.map.alpha:
        return Decomposition(PlaneTree.singleton(), {})
    loops, walk = _scoop(q)
    components = looptree_components(loops)
    pieces = {u: _piece(q, walk[h // 2]) for u, h in components.loop_roots.items()}
    return Decomposition(components.tree, pieces)


def psi_inverse(d):
    r"""
    Glue every piece into the loop of its black vertex, root edge on root edge.
    A perimeter-2 piece without inner faces closes its loop into one edge.
    """
    d.check()
    if d.tree.size == 0:
        return QuadrangulationWithBoundary(HalfEdgeMap.vertex_map())
    loops = loop_of(d.tree)
    components = looptree_components(loops)
    outer = loops.face_of[loops.alpha[loops.root]]
    new_id = {}
    for h in range(loops.num_half_edges):
        if loops.face_of[h] == outer:
            new_id[h] = len(new_id)
    alpha = [0] * len(new_id)
    rot = [0] * len(new_id)

    # slot[ell]: None for a closed two-loop, else (piece, local ids, boundary half-edge)
    slot = {}
    replaced = {}
    for u, start in sorted(components.loop_roots.items()):
        ells = [start]
        g = loops.phi(start)
        while g != start:
            ells.append(g)
            g = loops.phi(g)
        q = d.pieces[u]
        p = q.map
        if p.num_half_edges == 2:
            f0, f1 = new_id[loops.alpha[ells[0]]], new_id[loops.alpha[ells[1]]]
            alpha[f0], alpha[f1] = f1, f0
            for ell in ells:
                slot[ell] = None
                replaced[ell] = alpha[new_id[loops.alpha[ell]]]
            continue
        inner = [g for g in range(p.num_half_edges) if p.face_of[g] != q.outer_face]
        local = {g: len(alpha) + i for i, g in enumerate(inner)}
        alpha.extend(local[p.alpha[g]] if p.alpha[g] in local else 0 for g in inner)
        rot.extend([0] * len(inner))
        for ell, h in zip(ells, boundary(q)):
            f = new_id[loops.alpha[ell]]
            alpha[local[h]], alpha[f] = f, local[h]
            slot[ell] = (p, local, h)
            replaced[ell] = local[h]
        for g in inner:
            r = p.rot[g]
            if r not in local:
                continue
            rot[local[g]] = local[r]
        for ell, h in zip(ells, boundary(q)):
            rot[local[h]] = new_id[loops.rot[ell]]

    for f, i in new_id.items():
        ell = loops.rot[f]
        if slot[ell] is None:
            rot[i] = new_id[loops.rot[ell]]
        else:
            p, local, h = slot[ell]
            rot[i] = local[p.rot[p.rot[h]]]
    return QuadrangulationWithBoundary(HalfEdgeMap(alpha, rot, replaced[loops.root]))


def cut_r(t, r):
    r"""
    Prune the vertices of height larger than 2r.
    """
    if r < 1:
        raise ValueError("Invalid radius: {}".format(r))
    return t.truncated(2 * r)


def cut_decomposition(d, r):
    if r < 1:
        raise ValueError("Invalid radius: {}".format(r))
    heights = d.tree.heights
    kept = [v for v in range(d.tree.num_vertices) if heights[v] <= 2 * r]
    rank = {v: i for i, v in enumerate(kept)}
    pieces = {rank[u]: q for u, q in d.pieces.items() if u in rank}
    return Decomposition(cut_r(d.tree, r), pieces)


def cut_r_quad(d, r):
    r"""
    Cut_r of a decomposition (or of a quadrangulation, decomposed first): the
    pieces of the black vertices kept by cut_r glued into the pruned looptree.
    """
    if isinstance(d, QuadrangulationWithBoundary):
        d = psi(d)
    return psi_inverse(cut_decomposition(d, r))


def tree_of_components_law(sigma, p, pair=None):
    r"""
    Law of the tree of components of a Boltzmann quadrangulation of
    perimeter 2 sigma: the two-type GW tree of (mu_circ, mu_bullet)
    conditioned to have 2 sigma + 1 vertices, keyed by tree word.
    """
    if sigma < 1:
        raise ValueError("Invalid sigma: {}".format(sigma))
    pair = pair or offspring_pair(p)
    weights = {}
    for f in enumerate_forests(2 * sigma, 1):
        t = f[0]
        w = two_type_gw_probability(t, pair.mu_circ, pair.mu_bullet)
        if w:
            weights[t.to_word()] = w
    total = sum(weights.values())
    return {word: w / total for word, w in weights.items()}


def sample_tree_of_components(sigma, p, rng=None, pair=None, max_attempts=10 ** 5):
    r"""
    Two-type GW tree of (mu_circ, mu_bullet) conditioned to have 2 sigma + 1
    vertices, by rejection; growth stops as soon as the tree is too large.
    """
    if sigma < 1:
        raise ValueError("Invalid sigma: {}".format(sigma))
    pair = pair or offspring_pair(p)
    g = as_generator(rng)
    for attempt in range(1, max_attempts + 1):
        try:
            t = sample_two_type_gw(pair.mu_circ, pair.mu_bullet, 2 * sigma, g)
        except SizeCapExceeded:
            continue
        if t.num_vertices == 2 * sigma + 1:
            return t
    raise MaxAttemptsExceeded(max_attempts)


def sample_branching_decomposition(p, r, rng=None, size_cap=DEFAULT_SIZE_CAP, pair=None):
    r"""
    Kesten two-type tree of (mu_circ, mu_bullet) pruned at height 2r, with an
    independent simple-boundary Boltzmann piece in every loop.
    """
    p = check_p(p, HALF, strict=True)
    if r < 1:
        raise ValueError("Invalid radius: {}".format(r))
    stream = as_stream(rng)
    pair = pair or offspring_pair(p)
    kesten = sample_kesten_two_type(pair.mu_circ, pair.mu_bullet, 2 * r, stream.child('tree').generator(),
                                    size_cap)
    tree = kesten.tree
    heights = tree.heights
    pieces = {}
    for u in range(tree.num_vertices):
        if heights[u] % 2:
            sigma = (len(tree.children[u]) + 1) // 2
            pieces[u] = sample_simple_boltzmann(sigma, p, stream.child('piece', u), size_cap=size_cap)
    logger.debug('branching p=%s r=%d: %d tree vertices, %d pieces', p, r, tree.num_vertices, len(pieces))
    return Decomposition(tree, pieces), kesten.spine


def build_uihpq_branching(p, r, rng=None, size_cap=DEFAULT_SIZE_CAP, pair=None):
    r"""
    Cut_r of the half-plane quadrangulation UIHPQ_p, p < 1/2, built from its
    tree of components.
    """
    d, _ = sample_branching_decomposition(p, r, rng, size_cap, pair)
    return psi_inverse(d)


def spine_cutsets(p, count, rng=None, pair=None):
    r"""
    Edge counts of the pieces glued along the spine: Y drawn from the
    size-biased mu_bullet, then a simple-boundary piece of perimeter Y + 1.
    """
    p = check_p(p, HALF, strict=True)
    if count < 0:
        raise ValueError("Invalid count: {}".format(count))
    stream = as_stream(rng)
    pair = pair or offspring_pair(p)
    biased = pair.mu_bullet.size_biased()
    g = stream.child('degrees').generator()
    degrees = [biased.sample(g) + 1 for _ in range(count)]
    # a quadrangulation with n faces and perimeter k has 2n + k/2 edges
    sizes = [2 * sample_simple_face_count(k // 2, p, stream.child('piece', i)) + k // 2
             for i, k in enumerate(degrees)]
    return CutsetSample(np.asarray(sizes, dtype=np.int64), np.asarray(degrees, dtype=np.int64))


def resistance_lower_bound(cutsets):
    r"""
    Partial sums of 1/#C_i, lower bounds on the effective resistance between
    the root and the m-th cutset.
    """
    return np.cumsum(1.0 / cutsets.sizes)
