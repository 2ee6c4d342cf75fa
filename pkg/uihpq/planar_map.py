r"""
Rooted planar maps as pairs of permutations on half-edges.

Conventions used everywhere in the package:

* ``alpha`` pairs the two half-edges of an edge, ``rot`` gives the next
  half-edge counterclockwise around the common origin.
* Faces are the orbits of ``phi = rot o alpha``; the face of ``h`` lies on the
  left of ``h``.
* A quadrangulation with a boundary is rooted so that the outer face lies on
  the right of the root, i.e. ``alpha(root)`` belongs to the outer face.
* The vertex map has no half-edge, one vertex, one face and root ``-1``.
"""
import io
import json
from collections import deque
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exceptions import MapFormatError

PMAP_VERSION = 1


def _orbits(perm):
    owner = [-1] * len(perm)
    orbits = []
    for h in range(len(perm)):
        if owner[h] >= 0:
            continue
        k = len(orbits)
        cycle = []
        x = h
        while owner[x] < 0:
            owner[x] = k
            cycle.append(x)
            x = perm[x]
        orbits.append(cycle)
    return owner, orbits


class HalfEdgeMap(object):
    r"""
    Rooted planar map. Immutable; vertices and faces are computed lazily.

    Vertex ids are the rot-orbits numbered by their smallest half-edge, face ids
    likewise for phi-orbits.
    """
    __slots__ = ['alpha', 'rot', 'root', '__dict__']

    def __init__(self, alpha, rot, root):
        self.alpha = tuple(int(a) for a in alpha)
        self.rot = tuple(int(r) for r in rot)
        if len(self.alpha) != len(self.rot):
            raise ValueError("Invalid permutations: alpha has {} entries, rot has {}".format(
                len(self.alpha), len(self.rot)))
        self.root = -1 if root is None else int(root)

    @classmethod
    def vertex_map(cls):
        return cls((), (), -1)

    @property
    def num_half_edges(self):
        return len(self.alpha)

    @property
    def num_edges(self):
        return len(self.alpha) // 2

    def phi(self, h):
        return self.rot[self.alpha[h]]

    @cached_property
    def _vertex_orbits(self):
        return _orbits(self.rot)

    @cached_property
    def _face_orbits(self):
        return _orbits([self.rot[a] for a in self.alpha])

    @cached_property
    def rot_inverse(self):
        inv = [0] * len(self.rot)
        for h, r in enumerate(self.rot):
            inv[r] = h
        return tuple(inv)

    @property
    def vertex_of(self):
        return self._vertex_orbits[0]

    @property
    def vertices(self):
        return self._vertex_orbits[1]

    @property
    def face_of(self):
        return self._face_orbits[0]

    @property
    def faces(self):
        return self._face_orbits[1]

    @property
    def num_vertices(self):
        return len(self.vertices) if self.alpha else 1

    @property
    def num_faces(self):
        return len(self.faces) if self.alpha else 1

    @property
    def root_vertex(self):
        return self.vertex_of[self.root] if self.alpha else 0

    def origin(self, h):
        return self.vertex_of[h]

    def target(self, h):
        return self.vertex_of[self.alpha[h]]

    def degree(self, v):
        return len(self.vertices[v]) if self.alpha else 0

    @cached_property
    def neighbours(self):
        r"""
        Per vertex, the targets of its half-edges in rot order (with multiplicity).
        """
        if not self.alpha:
            return [[]]
        vertex_of = self.vertex_of
        alpha = self.alpha
        return [[vertex_of[alpha[h]] for h in cycle] for cycle in self.vertices]

    def rerooted(self, root):
        return HalfEdgeMap(self.alpha, self.rot, root)

    def __eq__(self, other):
        return isinstance(other, HalfEdgeMap) and self.alpha == other.alpha \
            and self.rot == other.rot and self.root == other.root

    def __hash__(self):
        return hash((self.alpha, self.rot, self.root))

    def __repr__(self):
        return 'HalfEdgeMap(V={}, E={}, F={}, root={})'.format(
            self.num_vertices, self.num_edges, self.num_faces, self.root)


class QuadrangulationWithBoundary(object):
    r"""
    A map whose faces all have degree 4 except the outer face of degree 2*sigma.
    """

    def __init__(self, map, outer_face=None):
        self.map = map
        if outer_face is None:
            outer_face = map.face_of[map.alpha[map.root]] if map.alpha else 0
        self.outer_face = outer_face

    @property
    def sigma(self):
        if not self.map.alpha:
            return 0
        return len(self.map.faces[self.outer_face]) // 2

    @property
    def size(self):
        return self.map.num_faces - 1

    @property
    def perimeter(self):
        return 2 * self.sigma

    def __repr__(self):
        return 'QuadrangulationWithBoundary(n={}, sigma={}, V={})'.format(
            self.size, self.sigma, self.map.num_vertices)


class BallSubmap(object):
    r"""
    Combinatorial ball: vertices at distance <= radius from center and all
    edges between them. ``remap[h]`` is the original id of submap half-edge h,
    ``distance[v]`` the distance of submap vertex v to the center.
    """

    def __init__(self, submap, radius, center, remap, distance):
        self.submap = submap
        self.radius = radius
        self.center = center
        self.remap = tuple(remap)
        self.distance = tuple(distance)

    @property
    def num_vertices(self):
        return self.submap.num_vertices

    def encoding(self):
        return canonical_encoding(self.submap)

    def __repr__(self):
        return 'BallSubmap(r={}, V={}, E={})'.format(
            self.radius, self.submap.num_vertices, self.submap.num_edges)


def validate(m):
    issues = []
    n = m.num_half_edges
    if n % 2:
        issues.append('odd number of half-edges')
    if any(not 0 <= a < n for a in m.alpha) or any(not 0 <= r < n for r in m.rot):
        issues.append('half-edge id out of range')
        return issues
    if any(m.alpha[h] == h for h in range(n)):
        issues.append('alpha not fixed-point-free')
    if any(m.alpha[m.alpha[h]] != h for h in range(n)):
        issues.append('alpha not an involution')
    if sorted(m.rot) != list(range(n)):
        issues.append('rot not a permutation')
    if n == 0:
        if m.root != -1:
            issues.append('root out of range')
        return issues
    if not 0 <= m.root < n:
        issues.append('root out of range')
    if issues:
        return issues

    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        h = stack.pop()
        for x in (m.alpha[h], m.rot[h]):
            if not seen[x]:
                seen[x] = True
                stack.append(x)
    if not all(seen):
        issues.append('not connected')
        return issues
    euler = m.num_vertices - m.num_edges + m.num_faces
    if euler != 2:
        issues.append('Euler characteristic {} != 2'.format(euler))
    return issues


def validate_quadrangulation(q):
    issues = validate(q.map)
    if issues:
        return issues
    m = q.map
    if not m.alpha:
        return issues
    for k, face in enumerate(m.faces):
        if k != q.outer_face and len(face) != 4:
            issues.append('inner face {} has degree {}'.format(k, len(face)))
    if len(m.faces[q.outer_face]) % 2:
        issues.append('outer face has odd degree')
    if m.face_of[m.alpha[m.root]] != q.outer_face:
        issues.append('outer face not on the right of the root')
    if m.num_vertices != q.size + q.sigma + 1:
        issues.append('vertex count {} != n + sigma + 1'.format(m.num_vertices))
    return issues


def faces(m):
    return [list(face) for face in m.faces] if m.alpha else [[]]


def outer_face(q):
    return q.outer_face


def boundary(q):
    r"""
    Boundary half-edges in cyclic order starting at the root, each with the
    outer face on its right.
    """
    m = q.map
    if not m.alpha:
        return []
    walk = [m.alpha[m.root]]
    x = m.phi(walk[0])
    while x != walk[0]:
        walk.append(x)
        x = m.phi(x)
    return [m.alpha[walk[0]]] + [m.alpha[walk[k]] for k in range(len(walk) - 1, 0, -1)]


def is_simple_boundary(q):
    origins = [q.map.origin(h) for h in boundary(q)]
    return len(set(origins)) == len(origins)


def graph_distances(m, v=None, limit=None):
    if v is None:
        v = m.root_vertex
    if not m.alpha:
        return [0]
    if not 0 <= v < m.num_vertices:
        raise ValueError("Invalid vertex: {}".format(v))
    neighbours = m.neighbours
    dist = [-1] * m.num_vertices
    dist[v] = 0
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in neighbours[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def restrict(m, keep, root):
    r"""
    Submap on the half-edge set ``keep`` (closed under alpha), with the
    cyclic orders of m restricted to it. Returns (submap, remap).
    """
    kept = sorted(keep)
    if not kept:
        return HalfEdgeMap.vertex_map(), ()
    new_id = {h: i for i, h in enumerate(kept)}
    alpha = [new_id[m.alpha[h]] for h in kept]
    rot = []
    for h in kept:
        x = m.rot[h]
        while x not in new_id:
            x = m.rot[x]
        rot.append(new_id[x])
    return HalfEdgeMap(alpha, rot, new_id[root]), tuple(kept)


def combinatorial_ball(m, center=None, r=0, root=None):
    if r < 0:
        raise ValueError("Invalid radius: {}".format(r))
    if not m.alpha:
        return BallSubmap(HalfEdgeMap.vertex_map(), r, 0, (), (0,))
    if center is None:
        center = m.root_vertex
    if not 0 <= center < m.num_vertices:
        raise ValueError("Invalid center: {}".format(center))
    if root is None:
        root = m.root if m.vertex_of[m.root] == center else m.vertices[center][0]
    elif m.vertex_of[root] != center:
        raise ValueError("Invalid root: half-edge {} does not start at {}".format(root, center))
    dist = graph_distances(m, center, limit=r)
    vertex_of = m.vertex_of
    keep = [h for h in range(m.num_half_edges)
            if 0 <= dist[vertex_of[h]] <= r and 0 <= dist[vertex_of[m.alpha[h]]] <= r]
    if r == 0 or not keep:
        return BallSubmap(HalfEdgeMap.vertex_map(), r, center, (), (0,))
    submap, remap = restrict(m, keep, root)
    distance = [dist[vertex_of[remap[cycle[0]]]] for cycle in submap.vertices]
    return BallSubmap(submap, r, center, remap, distance)


def canonical_order(m):
    r"""
    Half-edges in order of discovery by the traversal from the root that looks
    at alpha(h) then rot(h); returns (order, label).
    """
    label = [-1] * m.num_half_edges
    if not m.alpha:
        return [], label
    order = [m.root]
    label[m.root] = 0
    i = 0
    while i < len(order):
        h = order[i]
        for x in (m.alpha[h], m.rot[h]):
            if label[x] < 0:
                label[x] = len(order)
                order.append(x)
        i += 1
    return order, label


def canonical_encoding(m, pointed=None):
    r"""
    Bytes equal for two rooted maps iff they are root-preserving isomorphic.
    Layout (little-endian uint32): version, H, then per half-edge in discovery
    order the labels of alpha(h) and rot(h). With ``pointed`` a vertex id, the
    smallest label among its half-edges is appended.
    """
    order, label = canonical_order(m)
    words = [PMAP_VERSION, m.num_half_edges]
    for h in order:
        words.append(label[m.alpha[h]])
        words.append(label[m.rot[h]])
    if pointed is not None:
        words.append(min(label[h] for h in m.vertices[pointed]) if m.alpha else 0)
    return np.asarray(words, dtype='<u4').tobytes()


def local_distance(m1, m2):
    ecc1 = max(graph_distances(m1))
    ecc2 = max(graph_distances(m2))
    for r in range(1, max(ecc1, ecc2) + 2):
        b1 = combinatorial_ball(m1, r=r).submap
        b2 = combinatorial_ball(m2, r=r).submap
        if canonical_encoding(b1) != canonical_encoding(b2):
            return Fraction(1, r)
    return Fraction(0)


def map_to_dict(m):
    q = None
    if isinstance(m, QuadrangulationWithBoundary):
        q, m = m, m.map
    rep = None
    if q is not None and m.alpha:
        rep = m.faces[q.outer_face][0]
    return {
        'version': PMAP_VERSION,
        'half_edges': m.num_half_edges,
        'alpha': list(m.alpha),
        'rot': list(m.rot),
        'root': m.root if m.alpha else None,
        'outer_face_rep': rep,
    }


def _locate(text, key):
    pos = text.find('"{}"'.format(key))
    if pos < 0:
        return None, None
    line = text.count('\n', 0, pos) + 1
    return line, pos - (text.rfind('\n', 0, pos) + 1) + 1


def map_from_dict(data, text=''):
    def fail(key, message):
        line, column = _locate(text, key)
        raise MapFormatError("field '{}': {}".format(key, message), line, column)

    if not isinstance(data, dict):
        raise MapFormatError('top-level value must be an object', 1, 1)
    for key in ('version', 'half_edges', 'alpha', 'rot', 'root'):
        if key not in data:
            raise MapFormatError("missing field '{}'".format(key))
    if data['version'] != PMAP_VERSION:
        fail('version', 'unsupported version {}'.format(data['version']))
    n = data['half_edges']
    if not isinstance(n, int) or n < 0 or n % 2:
        fail('half_edges', 'expected an even non-negative integer')
    for key in ('alpha', 'rot'):
        value = data[key]
        if not isinstance(value, list) or len(value) != n:
            fail(key, 'expected a list of {} integers'.format(n))
        if any(not isinstance(x, int) or not 0 <= x < n for x in value):
            fail(key, 'id out of range')
    root = data['root']
    if n == 0:
        if root not in (None, -1):
            fail('root', 'vertex map has no root half-edge')
        root = -1
    elif not isinstance(root, int) or not 0 <= root < n:
        fail('root', 'id out of range')
    m = HalfEdgeMap(data['alpha'], data['rot'], root)
    rep = data.get('outer_face_rep')
    if rep is None:
        return m
    if not isinstance(rep, int) or not (0 <= rep < n or n == 0):
        fail('outer_face_rep', 'id out of range')
    return QuadrangulationWithBoundary(m, m.face_of[rep] if n else 0)


def write_map(m, target):
    text = json.dumps(map_to_dict(m), sort_keys=True)
    if isinstance(target, io.IOBase) or hasattr(target, 'write'):
        target.write(text + '\n')
        return
    with open(target, 'w') as f:
        f.write(text + '\n')


def read_map(source):
    if hasattr(source, 'read'):
        text = source.read()
    else:
        with open(source) as f:
            text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MapFormatError(e.msg, e.lineno, e.colno)
    return map_from_dict(data, text)
