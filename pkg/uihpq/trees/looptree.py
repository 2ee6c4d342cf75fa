r"""
Looptrees: every black vertex (odd height) of a plane tree becomes a loop
through its parent and children, white vertices become the vertices of the
map.

Half-edge layout of loop_of: black vertex u with parent w and children
c_1..c_k owns edges e_0 = (w, c_1), e_j = (c_j, c_{j+1}), e_k = (c_k, w).
Edge e_j has forward half-edge 2(base + j) and reverse half-edge
2(base + j) + 1. Forward half-edges see the outer face on their left, reverse
ones the loop.
"""
from collections import namedtuple

from ..exceptions import MalformedLooptree
from ..planar_map import HalfEdgeMap
from .plane_tree import PlaneTree

LooptreeComponents = namedtuple('LooptreeComponents', ['tree', 'loop_roots', 'white_vertices'])


def loop_of(t):
    if t.size == 0:
        return HalfEdgeMap.vertex_map()
    heights = t.heights
    children = t.children
    base = {}
    edges = 0
    for u in range(t.num_vertices):
        if heights[u] % 2:
            base[u] = edges
            edges += len(children[u]) + 1

    def fwd(u, j):
        return 2 * (base[u] + j)

    def rev(u, j):
        return 2 * (base[u] + j) + 1

    rot = [0] * (2 * edges)
    for x in range(t.num_vertices):
        if heights[x] % 2:
            continue
        cycle = []
        if x:
            u = t.parent[x]
            j = children[u].index(x) + 1
            cycle += [fwd(u, j), rev(u, j - 1)]
        for u in children[x]:
            cycle += [fwd(u, 0), rev(u, len(children[u]))]
        for i, h in enumerate(cycle):
            rot[h] = cycle[(i + 1) % len(cycle)]
    alpha = [h ^ 1 for h in range(2 * edges)]
    first = children[0][0]
    return HalfEdgeMap(alpha, rot, rev(first, len(children[first])))


def looptree_components(l):
    r"""
    Inverse of loop_of. Returns the tree together with, for every black
    vertex, the half-edge of its loop starting at the parent white vertex
    (loop on its left) and the map vertex of every white vertex.
    """
    if not l.alpha:
        return LooptreeComponents(PlaneTree.singleton(), {}, {0: 0})
    face_of = l.face_of
    outer = face_of[l.alpha[l.root]]
    if face_of[l.root] == outer:
        raise MalformedLooptree('root half-edge does not border a loop')
    for h in range(l.num_half_edges):
        if (face_of[h] == outer) == (face_of[l.alpha[h]] == outer):
            raise MalformedLooptree('edge {} is not a loop edge'.format(h // 2))

    counts = []
    loop_roots = {}
    white_vertices = {}
    seen_faces = set()
    seen_vertices = set()
    # entries: (is_white, half-edge, is_root)
    stack = [(True, l.root, True)]
    while stack:
        white, h, is_root = stack.pop()
        v = len(counts)
        if white:
            x = l.origin(h)
            if x in seen_vertices:
                raise MalformedLooptree('vertex {} reached twice'.format(x))
            seen_vertices.add(x)
            white_vertices[v] = x
            slots = [h] if is_root else []
            g = l.rot[h]
            while g != h:
                slots.append(g)
                g = l.rot[g]
            kids = [g for g in slots if face_of[g] != outer]
            counts.append(len(kids))
            stack.extend((False, g, False) for g in reversed(kids))
        else:
            face = face_of[h]
            if face in seen_faces:
                raise MalformedLooptree('loop {} reached twice'.format(face))
            seen_faces.add(face)
            loop_roots[v] = h
            orbit = [h]
            g = l.phi(h)
            while g != h:
                orbit.append(g)
                g = l.phi(g)
            counts.append(len(orbit) - 1)
            # orbit origins after the parent run c_k, ..., c_1
            stack.extend((True, g, False) for g in orbit[1:])
    if len(seen_vertices) != l.num_vertices or len(seen_faces) != l.num_faces - 1:
        raise MalformedLooptree('{} of {} vertices and {} of {} loops reached'.format(
            len(seen_vertices), l.num_vertices, len(seen_faces), l.num_faces - 1))
    return LooptreeComponents(PlaneTree(counts), loop_roots, white_vertices)


def tree_of(l):
    return looptree_components(l).tree
