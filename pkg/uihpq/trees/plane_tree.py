r"""
Plane trees numbered in preorder and well-labeled trees.
"""
from functools import cached_property

import numpy as np

from ..planar_map import HalfEdgeMap
from ..rng import as_generator

_INCREMENT_CHARS = {-1: '-', 0: '0', 1: '+'}
_CHAR_INCREMENTS = {c: i for i, c in _INCREMENT_CHARS.items()}


class PlaneTree(object):
    r"""
    Finite plane tree. Vertices are numbered in preorder, the root is 0 and
    ``counts[v]`` is the number of children of v.
    """
    __slots__ = ['counts', '__dict__']

    def __init__(self, counts=(0,)):
        counts = tuple(int(k) for k in counts)
        if not counts or sum(counts) != len(counts) - 1 or any(k < 0 for k in counts):
            raise ValueError("Invalid child counts: {}".format(counts))
        # a preorder sequence of child counts must not close before its end
        pending = 1
        for i, k in enumerate(counts):
            pending += k - 1
            if pending == 0 and i != len(counts) - 1:
                raise ValueError("Invalid child counts: {}".format(counts))
        self.counts = counts

    @classmethod
    def singleton(cls):
        return cls((0,))

    @classmethod
    def from_children(cls, children, root=0):
        r"""
        Build from arbitrary vertex ids: ``children[v]`` is the ordered list of
        children of v.
        """
        counts = []
        stack = [root]
        while stack:
            v = stack.pop()
            counts.append(len(children[v]))
            stack.extend(reversed(children[v]))
        return cls(counts)

    @property
    def root(self):
        return 0

    @property
    def num_vertices(self):
        return len(self.counts)

    @property
    def size(self):
        return len(self.counts) - 1

    def __len__(self):
        return self.size

    @cached_property
    def children(self):
        children = [[] for _ in self.counts]
        stack = []
        for v, k in enumerate(self.counts):
            if stack:
                parent = stack[-1]
                children[parent].append(v)
                if len(children[parent]) == self.counts[parent]:
                    stack.pop()
            if k:
                stack.append(v)
        return tuple(tuple(c) for c in children)

    @cached_property
    def parent(self):
        parent = [-1] * len(self.counts)
        for v, cs in enumerate(self.children):
            for c in cs:
                parent[c] = v
        return tuple(parent)

    @cached_property
    def heights(self):
        heights = [0] * len(self.counts)
        for v in range(1, len(self.counts)):
            heights[v] = heights[self.parent[v]] + 1
        return tuple(heights)

    @property
    def height(self):
        return max(self.heights)

    def contour(self):
        r"""
        Vertices visited by the contour exploration, 2|t|+1 entries.
        """
        children = self.children
        visits = [0]
        stack = [(0, 0)]
        while stack:
            v, i = stack[-1]
            if i < len(children[v]):
                stack[-1] = (v, i + 1)
                c = children[v][i]
                visits.append(c)
                stack.append((c, 0))
            else:
                stack.pop()
                if stack:
                    visits.append(stack[-1][0])
        return visits

    def subtree(self, v):
        r"""
        The fringe subtree rooted at v.
        """
        end = v + 1
        pending = self.counts[v]
        while pending:
            pending += self.counts[end] - 1
            end += 1
        return PlaneTree(self.counts[v:end])

    def truncated(self, max_height):
        r"""
        Keep the vertices at height <= max_height.
        """
        heights = self.heights
        children = [[c for c in cs if heights[c] <= max_height] for cs in self.children]
        return PlaneTree.from_children(children)

    def to_word(self):
        out = []
        stack = [(0, 0)]
        children = self.children
        while stack:
            v, i = stack.pop()
            if i < len(children[v]):
                stack.append((v, i + 1))
                out.append('(')
                stack.append((children[v][i], 0))
            elif stack:
                out.append(')')
        return ''.join(out)

    @classmethod
    def from_word(cls, word):
        children = [[]]
        stack = [0]
        for pos, c in enumerate(word):
            if c == '(':
                children.append([])
                children[stack[-1]].append(len(children) - 1)
                stack.append(len(children) - 1)
            elif c == ')' and len(stack) > 1:
                stack.pop()
            else:
                raise ValueError("Invalid tree word at position {}: {!r}".format(pos, word))
        if len(stack) != 1:
            raise ValueError("Invalid tree word: {!r}".format(word))
        return cls.from_children(children)

    def to_map(self):
        r"""
        The tree as a rooted planar map. The edge to vertex v has half-edges
        2(v-1) (downwards) and 2(v-1)+1 (upwards); the root edge goes from the
        root to its first child.
        """
        if self.size == 0:
            return HalfEdgeMap.vertex_map()
        n = self.size
        alpha = [h ^ 1 for h in range(2 * n)]
        rot = [0] * (2 * n)
        for v, cs in enumerate(self.children):
            cycle = [2 * (v - 1) + 1] if v else []
            cycle.extend(2 * (c - 1) for c in cs)
            for i, h in enumerate(cycle):
                rot[h] = cycle[(i + 1) % len(cycle)]
        return HalfEdgeMap(alpha, rot, 0)

    def __eq__(self, other):
        return isinstance(other, PlaneTree) and self.counts == other.counts

    def __hash__(self):
        return hash(self.counts)

    def __repr__(self):
        return 'PlaneTree({!r})'.format(self.to_word())


class LabeledTree(object):
    r"""
    Plane tree with integer labels, root label 0 and increments in {-1, 0, 1}.
    """

    def __init__(self, tree, labels):
        labels = tuple(int(l) for l in labels)
        if len(labels) != tree.num_vertices:
            raise ValueError("Invalid labels: expected {} values, got {}".format(
                tree.num_vertices, len(labels)))
        if labels[0] != 0:
            raise ValueError("Invalid labels: root label {} != 0".format(labels[0]))
        for v in range(1, tree.num_vertices):
            if abs(labels[v] - labels[tree.parent[v]]) > 1:
                raise ValueError("Invalid labels: edge to vertex {} jumps by more than 1".format(v))
        self.tree = tree
        self.labels = labels

    @classmethod
    def from_increments(cls, tree, increments):
        labels = [0] * tree.num_vertices
        for v in range(1, tree.num_vertices):
            labels[v] = labels[tree.parent[v]] + int(increments[v - 1])
        return cls(tree, labels)

    @property
    def increments(self):
        parent = self.tree.parent
        return tuple(self.labels[v] - self.labels[parent[v]] for v in range(1, self.tree.num_vertices))

    @property
    def size(self):
        return self.tree.size

    def to_word(self):
        return '{}|{}'.format(self.tree.to_word(), ''.join(_INCREMENT_CHARS[i] for i in self.increments))

    @classmethod
    def from_word(cls, word):
        if '|' not in word:
            raise ValueError("Invalid labeled tree word: {!r}".format(word))
        shape, incs = word.split('|', 1)
        tree = PlaneTree.from_word(shape)
        if len(incs) != tree.size or any(c not in _CHAR_INCREMENTS for c in incs):
            raise ValueError("Invalid labeled tree word: {!r}".format(word))
        return cls.from_increments(tree, [_CHAR_INCREMENTS[c] for c in incs])

    def __eq__(self, other):
        return isinstance(other, LabeledTree) and self.tree == other.tree and self.labels == other.labels

    def __hash__(self):
        return hash((self.tree.counts, self.labels))

    def __repr__(self):
        return 'LabeledTree({!r})'.format(self.to_word())


def uniform_labeling(t, rng):
    r"""
    Labels with i.i.d. increments uniform on {-1, 0, 1} along the edges.
    """
    increments = as_generator(rng).integers(-1, 2, size=t.size)
    return LabeledTree.from_increments(t, increments)


def enumerate_labelings(t):
    r"""
    All 3^|t| labelings of t.
    """
    for incs in np.ndindex(*([3] * t.size)):
        yield LabeledTree.from_increments(t, [i - 1 for i in incs])
