r"""
Forests of plane trees and their step-sequence coding.

A forest with sigma trees and n edges is coded by its contour steps: +1 to a
new child, -1 back to the parent or, from a root, on to the next tree. The
sequence has n up-steps and n + sigma down-steps and first reaches -sigma at
its last step.
"""
from math import comb

import numpy as np

from ..rng import as_generator
from .plane_tree import PlaneTree, LabeledTree, uniform_labeling


class Forest(object):
    r"""
    Ordered sequence of trees (`PlaneTree` or `LabeledTree`).
    """

    def __init__(self, trees):
        self.trees = tuple(trees)

    @property
    def sigma(self):
        return len(self.trees)

    @property
    def size(self):
        return sum(t.size for t in self.trees)

    @property
    def labeled(self):
        return all(isinstance(t, LabeledTree) for t in self.trees)

    @property
    def plane_trees(self):
        return tuple(t.tree if isinstance(t, LabeledTree) else t for t in self.trees)

    def __len__(self):
        return len(self.trees)

    def __getitem__(self, i):
        return self.trees[i]

    def __iter__(self):
        return iter(self.trees)

    def steps(self):
        out = []
        for t in self.plane_trees:
            contour = t.contour()
            heights = t.heights
            for a, b in zip(contour, contour[1:]):
                out.append(1 if heights[b] > heights[a] else -1)
            out.append(-1)
        return out

    @classmethod
    def from_steps(cls, steps):
        trees = []
        counts = [0]
        stack = [0]
        for s in steps:
            if s > 0:
                counts[stack[-1]] += 1
                counts.append(0)
                stack.append(len(counts) - 1)
            elif len(stack) > 1:
                stack.pop()
            else:
                trees.append(PlaneTree(counts))
                counts = [0]
                stack = [0]
        return cls(trees)

    def with_labels(self, rng):
        rng = as_generator(rng)
        return Forest(uniform_labeling(t, rng) for t in self.plane_trees)

    def to_words(self):
        return [t.to_word() for t in self.trees]

    def __eq__(self, other):
        return isinstance(other, Forest) and self.trees == other.trees

    def __hash__(self):
        return hash(self.trees)

    def __repr__(self):
        return 'Forest(sigma={}, size={})'.format(self.sigma, self.size)


def count_forests(n, sigma):
    if n < 0 or sigma < 0:
        raise ValueError("Invalid forest dimensions: n={}, sigma={}".format(n, sigma))
    if sigma == 0:
        return int(n == 0)
    return sigma * comb(2 * n + sigma, n) // (2 * n + sigma)


def enumerate_forests(n, sigma):
    r"""
    Every forest with ``sigma`` trees and ``n`` edges, each exactly once.
    """
    if n < 0 or sigma < 1:
        raise ValueError("Invalid forest dimensions: n={}, sigma={}".format(n, sigma))
    length = 2 * n + sigma
    steps = []

    def extend(ups, downs, level):
        if ups == n and downs == n + sigma:
            yield Forest.from_steps(steps)
            return
        if ups < n:
            steps.append(1)
            yield from extend(ups + 1, downs, level + 1)
            steps.pop()
        # -sigma may only be reached by the final step
        if downs < n + sigma and (level - 1 > -sigma or len(steps) == length - 1):
            steps.append(-1)
            yield from extend(ups, downs + 1, level - 1)
            steps.pop()

    yield from extend(0, 0, 0)


def rotation_starts(steps, sigma):
    r"""
    The sigma cyclic shifts of ``steps`` that code a forest: first hitting
    times of the levels m, ..., m + sigma - 1, m the minimum before the end.
    """
    partial = np.concatenate([[0], np.cumsum(steps)])[:-1]
    m = int(partial.min())
    starts = []
    for level in range(m, m + sigma):
        starts.append(int(np.argmax(partial == level)))
    return starts


def sample_uniform_forest(n, sigma, rng):
    r"""
    Uniform forest with ``sigma`` trees and ``n`` edges by the cycle lemma.
    """
    if n < 0 or sigma < 1:
        raise ValueError("Invalid forest dimensions: n={}, sigma={}".format(n, sigma))
    rng = as_generator(rng)
    steps = np.array([1] * n + [-1] * (n + sigma), dtype=np.int64)
    rng.shuffle(steps)
    starts = rotation_starts(steps, sigma)
    k = starts[int(rng.integers(sigma))]
    return Forest.from_steps(np.roll(steps, -k).tolist())


def sample_labeled_forest(n, sigma, rng):
    rng = as_generator(rng)
    return sample_uniform_forest(n, sigma, rng).with_labels(rng)
