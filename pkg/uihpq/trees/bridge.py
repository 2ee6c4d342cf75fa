r"""
Bridges: finite +-1 walks of length 2 sigma, and windows of a two-sided simple
random walk that can be extended on demand.
"""
import logging
from itertools import combinations

import numpy as np

from ..rng import as_generator

logger = logging.getLogger(__name__)

CHUNK = 256


class DownSteps(object):
    r"""
    ``at(i)`` is the i-th down-step: for i >= 1 the i-th smallest index in
    {0, 1, ...}, for i <= -1 the |i|-th one met scanning left from 0.
    """

    def __init__(self, positive, negative=()):
        self.positive = list(positive)
        self.negative = list(negative)

    def at(self, i):
        if i >= 1:
            return self.positive[i - 1]
        if i <= -1:
            return self.negative[-i - 1]
        raise ValueError("Invalid down-step index: {}".format(i))

    def __len__(self):
        return len(self.positive) + len(self.negative)

    def __repr__(self):
        return 'DownSteps(positive={}, negative={})'.format(self.positive, self.negative)


class Bridge(object):
    r"""
    Finite bridge b(0), ..., b(2 sigma - 1) with b(0) = 0 and the convention
    b(2 sigma) = 0.
    """

    def __init__(self, values):
        values = tuple(int(v) for v in values)
        if not values or len(values) % 2 or values[0] != 0:
            raise ValueError("Invalid bridge: {}".format(values))
        closed = values + (0,)
        if any(abs(b - a) != 1 for a, b in zip(closed, closed[1:])):
            raise ValueError("Invalid bridge: {}".format(values))
        self.values = values

    @classmethod
    def from_steps(cls, steps):
        return cls(np.concatenate([[0], np.cumsum(steps)[:-1]]).tolist())

    @classmethod
    def from_string(cls, word):
        if any(c not in 'UD' for c in word):
            raise ValueError("Invalid bridge word: {!r}".format(word))
        return cls.from_steps([1 if c == 'U' else -1 for c in word])

    @property
    def sigma(self):
        return len(self.values) // 2

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i % len(self.values)]

    def steps(self):
        closed = self.values + (0,)
        return [b - a for a, b in zip(closed, closed[1:])]

    def to_string(self):
        return ''.join('U' if s > 0 else 'D' for s in self.steps())

    def down_steps(self):
        return DownSteps(i for i, s in enumerate(self.steps()) if s < 0)

    def __eq__(self, other):
        return isinstance(other, Bridge) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return 'Bridge({!r})'.format(self.to_string())


def down_steps(b):
    return b.down_steps()


def enumerate_bridges(sigma):
    for ups in combinations(range(2 * sigma), sigma):
        steps = [-1] * (2 * sigma)
        for i in ups:
            steps[i] = 1
        yield Bridge.from_steps(steps)


def sample_uniform_bridge(sigma, rng):
    if sigma < 1:
        raise ValueError("Invalid sigma: {}".format(sigma))
    rng = as_generator(rng)
    steps = np.array([1] * sigma + [-1] * sigma, dtype=np.int64)
    rng.shuffle(steps)
    return Bridge.from_steps(steps)


class _Side(object):
    # one side of a two-sided walk, drawn in fixed chunks
    def __init__(self, rng):
        self.rng = rng
        self.values = [0]
        self.minima = [0]

    def grow(self):
        steps = 2 * self.rng.integers(0, 2, size=CHUNK) - 1
        for s in steps.tolist():
            self.values.append(self.values[-1] + s)
            self.minima.append(min(self.minima[-1], self.values[-1]))

    def first_below(self, level):
        r"""
        First index k with values[k] < level, drawing more steps if needed.
        """
        while self.minima[-1] >= level:
            self.grow()
        return int(np.argmax(np.asarray(self.minima) < level))


class BridgeWindow(object):
    r"""
    Window of a two-sided simple symmetric random walk with b(0) = 0.

    ``right[k] = b(k)`` and ``left[k] = b(-k)`` for k >= 0. Both sides are drawn
    chunk by chunk from their own generator, so extending a window never
    changes values already drawn.
    """

    def __init__(self, rng):
        rng = as_generator(rng)
        seeds = rng.integers(0, 2 ** 63, size=2)
        self._right = _Side(np.random.default_rng(int(seeds[0])))
        self._left = _Side(np.random.default_rng(int(seeds[1])))
        self.right_length = 0
        self.left_length = 0

    def extend(self, stop_min):
        r"""
        Grow until both one-sided minima are below -stop_min; the window is
        [-left_length, right_length] with the two first passage times.
        """
        right = self._right.first_below(-stop_min)
        left = self._left.first_below(-stop_min)
        self.right_length = max(self.right_length, right)
        self.left_length = max(self.left_length, left)
        logger.debug('bridge window extended to [-%d, %d]', self.left_length, self.right_length)
        return self

    def ensure(self, k):
        side = self._right if k >= 0 else self._left
        while len(side.values) <= abs(k) + 1:
            side.grow()

    def __getitem__(self, k):
        self.ensure(k)
        return self._right.values[k] if k >= 0 else self._left.values[-k]

    @property
    def right(self):
        return self._right.values[:self.right_length + 1]

    @property
    def left(self):
        return self._left.values[:self.left_length + 1]

    def minima(self):
        return min(self.right), min(self.left)

    def first_hit(self, level, side=1):
        r"""
        First k >= 0 with b(side * k) = level (level <= 0).
        """
        walk = self._right if side > 0 else self._left
        return walk.first_below(level + 1)

    def is_down_step(self, k):
        return self[k + 1] == self[k] - 1

    def down_steps(self, right_bound=None, left_bound=None):
        r"""
        Down-steps inside [-left_bound, right_bound) (defaults: the window).
        """
        right_bound = self.right_length if right_bound is None else right_bound
        left_bound = self.left_length if left_bound is None else left_bound
        self.ensure(right_bound)
        self.ensure(-left_bound)
        positive = [k for k in range(right_bound) if self[k + 1] == self[k] - 1]
        negative = [-j for j in range(1, left_bound + 1) if self[-j + 1] == self[-j] - 1]
        return DownSteps(positive, negative)

    def __repr__(self):
        return 'BridgeWindow([-{}, {}])'.format(self.left_length, self.right_length)


def sample_infinite_bridge_window(stop_min, rng):
    if stop_min < 1:
        raise ValueError("Invalid stop_min: {}".format(stop_min))
    return BridgeWindow(rng).extend(stop_min)
