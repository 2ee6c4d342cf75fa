r"""
Counter-addressable random streams.

A `Stream` is a seed plus a path of keys. Every sample drawn in the package is
a pure function of (seed, path), so trials can run in any order or in
parallel and still reproduce bit for bit.
"""
import zlib

import numpy as np
import torch


def _key(part):
    if isinstance(part, str):
        return zlib.crc32(part.encode('utf-8'))
    part = int(part)
    # zig-zag so negative tree indices get their own keys
    return 2 * part if part >= 0 else -2 * part - 1


class Stream(object):
    r"""
    Splittable RNG handle backed by `numpy.random.SeedSequence` spawn keys.
    """
    __slots__ = ['seed', 'path']

    def __init__(self, seed, path=()):
        if seed < 0:
            raise ValueError("Invalid seed: {}".format(seed))
        self.seed = int(seed)
        self.path = tuple(path)

    def child(self, *parts):
        return Stream(self.seed, self.path + tuple(parts))

    def seed_sequence(self):
        return np.random.SeedSequence(entropy=self.seed,
                                      spawn_key=tuple(_key(p) for p in self.path))

    def generator(self):
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))

    def torch_generator(self, device='cpu'):
        g = torch.Generator(device=device)
        lo, hi = self.seed_sequence().generate_state(2)
        g.manual_seed(int(lo) | ((int(hi) & 0x7fffffff) << 32))
        return g

    def __repr__(self):
        return 'Stream(seed={}, path={})'.format(self.seed, self.path)


def as_generator(rng):
    r"""
    Accepts a `Stream`, a numpy `Generator` or an integer seed.
    """
    if isinstance(rng, Stream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return Stream(int(rng)).generator()
    raise ValueError("Invalid rng: {}".format(rng))
