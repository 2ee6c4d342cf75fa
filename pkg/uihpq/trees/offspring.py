r"""
Offspring distributions on the non-negative integers.

Exact probabilities are `Fraction`s; sampling draws from a numpy `Generator`.
"""
import logging
from fractions import Fraction

import numpy as np

logger = logging.getLogger(__name__)


class OffspringLaw(object):

    def pmf(self, k):
        raise NotImplementedError

    @property
    def mean(self):
        raise NotImplementedError

    def sample(self, rng):
        raise NotImplementedError

    def size_biased(self):
        raise NotImplementedError


class DiracLaw(OffspringLaw):

    def __init__(self, k):
        if k < 0:
            raise ValueError("Invalid atom: {}".format(k))
        self.k = int(k)

    def pmf(self, k):
        return Fraction(int(k == self.k))

    @property
    def mean(self):
        return Fraction(self.k)

    def sample(self, rng):
        return self.k

    def size_biased(self):
        if self.k == 0:
            raise ValueError("Invalid law: size-biasing a law with mean 0")
        return self

    def __repr__(self):
        return 'DiracLaw({})'.format(self.k)


class GeometricLaw(OffspringLaw):
    r"""
    mu(k) = p^k (1 - p) for k >= 0.
    """

    def __init__(self, p):
        p = Fraction(p)
        if not 0 <= p < 1:
            raise ValueError("Invalid geometric parameter: {}".format(p))
        self.p = p

    def pmf(self, k):
        if k < 0:
            return Fraction(0)
        return self.p ** k * (1 - self.p)

    @property
    def mean(self):
        return self.p / (1 - self.p)

    def sample(self, rng):
        return int(rng.geometric(1 - float(self.p))) - 1

    def size_biased(self):
        if self.p == 0:
            raise ValueError("Invalid law: size-biasing a law with mean 0")
        return SizeBiasedGeometricLaw(self.p)

    def __repr__(self):
        return 'GeometricLaw({})'.format(self.p)


class SizeBiasedGeometricLaw(OffspringLaw):
    r"""
    k mu(k) / m for the geometric law: 1 plus two independent geometric draws.
    """

    def __init__(self, p):
        self.p = Fraction(p)
        self._base = GeometricLaw(p)

    def pmf(self, k):
        return k * self._base.pmf(k) / self._base.mean

    @property
    def mean(self):
        return 1 + 2 * self._base.mean

    def sample(self, rng):
        return 1 + self._base.sample(rng) + self._base.sample(rng)

    def __repr__(self):
        return 'SizeBiasedGeometricLaw({})'.format(self.p)


class TabulatedLaw(OffspringLaw):
    r"""
    Law given by a table builder ``builder(length) -> (values, probabilities)``
    that returns the first ``length`` atoms. Sampling is by inverse CDF; a
    uniform falling in the untabulated tail doubles the table and retries, so
    the sampler is exact whenever the builder's probabilities are.
    """

    def __init__(self, builder, length=64, mean=None):
        self.builder = builder
        self._mean = mean
        self._build(length)

    def _build(self, length):
        values, probs = self.builder(length)
        self.length = length
        self.values = np.asarray(values, dtype=np.int64)
        self.probs = list(probs)
        self.cdf = np.cumsum([float(q) for q in self.probs])

    @property
    def tabulated_mass(self):
        return sum(self.probs, Fraction(0))

    def pmf(self, k):
        while k > self.values[-1] and self.tabulated_mass < 1:
            self._build(2 * self.length)
        idx = np.searchsorted(self.values, k)
        if idx < len(self.values) and self.values[idx] == k:
            return self.probs[idx]
        return Fraction(0)

    @property
    def mean(self):
        if self._mean is None:
            raise ValueError("Invalid law: mean of a tabulated law must be given")
        return self._mean

    def sample(self, rng):
        u = rng.random()
        idx = int(np.searchsorted(self.cdf, u, side='right'))
        while idx >= len(self.values):
            if self.length >= 1 << 24:
                # mass lost to float rounding at the far end of the table
                return int(self.values[-1])
            logger.debug('extending offspring table to %d atoms', 2 * self.length)
            self._build(2 * self.length)
            idx = int(np.searchsorted(self.cdf, u, side='right'))
        return int(self.values[idx])

    def size_biased(self):
        mean = self.mean
        if mean == 0:
            raise ValueError("Invalid law: size-biasing a law with mean 0")
        builder = self.builder

        def biased(length):
            values, probs = builder(length)
            return values, [k * q / mean for k, q in zip(values, probs)]

        return TabulatedLaw(biased, self.length)

    def __repr__(self):
        return 'TabulatedLaw(atoms={}, mass={:.12f})'.format(len(self.values), float(self.cdf[-1]))
