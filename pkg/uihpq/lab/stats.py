r"""
Two-sample statistics over canonical ball encodings and goodness-of-fit
tests used by the experiments.
"""
from collections import Counter, namedtuple

import numpy as np
import pandas as pd
from scipy import stats

TVEstimate = namedtuple('TVEstimate', ['tv', 'missing_mass_a', 'missing_mass_b', 'support_a', 'support_b'])


def good_turing_missing_mass(counts, total):
    r"""
    Proportion of singletons, estimating the mass of unseen outcomes.
    """
    if total == 0:
        return 1.
    return sum(1 for c in counts.values() if c == 1) / total


def tv_distance(samples_a, samples_b):
    r"""
    Plug-in total variation between the empirical laws of two samples of
    hashable outcomes, with the Good-Turing missing mass of each side.
    """
    ca, cb = Counter(samples_a), Counter(samples_b)
    na, nb = len(samples_a), len(samples_b)
    if not na or not nb:
        raise ValueError("Invalid samples: sizes {} and {}".format(na, nb))
    tv = 0.5 * sum(abs(ca[k] / na - cb[k] / nb) for k in set(ca) | set(cb))
    return TVEstimate(float(tv), good_turing_missing_mass(ca, na), good_turing_missing_mass(cb, nb),
                      len(ca), len(cb))


def bootstrap_tv(samples_a, samples_b, rng, resamples=200, level=0.95):
    r"""
    Percentile bootstrap interval of the plug-in TV.
    """
    a = np.asarray(samples_a, dtype=object)
    b = np.asarray(samples_b, dtype=object)
    values = []
    for _ in range(resamples):
        ia = rng.integers(0, len(a), len(a))
        ib = rng.integers(0, len(b), len(b))
        values.append(tv_distance(list(a[ia]), list(b[ib])).tv)
    lo, hi = np.quantile(values, [(1 - level) / 2, (1 + level) / 2])
    return float(lo), float(hi)


def chi_square_gof(observed, expected_probs, min_expected=5.):
    r"""
    Chi-square goodness of fit; cells with small expected counts are pooled
    into the last cell. Returns (statistic, p-value).
    """
    observed = np.asarray(observed, dtype=np.float64)
    probs = np.asarray([float(q) for q in expected_probs], dtype=np.float64)
    total = observed.sum()
    probs = probs / probs.sum()
    expected = probs * total
    keep = expected >= min_expected
    if keep.all():
        obs, exp = observed, expected
    else:
        obs = np.append(observed[keep], observed[~keep].sum())
        exp = np.append(expected[keep], expected[~keep].sum())
    if len(obs) < 2:
        return 0., 1.
    res = stats.chisquare(obs, exp)
    return float(res.statistic), float(res.pvalue)


def ks_two_sample(xs, ys):
    res = stats.ks_2samp(np.asarray(xs), np.asarray(ys))
    return float(res.statistic), float(res.pvalue)


def non_increasing(values, radii=None):
    r"""
    True if every value is at most the previous one, up to the given
    confidence radii.
    """
    radii = radii or [0.] * len(values)
    return all(values[i + 1] <= values[i] + radii[i] + radii[i + 1] for i in range(len(values) - 1))


def strictly_decreasing(values):
    return all(values[i + 1] < values[i] for i in range(len(values) - 1))


def certified_at_least(meter, threshold):
    r"""
    True if the lower end of the confidence interval of ``meter`` reaches
    ``threshold``.
    """
    return meter.avg - meter.radius >= threshold


def chi_square_independence(xs, ys):
    r"""
    Chi-square test of independence of two paired categorical samples.
    Returns (statistic, p-value), or (0, 1) when either sample is constant.
    """
    table = pd.crosstab(pd.Series(list(xs), name='x'), pd.Series(list(ys), name='y'))
    if min(table.shape) < 2:
        return 0., 1.
    statistic, pvalue, _, _ = stats.chi2_contingency(table.values)
    return float(statistic), float(pvalue)
