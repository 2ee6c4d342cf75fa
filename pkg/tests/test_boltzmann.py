from fractions import Fraction

import pytest

from uihpq.bdg import domain_size, enumerate_quadrangulations
from uihpq.boltzmann import F_closed, F_sigma, Fbullet_sigma, Fhat_sigma, OffspringPair, PeelingTable, SkewParams, \
    as_fraction, check_p, count_quadrangulations, count_simple_quadrangulations, criticality_check, \
    depointing_gap, mean_vertex_count, offspring_pair, pointed_boltzmann_probability, pointed_partial_sums, \
    r_hat, sample_boltzmann, sample_pointed_boltzmann, sample_simple_boltzmann, sample_simple_face_count, \
    series_identity_check, series_sum, series_tail_bound, series_terms, simple_face_count_probability, \
    tail_ratio, zF2
from uihpq.exceptions import MaxAttemptsExceeded, SizeCapExceeded, TailNotCertifiable
from uihpq.lab.stats import chi_square_gof
from uihpq.planar_map import canonical_encoding, is_simple_boundary, validate_quadrangulation
from uihpq.rng import Stream

QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


def test_as_fraction_reads_decimals_exactly():
    assert as_fraction(0.45) == Fraction(9, 20)
    assert as_fraction('1/4') == QUARTER
    with pytest.raises(ValueError):
        check_p(Fraction(3, 5))
    with pytest.raises(ValueError):
        check_p(HALF, strict=True)


def test_skew_params():
    params = SkewParams(QUARTER)
    assert params.g == Fraction(1, 16)
    assert params.z == Fraction(3, 16)


def test_spot_values():
    assert F_closed(0) == 2
    assert F_closed(HALF) == Fraction(4, 3)
    assert Fbullet_sigma(0, 1) == 2
    assert Fhat_sigma(HALF, 1) == Fraction(4, 3)
    assert Fhat_sigma(QUARTER, 0) == 1
    assert zF2(QUARTER) == Fraction(16, 27)
    assert r_hat(0) is None
    assert tail_ratio(HALF) == 1


def test_simple_boundary_series_inverts_general_one():
    # F(z) = Fhat(z F(z)^2) coefficient by coefficient
    F1, F2, F3 = (F_sigma(QUARTER, s) for s in (1, 2, 3))
    assert Fhat_sigma(QUARTER, 1) == F1
    assert Fhat_sigma(QUARTER, 2) == F2 - 2 * F1 ** 2
    assert Fhat_sigma(QUARTER, 3) == F3 - 6 * F1 * F2 + 7 * F1 ** 3


def test_simple_boundary_at_p_zero():
    assert Fhat_sigma(0, 1) == 1
    assert Fhat_sigma(0, 2) == 0
    assert series_terms(0, 3) == (1, 1, 0, 0)


@pytest.mark.parametrize('n,sigma', [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2)])
def test_count_quadrangulations(n, sigma):
    assert count_quadrangulations(n, sigma) == sum(1 for _ in enumerate_quadrangulations(n, sigma))
    assert count_quadrangulations(n, sigma) * (n + sigma + 1) == domain_size(n, sigma)


def test_pointed_partial_sums_increase_to_fbullet():
    for sigma in (1, 2):
        sums = pointed_partial_sums(QUARTER, sigma, 6)
        assert all(a < b for a, b in zip(sums, sums[1:]))
        assert sums[-1] < Fbullet_sigma(QUARTER, sigma)
        assert sums[-1] > Fbullet_sigma(QUARTER, sigma) * Fraction(9, 10)


def test_pointed_probability_is_normalized_on_small_maps():
    p = Fraction(1, 3)
    total = sum(domain_size(n, 1) * pointed_boltzmann_probability(n, 1, p) for n in range(12))
    assert Fraction(9, 10) < total < 1


def test_offspring_pair_at_quarter():
    pair = offspring_pair(QUARTER)
    assert pair.m_circ == Fraction(7, 9)
    assert pair.m_bullet == Fraction(9, 7)
    assert pair.mu_bullet.pmf(1) == Fraction(512, 567)
    assert pair.mu_bullet.pmf(2) == 0
    assert 0 <= pair.tail <= Fraction(1, 10 ** 12)
    frame = pair.to_frame()
    assert list(frame.columns) == ['k', 'numerator', 'denominator']
    assert frame['k'].iloc[0] == 1


def test_offspring_pair_at_zero_is_deterministic():
    pair = offspring_pair(0)
    assert pair.m_circ == 1
    assert pair.mu_bullet.pmf(1) == 1


def test_offspring_pair_at_half():
    with pytest.raises(TailNotCertifiable):
        offspring_pair(HALF)
    pair = OffspringPair(HALF, strict=False)
    assert pair.m_bullet is None


def test_tail_bound_covers_tail():
    p = Fraction(1, 3)
    short = sum(series_terms(p, 20), Fraction(0))
    long = sum(series_terms(p, 400), Fraction(0))
    assert long - short <= series_tail_bound(p, 20)
    assert series_tail_bound(Fraction(49, 100), 8) is None


@pytest.mark.parametrize('p', ['0.1', '0.25', '0.45'])
def test_series_identity(p):
    res = series_identity_check(Fraction(p), 2000, Fraction(1, 10 ** 9))
    assert res['passed']
    assert res['residual'] >= 0


def test_series_sum_matches_term_sum():
    p = Fraction(3, 10)
    terms = series_terms(p, 30)
    assert series_sum(p, 30) == sum(terms[1:], Fraction(0))
    assert series_sum(p, 30, weighted=True) == sum(((2 * s - 1) * t for s, t in enumerate(terms) if s),
                                                    Fraction(0))
    assert series_sum(0, 5) == 1


def test_criticality():
    for p in (0, Fraction(1, 10), QUARTER, Fraction(2, 5)):
        assert criticality_check(p, 512)['verdict'] == 'critical'
    res = criticality_check(HALF)
    assert res['verdict'] == 'subcritical'
    assert res['product'][1] < 1


def test_criticality_without_tail_bound_is_uncertified():
    p = Fraction(49, 100)
    res = criticality_check(p, 512)
    assert res['product'][1] is None
    assert res['verdict'] == 'uncertified'
    res = criticality_check(p)
    assert res['verdict'] == 'critical'
    assert res['product'][0] <= 1 <= res['product'][1]


def test_mean_vertex_count():
    assert mean_vertex_count(2, 0) == 3
    with pytest.raises(ValueError):
        mean_vertex_count(2, HALF)


def test_pointed_sample_at_p_zero_is_an_edge():
    pq = sample_pointed_boltzmann(1, 0, Stream(0))
    assert pq.quad.map.num_edges == 1
    with pytest.raises(ValueError):
        sample_pointed_boltzmann(0, QUARTER, Stream(0))


def test_boltzmann_samples_are_valid():
    stream = Stream(3)
    for t in range(20):
        q = sample_boltzmann(3, Fraction(3, 10), stream.child(t))
        assert validate_quadrangulation(q) == []
        assert q.sigma == 3


def test_boltzmann_is_deterministic():
    a = sample_boltzmann(4, QUARTER, Stream(9).child('x'))
    b = sample_boltzmann(4, QUARTER, Stream(9).child('x'))
    assert a.map == b.map


@pytest.mark.parametrize('n,sigma', [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2)])
def test_count_simple_quadrangulations(n, sigma):
    simple = sum(1 for q in enumerate_quadrangulations(n, sigma) if is_simple_boundary(q))
    assert count_simple_quadrangulations(n, sigma) == simple


def test_simple_counts_sum_to_fhat():
    p = Fraction(1, 10)
    g = SkewParams(p).g
    for sigma in (1, 2, 3):
        partial = sum(count_simple_quadrangulations(n, sigma) * g ** n for n in range(21))
        assert 0 < Fhat_sigma(p, sigma) - partial < Fraction(1, 10 ** 5)


def test_peeling_weights_add_up():
    p = Fraction(2, 5)
    table = PeelingTable(p, length=8)
    scale = float(r_hat(p) / SkewParams(p).g)
    for sigma in range(1, 12):
        assert table.u[sigma] == pytest.approx(float(Fhat_sigma(p, sigma) * r_hat(p) ** sigma))
        assert table.case_weights(sigma).sum() == pytest.approx(table.u[sigma] * scale)
    assert table.length >= 12


@pytest.mark.parametrize('sigma', [1, 2, 5, 10, 13])
def test_simple_boltzmann_samples_are_valid(sigma):
    p = Fraction(2, 5)
    for t in range(5):
        q = sample_simple_boltzmann(sigma, p, Stream(5).child(sigma, t))
        assert validate_quadrangulation(q) == []
        assert is_simple_boundary(q)
        assert q.sigma == sigma


def test_simple_boltzmann_is_deterministic():
    a = sample_simple_boltzmann(6, QUARTER, Stream(2).child('x'))
    b = sample_simple_boltzmann(6, QUARTER, Stream(2).child('x'))
    assert a.map == b.map
    assert sample_simple_face_count(6, QUARTER, Stream(2).child('x')) == a.size


def test_simple_boltzmann_at_p_zero():
    q = sample_simple_boltzmann(1, 0, Stream(0))
    assert q.map.num_edges == 1
    assert sample_simple_face_count(1, 0, Stream(0)) == 0
    with pytest.raises(ValueError):
        sample_simple_boltzmann(2, 0, Stream(0))
    with pytest.raises(ValueError):
        sample_simple_boltzmann(0, QUARTER, Stream(0))


def test_simple_face_count_law():
    p = Fraction(2, 5)
    counts = [sample_simple_face_count(3, p, Stream(11).child(t)) for t in range(3000)]
    probs = [simple_face_count_probability(n, 3, p) for n in range(8)]
    observed = [counts.count(n) for n in range(8)] + [sum(1 for c in counts if c >= 8)]
    assert observed[0] == observed[1] == 0
    _, pvalue = chi_square_gof(observed, probs + [1 - sum(probs)])
    assert pvalue > 1e-3


def test_simple_boltzmann_is_uniform_on_each_size():
    g = SkewParams(QUARTER).g
    small = {}
    for n in (1, 2):
        for q in enumerate_quadrangulations(n, 2):
            if is_simple_boundary(q):
                small[canonical_encoding(q.map)] = g ** n / Fhat_sigma(QUARTER, 2)
    assert len(small) == 11
    keys = sorted(small)
    observed = dict.fromkeys(keys, 0)
    rest = 0
    for t in range(3000):
        q = sample_simple_boltzmann(2, QUARTER, Stream(13).child(t))
        key = canonical_encoding(q.map)
        if q.size <= 2:
            assert key in small
            observed[key] += 1
        else:
            rest += 1
    probs = [small[k] for k in keys]
    _, pvalue = chi_square_gof([observed[k] for k in keys] + [rest], probs + [1 - sum(probs)])
    assert pvalue > 1e-3


def test_simple_sampler_size_cap():
    with pytest.raises(SizeCapExceeded):
        sample_simple_face_count(10, Fraction(2, 5), Stream(0), size_cap=20)


def test_max_attempts_message():
    assert str(MaxAttemptsExceeded(7)) == 'no sample accepted after 7 attempts'
    err = MaxAttemptsExceeded(7, 0.25)
    assert err.attempts == 7
    assert '0.25' in str(err)


def test_depointing_gap():
    res = depointing_gap(2, QUARTER, 200, Stream(1))
    assert 0 <= res['gap'] < 1
    assert res['expected_mean_vertices'] == pytest.approx(1 + 2 * 0.75 / 0.5)
