from fractions import Fraction

import pytest

from uihpq.bdg import WindowSample, domain_size, enumerate_domain, labels_consistent, phi_bijectivity_audit, \
    phi_finite, radon_nikodym_check, uihpq0_spine, uihpq_ball
from uihpq.lab.stats import chi_square_gof, ks_two_sample
from uihpq.planar_map import canonical_encoding, validate, validate_quadrangulation
from uihpq.rng import Stream
from uihpq.trees import Bridge, Forest, LabeledTree, PlaneTree, sample_labeled_forest, sample_uniform_bridge


def test_phi_of_single_vertex_is_an_edge():
    f = Forest([LabeledTree(PlaneTree.singleton(), (0,))])
    pq = phi_finite(f, Bridge.from_string('UD'))
    q = pq.quad
    assert q.map.num_edges == 1
    assert q.size == 0 and q.sigma == 1
    assert labels_consistent(pq)
    assert pq.labels[pq.pointed_vertex] == min(pq.labels)


def test_phi_rejects_unlabeled_forest():
    with pytest.raises(ValueError):
        phi_finite(Forest([PlaneTree.singleton()]), Bridge.from_string('UD'))


@pytest.mark.parametrize('n,sigma,size', [(0, 1, 2), (1, 1, 6), (2, 1, 36), (1, 2, 36), (2, 2, 270)])
def test_bijectivity_audit(n, sigma, size):
    assert domain_size(n, sigma) == size
    assert sum(1 for _ in enumerate_domain(n, sigma)) == size
    res = phi_bijectivity_audit(n, sigma)
    assert res['valid']
    assert res['domain'] == res['image'] == size


def test_phi_on_random_inputs():
    rng = Stream(11).generator()
    for _ in range(20):
        f = sample_labeled_forest(12, 5, rng)
        pq = phi_finite(f, sample_uniform_bridge(5, rng))
        assert validate_quadrangulation(pq.quad) == []
        assert pq.quad.map.num_vertices == 12 + 5 + 1
        assert labels_consistent(pq)


@pytest.mark.parametrize('p', [Fraction(1, 3), Fraction(45, 100), Fraction(1, 2)])
def test_radon_nikodym_is_exact(p):
    res = radon_nikodym_check(p, 1, 3)
    assert res['exact']
    assert res['paths'] == 22


def test_radon_nikodym_rejects_p_zero():
    with pytest.raises(ValueError):
        radon_nikodym_check(0, 1, 3)


def test_ball_radius_zero():
    ball = uihpq_ball(Fraction(1, 4), 0, 'root', Stream(0))
    assert ball.submap.num_edges == 0


@pytest.mark.parametrize('center', ['f0', 'root'])
def test_ball_is_valid_and_deterministic(center):
    a = uihpq_ball(Fraction(1, 4), 2, center, Stream(7).child('ball'))
    b = uihpq_ball(Fraction(1, 4), 2, center, Stream(7).child('ball'))
    assert validate(a.submap) == []
    assert a.encoding() == b.encoding()
    assert max(a.distance) <= 2


def test_ball_without_doubling_agrees():
    a = uihpq_ball(Fraction(1, 3), 2, 'root', Stream(2), check_doubling=True)
    b = uihpq_ball(Fraction(1, 3), 2, 'root', Stream(2), check_doubling=False)
    assert canonical_encoding(a.submap) == canonical_encoding(b.submap)


def test_ball_at_p_zero_is_a_tree():
    for seed in range(10):
        m = uihpq_ball(0, 2, 'root', Stream(seed)).submap
        assert m.num_vertices == m.num_edges + 1


def test_ball_rejects_bad_center():
    with pytest.raises(ValueError):
        uihpq_ball(Fraction(1, 4), 1, 'origin', Stream(0))


def test_window_rejects_bad_p():
    with pytest.raises(ValueError):
        WindowSample(Fraction(3, 4), Stream(0))


def test_window_trees_do_not_depend_on_growth():
    a = WindowSample(Fraction(1, 4), Stream(4))
    b = WindowSample(Fraction(1, 4), Stream(4))
    b.tree(5)
    b.tree(-3)
    assert a.tree(2) == b.tree(2)


def test_spine_at_p_zero():
    w = WindowSample(0, Stream(1), stop_min=4)
    spine = uihpq0_spine(w, 2)
    assert len(spine.spine) == 3
    assert list(spine.hitting_times) == sorted(set(spine.hitting_times))
    assert spine.hitting_times[0] == 0
    b = w.bridge
    hits = list(spine.hitting_times) + [b.first_hit(-3, 1)]
    for i, t in enumerate(spine.left):
        visits = sum(1 for k in range(hits[i] + 1, hits[i + 1]) if b[k] == -i)
        assert t.counts[0] == visits
        assert 2 * t.size == hits[i + 1] - 1 - hits[i]
    assert all(isinstance(t, PlaneTree) for t in spine.right)
    with pytest.raises(ValueError):
        uihpq0_spine(WindowSample(Fraction(1, 4), Stream(1)), 2)


def test_spine_subtree_laws():
    left, right = [], []
    for t in range(400):
        spine = uihpq0_spine(WindowSample(0, Stream(21).child(t)), 1)
        left.append(spine.left[0])
        right.append(spine.right[0])
    cells = 6
    observed = [sum(1 for s in left if min(s.counts[0], cells) == k) for k in range(cells + 1)]
    probs = [Fraction(1, 2 ** (k + 1)) for k in range(cells)] + [Fraction(1, 2 ** cells)]
    _, pvalue = chi_square_gof(observed, probs)
    assert pvalue > 1e-3
    _, pvalue = ks_two_sample([s.counts[0] for s in left], [s.counts[0] for s in right])
    assert pvalue > 1e-3
    _, pvalue = ks_two_sample([s.size for s in left], [s.size for s in right])
    assert pvalue > 1e-3
