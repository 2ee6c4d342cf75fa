from fractions import Fraction

import numpy as np
import pytest

from uihpq.exceptions import NonCriticalPair, SizeCapExceeded
from uihpq.lab.stats import chi_square_gof
from uihpq.planar_map import validate
from uihpq.rng import Stream
from uihpq.trees import Bridge, Forest, GeometricLaw, LabeledTree, PlaneTree, SizeBiasedGeometricLaw, TabulatedLaw, \
    check_critical, contour_label, count_forests, enumerate_bridges, enumerate_forests, enumerate_labelings, \
    exact_prefix_law_tv, gw_probability, loop_of, looptree_components, sample_gw_geometric, \
    sample_kesten_geometric_spine, sample_kesten_two_type, sample_labeled_forest, sample_two_type_gw, \
    sample_uniform_bridge, sample_uniform_forest, tree_of, two_type_gw_probability, uniform_labeling


def test_plane_tree_words():
    cherry = PlaneTree((2, 0, 0))
    assert cherry.to_word() == '()()'
    assert PlaneTree.from_word('(())').counts == (1, 1, 0)
    assert PlaneTree.from_word(cherry.to_word()) == cherry
    assert cherry.size == 2 and cherry.num_vertices == 3


@pytest.mark.parametrize('counts', [(), (1,), (0, 0), (1, 0, 0)])
def test_plane_tree_rejects_bad_counts(counts):
    with pytest.raises(ValueError):
        PlaneTree(counts)


def test_truncated_tree():
    t = PlaneTree.from_word('(()())(())')
    assert t.height == 2
    assert t.truncated(1).to_word() == '()()'
    assert t.truncated(0) == PlaneTree.singleton()


def test_labeled_tree_increments():
    t = PlaneTree.from_word('(())')
    lt = LabeledTree.from_increments(t, [1, -1])
    assert lt.labels == (0, 1, 0)
    assert LabeledTree.from_word(lt.to_word()) == lt
    with pytest.raises(ValueError):
        LabeledTree(t, (0, 2, 1))
    assert len(list(enumerate_labelings(t))) == 9


@pytest.mark.parametrize('n,sigma,expected', [(0, 1, 1), (3, 1, 5), (1, 2, 2), (2, 2, 5), (2, 3, 9)])
def test_count_forests(n, sigma, expected):
    assert count_forests(n, sigma) == expected
    forests = list(enumerate_forests(n, sigma))
    assert len(forests) == expected
    assert len(set(forests)) == expected
    assert all(f.sigma == sigma and f.size == n for f in forests)


def test_forest_steps_round_trip():
    for f in enumerate_forests(2, 2):
        assert Forest.from_steps(f.steps()) == f


def test_uniform_forest_is_uniform():
    rng = Stream(3).generator()
    seen = {}
    for _ in range(2000):
        f = sample_uniform_forest(2, 2, rng)
        seen[f] = seen.get(f, 0) + 1
    assert len(seen) == 5
    assert min(seen.values()) > 300


def test_labeled_forest():
    f = sample_labeled_forest(10, 3, Stream(0).child('forest'))
    assert f.labeled and f.sigma == 3 and f.size == 10


def test_bridges():
    assert len(list(enumerate_bridges(2))) == 6
    b = Bridge.from_string('UDDU')
    assert b.values == (0, 1, 0, -1)
    assert b.sigma == 2
    ds = b.down_steps()
    assert len(ds) == 2 and ds.at(1) == 1 and ds.at(2) == 2
    with pytest.raises(ValueError):
        Bridge((0, 2))
    s = sample_uniform_bridge(5, Stream(1).generator())
    assert len(s) == 10 and sum(s.steps()) == 0


def test_gw_probability_sums_to_one():
    p = Fraction(1, 3)
    # every tree with n edges has the probability of the path with n edges
    total = sum(count_forests(n, 1) * gw_probability(PlaneTree((1,) * n + (0,)), p) for n in range(80))
    assert 0 < 1 - total < Fraction(1, 10 ** 4)


def test_sample_gw_geometric_at_zero_is_a_vertex():
    assert sample_gw_geometric(0, rng=Stream(0).generator()) == PlaneTree.singleton()


def test_size_cap():
    with pytest.raises(SizeCapExceeded):
        for seed in range(200):
            sample_gw_geometric(Fraction(1, 2), size_cap=2, rng=Stream(seed).generator())


def test_two_type_probability():
    circ = GeometricLaw(Fraction(1, 2))
    bullet = GeometricLaw(Fraction(1, 2))
    t = PlaneTree.from_word('(())')
    assert two_type_gw_probability(t, circ, bullet) == Fraction(1, 2) ** 5


def test_check_critical():
    check_critical(GeometricLaw(Fraction(1, 2)), GeometricLaw(Fraction(1, 2)))
    with pytest.raises(NonCriticalPair):
        check_critical(GeometricLaw(Fraction(1, 3)), GeometricLaw(Fraction(1, 2)))


def test_tabulated_law():
    def builder(length):
        return list(range(length)), [Fraction(1, 2 ** (k + 1)) for k in range(length)]

    law = TabulatedLaw(builder, 4, mean=Fraction(1))
    assert law.pmf(10) == Fraction(1, 2 ** 11)
    rng = Stream(0).generator()
    draws = [law.sample(rng) for _ in range(4000)]
    assert abs(np.mean(draws) - 1) < 0.1
    assert law.size_biased().pmf(0) == 0


def test_kesten_tree_spine_reaches_cap():
    law = GeometricLaw(Fraction(1, 2))
    k = sample_kesten_two_type(law, law, 6, Stream(5).generator())
    heights = k.tree.heights
    assert [heights[v] for v in k.spine] == list(range(7))
    with pytest.raises(ValueError):
        sample_kesten_two_type(law, law, 3)


@pytest.mark.parametrize('word', ['(())', '(()()())', '(())(())', '(((())))', '(()((()))())'])
def test_looptree_round_trip(word):
    t = PlaneTree.from_word(word)
    l = loop_of(t)
    assert validate(l) == []
    assert tree_of(l) == t
    components = looptree_components(l)
    assert sorted(components.loop_roots) == [u for u in range(t.num_vertices) if t.heights[u] % 2]


def test_looptree_vertex_count():
    t = PlaneTree.from_word('(()()())')
    l = loop_of(t)
    assert l.num_vertices == 4
    assert l.num_faces == 2


def test_prefix_law_tv():
    assert exact_prefix_law_tv(8, 8, 0, Fraction(1, 3), 16).tv_lower == 0
    values = [exact_prefix_law_tv(n, n, 1, Fraction(1, 3), 64).tv_lower for n in (4, 8, 16)]
    assert values[0] > values[1] > values[2] > 0
    with pytest.raises(ValueError):
        exact_prefix_law_tv(4, 2, 3, Fraction(1, 3), 8)


def test_plane_tree_to_map():
    t = PlaneTree.from_word('(()())()')
    m = t.to_map()
    assert validate(m) == []
    assert m.num_vertices == t.num_vertices and m.num_faces == 1
    assert m.degree(m.root_vertex) == 2
    # root edge goes to the first child
    assert m.degree(m.target(m.root)) == 3
    assert PlaneTree.singleton().to_map().num_half_edges == 0


def test_gw_geometric_frequencies():
    p = Fraction(1, 3)
    rng = Stream(12).generator()
    trees = [sample_gw_geometric(p, rng=rng) for _ in range(3000)]
    assert abs(np.mean([t.counts[0] for t in trees]) - 0.5) < 0.05
    small = [f[0] for n in range(3) for f in enumerate_forests(n, 1)]
    observed = [sum(1 for t in trees if t == s) for s in small]
    observed.append(len(trees) - sum(observed))
    probs = [gw_probability(s, p) for s in small]
    probs.append(1 - sum(probs))
    _, pvalue = chi_square_gof(observed, probs)
    assert pvalue > 1e-3


def test_two_type_gw_frequencies():
    circ, bullet = GeometricLaw(Fraction(1, 3)), GeometricLaw(Fraction(1, 2))
    rng = Stream(13).generator()
    trees = [sample_two_type_gw(circ, bullet, rng=rng) for _ in range(3000)]
    white = [k for t in trees for k, h in zip(t.counts, t.heights) if h % 2 == 0]
    black = [k for t in trees for k, h in zip(t.counts, t.heights) if h % 2]
    assert abs(np.mean(white) - 0.5) < 0.05
    assert abs(np.mean(black) - 1) < 0.1
    small = [f[0] for n in range(4) for f in enumerate_forests(n, 1)]
    observed = [sum(1 for t in trees if t == s) for s in small]
    observed.append(len(trees) - sum(observed))
    probs = [two_type_gw_probability(s, circ, bullet) for s in small]
    probs.append(1 - sum(probs))
    _, pvalue = chi_square_gof(observed, probs)
    assert pvalue > 1e-3


def test_kesten_geometric_spine():
    spines = [sample_kesten_geometric_spine(4, Stream(6).child(t).generator()) for t in range(800)]
    for k in spines[:20]:
        heights = k.tree.heights
        assert [heights[v] for v in k.spine] == list(range(5))
        for i, v in enumerate(k.spine[:-1]):
            assert len(k.tree.children[v]) == k.left[i] + 1 + k.right[i]
            assert k.tree.children[v][k.left[i]] == k.spine[i + 1]
        assert max(heights) <= 4
    law = SizeBiasedGeometricLaw(Fraction(1, 2))
    cells = 8
    degrees = [min(len(k.tree.children[0]), cells) for k in spines]
    observed = [degrees.count(d) for d in range(1, cells + 1)]
    probs = [law.pmf(d) for d in range(1, cells)]
    probs.append(1 - sum(probs))
    _, pvalue = chi_square_gof(observed, probs)
    assert pvalue > 1e-3
    assert abs(np.mean([k.left[1] for k in spines]) - 1) < 0.2


def test_uniform_labeling_is_uniform():
    t = PlaneTree.from_word('()()')
    rng = Stream(14).generator()
    draws = [uniform_labeling(t, rng) for _ in range(1800)]
    labelings = list(enumerate_labelings(t))
    assert len(labelings) == 9
    _, pvalue = chi_square_gof([draws.count(lt) for lt in labelings], [Fraction(1, 9)] * 9)
    assert pvalue > 1e-3


def test_contour_label_invariants():
    g = Stream(8).generator()
    f = sample_labeled_forest(12, 4, g)
    b = sample_uniform_bridge(4, g)
    pair = contour_label(f, b)
    assert len(pair) == 2 * 12 + 4 + 1
    C, L, I = pair.contour, pair.labels, pair.tree
    assert set(np.abs(np.diff(C)).tolist()) == {1}
    ds = b.down_steps()
    for j in range(len(pair) - 1):
        if I[j + 1] == I[j]:
            assert abs(L[j + 1] - L[j]) <= 1
        if j == 0 or I[j] != I[j - 1]:
            assert L[j] == b[ds.at(I[j] + 1)]
    assert pair.C(pair.end) == -4 and pair.L(pair.end) == 0
    with pytest.raises(ValueError):
        contour_label(f, sample_uniform_bridge(3, g))
