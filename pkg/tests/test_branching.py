from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from uihpq.bdg import enumerate_quadrangulations, uihpq_ball
from uihpq.boltzmann import F_sigma, count_quadrangulations, offspring_pair, sample_boltzmann
from uihpq.branching import EDGE_MAP, Decomposition, build_uihpq_branching, cut_decomposition, cut_r, \
    cut_r_quad, psi, psi_inverse, resistance_lower_bound, sample_branching_decomposition, scoop, spine_cutsets, \
    sample_tree_of_components, tree_of_components, tree_of_components_law
from uihpq.exceptions import NonSimplePiece, PerimeterMismatch
from uihpq.lab.experiments import edge_counts, piece_size_pairs, root_ball_encoding
from uihpq.lab.stats import chi_square_gof, chi_square_independence, ks_two_sample, tv_distance
from uihpq.planar_map import HalfEdgeMap, QuadrangulationWithBoundary, canonical_encoding, is_simple_boundary, \
    validate, validate_quadrangulation
from uihpq.rng import Stream
from uihpq.trees import PlaneTree

QUARTER = Fraction(1, 4)


def path_map():
    return QuadrangulationWithBoundary(HalfEdgeMap((1, 0, 3, 2), (0, 2, 1, 3), 0))


def same_map(a, b):
    return canonical_encoding(a.map) == canonical_encoding(b.map)


def test_edge_map_decomposition():
    d = psi(EDGE_MAP)
    assert d.tree.to_word() == '(())'
    assert list(d.pieces) == [1]
    assert d.pieces[1].map.num_edges == 1
    assert same_map(psi_inverse(d), EDGE_MAP)


def test_path_has_two_loops():
    q = path_map()
    d = psi(q)
    assert d.tree.num_vertices == q.perimeter + 1
    assert len(d.pieces) == 2
    assert all(piece.map.num_edges == 1 for piece in d.pieces.values())
    assert same_map(psi_inverse(d), q)


def test_scoop_is_a_looptree():
    q = path_map()
    l = scoop(q)
    assert validate(l) == []
    assert l.num_edges == q.perimeter
    assert tree_of_components(q) == psi(q).tree


def test_vertex_map_decomposes_to_singleton():
    q = QuadrangulationWithBoundary(HalfEdgeMap.vertex_map())
    d = psi(q)
    assert d.tree == PlaneTree.singleton()
    assert psi_inverse(d).map.num_edges == 0


@pytest.mark.parametrize('n,sigma', [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2)])
def test_round_trip_on_all_small_maps(n, sigma):
    for q in enumerate_quadrangulations(n, sigma):
        d = psi(q)
        d.check()
        assert d.tree.num_vertices == q.perimeter + 1
        assert all(is_simple_boundary(piece) for piece in d.pieces.values())
        back = psi_inverse(d)
        assert validate_quadrangulation(back) == []
        assert same_map(back, q)


def test_round_trip_on_boltzmann_samples():
    for t in range(30):
        q = sample_boltzmann(5, Fraction(3, 10), Stream(8).child(t))
        d = psi(q)
        assert d.tree.num_vertices == q.perimeter + 1
        assert same_map(psi_inverse(d), q)


def test_simple_boundary_is_a_single_piece():
    for q in enumerate_quadrangulations(1, 2):
        if is_simple_boundary(q):
            d = psi(q)
            assert d.tree.counts == (1, 3, 0, 0, 0)
            assert same_map(d.pieces[1], q)
            break
    else:
        pytest.fail('no simple quadrangulation with four boundary edges')


def test_check_catches_bad_pieces():
    tree = PlaneTree.from_word('(()()())')
    with pytest.raises(PerimeterMismatch):
        Decomposition(tree, {1: EDGE_MAP}).check()
    with pytest.raises(PerimeterMismatch):
        Decomposition(tree, {}).check()
    path = path_map()
    with pytest.raises(NonSimplePiece):
        Decomposition(tree, {1: path}).check()


def test_decomposition_serialization():
    q = sample_boltzmann(3, QUARTER, Stream(2))
    d = psi(q)
    back = Decomposition.loads(d.dumps())
    assert back.tree == d.tree
    assert sorted(back.pieces) == sorted(d.pieces)
    assert same_map(psi_inverse(back), q)


def test_cut_r():
    t = PlaneTree.from_word('(((())))')
    assert cut_r(t, 1).to_word() == '(())'
    with pytest.raises(ValueError):
        cut_r(t, 0)


def test_cut_keeps_pieces_of_kept_black_vertices():
    q = sample_boltzmann(6, QUARTER, Stream(4))
    d = psi(q)
    cut = cut_decomposition(d, 1)
    cut.check()
    assert all(cut.tree.heights[u] == 1 for u in cut.pieces)
    sub = cut_r_quad(q, 1)
    assert validate_quadrangulation(sub) == []
    if d.tree.height <= 2:
        assert same_map(sub, q)


def test_branching_decomposition_is_consistent():
    pair = offspring_pair(QUARTER)
    d, spine = sample_branching_decomposition(QUARTER, 2, Stream(6), pair=pair)
    d.check()
    assert d.tree.height == 4
    assert [d.tree.heights[v] for v in spine] == list(range(5))


def test_branching_construction_is_valid():
    for t in range(5):
        q = build_uihpq_branching(QUARTER, 1, Stream(10).child(t))
        assert validate_quadrangulation(q) == []


def test_branching_at_p_zero_is_a_tree():
    for t in range(10):
        m = build_uihpq_branching(0, 2, Stream(3).child(t)).map
        assert m.num_vertices == m.num_edges + 1


def test_branching_rejects_half():
    with pytest.raises(ValueError):
        build_uihpq_branching(Fraction(1, 2), 1, Stream(0))


def test_spine_cutsets():
    sample = spine_cutsets(QUARTER, 50, Stream(12))
    assert len(sample.sizes) == 50
    assert np.all(sample.degrees % 2 == 0)
    assert np.all(sample.sizes >= sample.degrees // 2)
    partial = resistance_lower_bound(sample)
    assert np.all(np.diff(partial) > 0)
    assert partial[0] == pytest.approx(1.0 / sample.sizes[0])


def test_tree_of_components_law():
    law = tree_of_components_law(2, QUARTER)
    assert sorted(law) == sorted(['(())(())', '(((())))', '(()()())'])
    assert sum(law.values()) == 1
    assert law['(())(())'] == law['(((())))']
    with pytest.raises(ValueError):
        tree_of_components_law(0, QUARTER)


def test_tree_of_components_frequencies():
    law = tree_of_components_law(2, QUARTER)
    words = sorted(law)
    pair = offspring_pair(QUARTER)
    decompositions = [psi(sample_boltzmann(2, QUARTER, Stream(31).child(t))) for t in range(1500)]
    gw = [sample_tree_of_components(2, QUARTER, Stream(32).child(t), pair).to_word() for t in range(1500)]
    for sample in ([d.tree.to_word() for d in decompositions], gw):
        assert set(sample) <= set(law)
        _, pvalue = chi_square_gof([sample.count(w) for w in words], [law[w] for w in words])
        assert pvalue > 1e-3
    xs, ys = piece_size_pairs(decompositions)
    assert len(xs) > 100
    _, pvalue = chi_square_independence(xs, ys)
    assert pvalue > 1e-3


def test_uniform_trees_at_p_zero():
    maps = [sample_boltzmann(3, 0, Stream(33).child(t)) for t in range(1000)]
    assert all(q.map.num_vertices == q.map.num_edges + 1 == 4 for q in maps)
    counts = Counter(canonical_encoding(q.map) for q in maps)
    assert len(counts) == 5
    _, pvalue = chi_square_gof(list(counts.values()), [Fraction(1, 5)] * 5)
    assert pvalue > 1e-3


def test_boltzmann_face_count_law():
    cells = 4
    faces = [min(sample_boltzmann(1, QUARTER, Stream(34).child(t)).size, cells) for t in range(2000)]
    g = Fraction(1, 16)
    probs = [count_quadrangulations(n, 1) * g ** n / F_sigma(QUARTER, 1) for n in range(cells)]
    probs.append(1 - sum(probs))
    _, pvalue = chi_square_gof([faces.count(n) for n in range(cells + 1)], probs)
    assert pvalue > 1e-3


def test_branching_ball_matches_bdg_ball():
    samples = 300
    branching = [root_ball_encoding(build_uihpq_branching(QUARTER, 1, Stream(35).child(t)).map, 1)
                 for t in range(samples)]
    bdg = [uihpq_ball(QUARTER, 1, 'root', Stream(36).child(t)).encoding() for t in range(samples)]
    other = [uihpq_ball(QUARTER, 1, 'root', Stream(37).child(t)).encoding() for t in range(samples)]
    _, pvalue = ks_two_sample(edge_counts(branching), edge_counts(bdg))
    assert pvalue > 1e-3
    assert tv_distance(branching, bdg).tv <= tv_distance(other, bdg).tv + 0.1


def test_spine_cutsets_of_simple_pieces():
    sample = spine_cutsets(Fraction(2, 5), 200, Stream(38))
    assert np.all(sample.sizes >= sample.degrees // 2)
    assert np.all((sample.sizes - sample.degrees // 2) % 2 == 0)
