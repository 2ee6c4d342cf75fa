import io
import os

import pytest

from uihpq.exceptions import MapFormatError
from uihpq.planar_map import HalfEdgeMap, QuadrangulationWithBoundary, boundary, canonical_encoding, \
    combinatorial_ball, graph_distances, is_simple_boundary, local_distance, map_from_dict, map_to_dict, \
    read_map, restrict, validate, validate_quadrangulation, write_map

DATA = os.path.join(os.path.dirname(__file__), 'data')


def edge_map():
    return QuadrangulationWithBoundary(HalfEdgeMap((1, 0), (0, 1), 0))


def path_map():
    # two edges u-v-w; half-edges 0, 1 on the first edge, 2, 3 on the second
    return QuadrangulationWithBoundary(HalfEdgeMap((1, 0, 3, 2), (0, 2, 1, 3), 0))


def test_edge_map_counts():
    q = edge_map()
    assert q.map.num_vertices == 2
    assert q.map.num_edges == 1
    assert q.map.num_faces == 1
    assert q.sigma == 1 and q.size == 0 and q.perimeter == 2
    assert validate_quadrangulation(q) == []


def test_vertex_map():
    m = HalfEdgeMap.vertex_map()
    assert m.num_vertices == 1 and m.num_faces == 1 and m.num_edges == 0
    assert validate(m) == []
    assert graph_distances(m) == [0]


def test_corrupted_alpha_is_rejected():
    m = edge_map().map
    assert validate(HalfEdgeMap((0, 0), m.rot, m.root))
    assert validate(HalfEdgeMap((1, 0), (0, 0), 0))


def test_disconnected_map_is_rejected():
    m = HalfEdgeMap((1, 0, 3, 2), (0, 1, 2, 3), 0)
    assert 'not connected' in validate(m)


def test_path_boundary():
    q = path_map()
    assert validate_quadrangulation(q) == []
    assert q.sigma == 2
    b = boundary(q)
    assert len(b) == 4
    assert b[0] == q.map.root
    assert not is_simple_boundary(q)
    assert is_simple_boundary(edge_map())


def test_graph_distances_on_path():
    q = path_map()
    dist = graph_distances(q.map)
    assert sorted(dist) == [0, 1, 2]
    assert graph_distances(q.map, limit=1).count(-1) == 1


def test_ball_radius_zero_is_vertex_map():
    ball = combinatorial_ball(path_map().map, r=0)
    assert ball.submap.num_edges == 0
    assert ball.num_vertices == 1


def test_ball_of_path():
    m = path_map().map
    ball = combinatorial_ball(m, r=1)
    assert ball.submap.num_edges == 1
    assert validate(ball.submap) == []
    assert ball.distance == (0, 1)
    assert combinatorial_ball(m, r=2).encoding() == canonical_encoding(m)


def test_restrict_keeps_rotation():
    m = path_map().map
    sub, remap = restrict(m, [0, 1], 0)
    assert remap == (0, 1)
    assert sub.num_edges == 1
    assert validate(sub) == []


def test_canonical_encoding_is_root_invariant_for_edge():
    assert canonical_encoding(HalfEdgeMap((1, 0), (0, 1), 0)) == canonical_encoding(HalfEdgeMap((1, 0), (0, 1), 1))


def test_canonical_encoding_ignores_labels():
    # same path with half-edge ids permuted
    perm = [2, 3, 0, 1]
    m = path_map().map
    alpha = [0] * 4
    rot = [0] * 4
    for h in range(4):
        alpha[perm[h]] = perm[m.alpha[h]]
        rot[perm[h]] = perm[m.rot[h]]
    relabeled = HalfEdgeMap(alpha, rot, perm[m.root])
    assert canonical_encoding(relabeled) == canonical_encoding(m)
    assert canonical_encoding(m.rerooted(2)) != canonical_encoding(m)


def test_local_distance():
    m = path_map().map
    assert local_distance(m, m) == 0
    assert local_distance(m, edge_map().map) == 0.5


def test_golden_edge_file():
    q = read_map(os.path.join(DATA, 'edge.pmap'))
    assert isinstance(q, QuadrangulationWithBoundary)
    assert canonical_encoding(q.map) == canonical_encoding(edge_map().map)
    assert q.outer_face == edge_map().outer_face


def test_write_then_read_keeps_outer_face():
    q = path_map()
    buf = io.StringIO()
    write_map(q, buf)
    back = read_map(io.StringIO(buf.getvalue()))
    assert back.map == q.map
    assert back.outer_face == q.outer_face
    assert map_to_dict(back) == map_to_dict(q)


def test_plain_map_has_no_outer_face():
    m = map_from_dict(map_to_dict(path_map().map))
    assert isinstance(m, HalfEdgeMap)


def test_malformed_json_reports_position():
    with pytest.raises(MapFormatError) as err:
        read_map(io.StringIO('{"version": 1,\n "alpha": [1, 0\n'))
    assert err.value.line is not None


def test_out_of_range_id_reports_field():
    text = '{"version": 1, "half_edges": 2,\n"alpha": [1, 5], "rot": [0, 1], "root": 0}'
    with pytest.raises(MapFormatError) as err:
        read_map(io.StringIO(text))
    assert err.value.line == 2
    assert 'alpha' in str(err.value)


def test_unknown_version():
    with pytest.raises(MapFormatError):
        map_from_dict({'version': 7, 'half_edges': 0, 'alpha': [], 'rot': [], 'root': None})
