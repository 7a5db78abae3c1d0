from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgraph import generators, ksystem as ks
from kgraph.monoid import grid_upto
from kgraph.oracle import rank1_family, single_vertex_rank2_family


def relabel(sys, names):
    """Rename vertices via ``names`` and reverse the vertex order."""
    doc = ks.to_dict(sys)
    doc["vertices"] = [names[v] for v in reversed(doc["vertices"])]
    doc["edges"] = {c: [[f"z{e}", names[r], names[s]] for e, r, s in rows]
                    for c, rows in doc["edges"].items()}
    doc["squares"] = {k: [[f"z{t}" for t in row] for row in rows] for k, rows in doc["squares"].items()}
    return ks.from_dict(doc)


def _all_paths(sys, bound):
    for d in grid_upto(sys.rank, bound):
        yield from ks.enumerate_paths(sys, d)


def test_cuntz_flags(o2):
    rep = ks.validate(o2)
    assert rep.ok
    assert rep.flags["1"] == {"full": True, "regular": True, "left_injective": True, "imprimitivity": False}
    assert ks.validate(generators.loop()).flags["1"]["imprimitivity"]


def test_flip_validates_and_commutes(flip22):
    rep = ks.validate(flip22)
    assert rep.ok and rep.saturated_fell
    b1, b2 = flip22.adjacency_matrices()
    assert b1 == b2 == [[2]]


def test_square_changing_source_is_reported():
    sys = ks.build(
        2, ["u", "w"],
        {1: [("a", "u", "u"), ("b", "u", "w")], 2: [("x", "u", "u"), ("y", "w", "w")]},
        {(1, 2): [("a", "x", "x", "b"), ("b", "y", "x", "a")]},
    )
    with pytest.raises(ks.ValidationError) as info:
        ks.validate(sys)
    assert any(err["pair"] == ["a", "x"] for err in info.value.report.square_errors)
    partial = ks.validate(sys, "partial")
    assert not partial.ok


def test_missing_square_is_reported(flip22):
    doc = ks.to_dict(flip22)
    doc["squares"]["1,2"] = doc["squares"]["1,2"][1:]
    sys = ks.from_dict(doc)
    rep = ks.validate(sys, "partial")
    assert any("has no square" in e["message"] for e in rep.square_errors)


def test_noncommuting_matrices_reported():
    sys = ks.build(2, ["1", "2"], {1: [("a", "1", "2")], 2: [("x", "1", "1")]})
    rep = ks.validate(sys, "partial")
    assert rep.commute_errors


def test_file_format_round_trip(tmp_path, flip22):
    path = tmp_path / "s.json"
    ks.dump(flip22, path)
    again = ks.load(path)
    assert ks.same_system(again, flip22)


@pytest.mark.parametrize("doc, msg", [
    ({"rank": 1, "vertices": ["v"], "edges": {}, "extra": 1}, "unknown keys"),
    ({"rank": 0, "vertices": ["v"]}, "rank"),
    ({"rank": 1, "vertices": ["v", "v"]}, "duplicate vertex"),
    ({"rank": 1, "vertices": ["v"], "edges": {"1": [["e", "v", "w"]]}}, "unknown vertex"),
    ({"rank": 1, "vertices": ["v"], "edges": {"2": [["e", "v", "v"]]}}, "colour"),
    ({"rank": 1, "vertices": ["v"], "edges": {"1": [["e", "v", "v"], ["e", "v", "v"]]}}, "duplicate edge"),
    ({"rank": 2, "vertices": ["v"], "edges": {"1": [["a", "v", "v"]], "2": [["x", "v", "v"]]},
      "squares": {"1,2": [["x", "a", "a", "x"]]}}, "wrong colour"),
])
def test_malformed_documents(doc, msg):
    with pytest.raises(ks.KSystemError, match=msg):
        ks.from_dict(doc)


def test_unknown_keys_allowed_when_lenient():
    ks.from_dict({"rank": 1, "vertices": ["v"], "comment": "x"}, strict=False)


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{nope")
    with pytest.raises(ks.KSystemError):
        ks.load(p)


def test_path_counts(o2, flip22):
    assert len(ks.enumerate_paths(o2, (3,))) == 8
    assert [p.range for p in ks.enumerate_paths(o2, (0,))] == ["v"]
    assert len(ks.enumerate_paths(flip22, (1, 1))) == 4
    with pytest.raises(ks.PathError):
        ks.enumerate_paths(o2, (13,))


def test_flip_normal_form_and_segment(flip22):
    y = ks.compose(flip22, flip22.path_from_edges(["a1"]), flip22.path_from_edges(["x2"]))
    assert y.edges == ("a1", "x2")
    end, beg = ks.segment(flip22, y, (0, 1))
    assert end.edges == ("x2",) and beg.edges == ("a1",)
    # written in the other colour order the same path normalises back
    assert flip22.path_from_edges(["x2", "a1"]).edges == ("a1", "x2")


def test_transpose_square_reorders(transpose22):
    y = transpose22.path_from_edges(["x1", "a2"])
    assert y.edges == ("a1", "x2")


def test_segment_errors(o2):
    y = ks.enumerate_paths(o2, (2,))[0]
    with pytest.raises(ks.PathError):
        ks.segment(o2, y, (3,))
    with pytest.raises(ks.PathError):
        ks.compose(o2, y, ks.KSystem(1, ("w",), {}).unit_path("w"))


def _test_systems():
    yield generators.cuntz(2)
    yield generators.lattice_example()
    yield generators.grid(2, 2, "flip")
    yield generators.grid(2, 2, "transpose")
    yield generators.grid(2, 3, [3, 0, 4, 1, 5, 2])
    yield generators.grid(1, 2)


@pytest.mark.parametrize("sys", list(_test_systems()), ids=lambda s: f"r{s.rank}-{len(s.edges)}")
def test_counts_match_matrix_products(sys):
    ks.validate(sys)
    for d in grid_upto(sys.rank, 4):
        m = ks.count_paths(sys, d)
        paths = ks.enumerate_paths(sys, d)
        for x in sys.vertices:
            for y in sys.vertices:
                n = sum(1 for p in paths if p.range == x and p.source == y)
                assert n == m[sys.vertex_index[x]][sys.vertex_index[y]]
        assert len(set(paths)) == len(paths)


@pytest.mark.parametrize("sys", list(_test_systems()), ids=lambda s: f"r{s.rank}-{len(s.edges)}")
def test_segment_identities(sys):
    for y in _all_paths(sys, 4):
        d = y.degree
        for u in itertools.product(*(range(t + 1) for t in d)):
            end, beg = ks.segment(sys, y, u)
            assert ks.compose(sys, end, beg) == y
            assert ks.segment(sys, ks.compose(sys, end, beg), u) == (end, beg)
            # nested truncations
            for v in itertools.product(*(range(t + 1) for t in u)):
                assert ks.segment(sys, end, v)[0] == ks.segment(sys, y, v)[0]
                w = tuple(a - b for a, b in zip(d, u))
                rest_w = ks.segment(sys, y, tuple(a - b for a, b in zip(d, w)))[1]
                assert rest_w == beg
                # beginning after v, then its ending of length u - v, equals the middle of end
                mid_direct = ks.mid(sys, y, v, tuple(a - b for a, b in zip(u, v)))
                assert mid_direct == ks.segment(sys, end, v)[1]


def test_possible_vertices_examples(dangling):
    chain = ks.build(1, ["1", "2"], {1: [("l", "1", "1"), ("e", "2", "1")]})
    assert ks.possible_vertices(chain) == {"1", "2"}
    assert ks.possible_vertices(dangling) == {"1"}
    r = ks.restrict_to_possible(dangling)
    assert r.vertices == ("1",) and list(r.edges) == ["l"]
    assert ks.same_system(ks.restrict_to_possible(r), r)
    o2 = generators.cuntz(2)
    assert ks.same_system(ks.restrict_to_possible(o2), o2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=10))
def test_restriction_properties(pairs):
    names = [str(i) for i in range(4)]
    sys = ks.build(1, names, {1: [(f"e{i}", names[r], names[s]) for i, (r, s) in enumerate(pairs)]})
    # an edge out of X' always lands in X', so this never raises
    r = ks.restrict_to_possible(sys)
    ks.validate(r)
    for v in r.vertices:
        assert r.edges_into(1, v)
    assert ks.same_system(ks.restrict_to_possible(r), r)


def test_relabelled_systems_have_same_counts():
    sys = generators.lattice_example()
    other = relabel(sys, {"1": "B", "2": "A"})
    for d in range(4):
        assert len(ks.enumerate_paths(sys, (d,))) == len(ks.enumerate_paths(other, (d,)))


def test_families_are_valid():
    fam = list(single_vertex_rank2_family())
    assert len(fam) == 1 + 2 + 2 + 24
    for sys in fam:
        assert ks.validate(sys).ok
    assert sum(1 for _ in rank1_family(2, 1)) == 2 + 16
