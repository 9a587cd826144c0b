import pytest
from hypothesis import given, strategies as st

from cmkit import ComplexError, SimplicialComplex


def simplices_of(complex_, *names):
    return frozenset(complex_.simplex(name) for name in names)


def test_k1_closure_count(k1):
    complex_, _ = k1
    assert len(complex_) == 13  # 6 vertices + 7 edges
    assert complex_.dim == 1


def test_single_vertex():
    complex_ = SimplicialComplex(["A"], [["A"]])
    assert complex_.simplices == {("A",)}
    assert complex_.dim == 0


def test_full_triangle_closure():
    complex_ = SimplicialComplex("ABC", [["A", "B", "C"]])
    assert len(complex_) == 7  # every non-empty subset of a 3-set


def test_duplicate_vertex_rejected():
    with pytest.raises(ComplexError):
        SimplicialComplex("AB", [["A", "A"]])


def test_unknown_vertex_rejected():
    with pytest.raises(ComplexError):
        SimplicialComplex("AB", [["A", "Z"]])


def test_closure_of_edge(k1):
    complex_, _ = k1
    got = complex_.closure([complex_.simplex("BF")])
    assert got == simplices_of(complex_, "B", "F", "BF")


def test_closure_empty(k1):
    complex_, _ = k1
    assert complex_.closure([]) == frozenset()


def test_is_closed(k1):
    complex_, _ = k1
    assert complex_.is_closed(simplices_of(complex_, "B", "F", "BF"))
    assert not complex_.is_closed(simplices_of(complex_, "BF"))
    assert complex_.is_closed(simplices_of(complex_, "B", "F"))


def test_exit_set_edge(k1):
    complex_, _ = k1
    assert complex_.exit_set(simplices_of(complex_, "BF")) == simplices_of(complex_, "B", "F")


def test_exit_set_cycle_empty(k1, k1_cycle):
    complex_, _ = k1
    assert complex_.exit_set(k1_cycle) == frozenset()


def test_exit_set_hexagon(hexagon, hexagon_s):
    complex_, _ = hexagon
    expected = simplices_of(complex_, "A", "AD", "AE", "D", "DH", "E", "H")
    assert complex_.exit_set(hexagon_s) == expected


def test_faces_cofaces(k1):
    complex_, _ = k1
    ad = complex_.simplex("AD")
    assert complex_.faces(ad, 1) == simplices_of(complex_, "A", "D")
    assert complex_.faces(complex_.simplex("A"), 1) == frozenset()
    e = complex_.simplex("E")
    assert complex_.cofaces(e, 1) == simplices_of(complex_, "BE", "DE", "EF")


def test_foreign_simplex_rejected(k1):
    complex_, _ = k1
    with pytest.raises(ComplexError):
        complex_.faces(("A", "B"), 1)
    with pytest.raises(ComplexError):
        complex_.simplex_set([("A", "B")])


@given(st.data())
def test_closure_idempotent_and_extensive(k1, data):
    complex_, _ = k1
    pool = complex_.sorted_simplices()
    family = frozenset(data.draw(st.sets(st.sampled_from(pool), max_size=8)))
    closure = complex_.closure(family)
    assert family <= closure
    assert complex_.closure(closure) == closure
    assert complex_.is_closed(family) == (complex_.exit_set(family) == frozenset())


def test_canonical_vertex_order():
    complex_ = SimplicialComplex(["Z", "A"], [["A", "Z"]])
    assert complex_.simplex(["A", "Z"]) == ("Z", "A")  # declared order wins
