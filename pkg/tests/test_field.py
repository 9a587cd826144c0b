import pytest
from hypothesis import given, strategies as st

from cmkit import FieldError, field_from_partition, partition_view, validate_field

from conftest import random_system

K1_VECTORS = [("A", "AD"), ("B", "BE"), ("C", "AC"), ("D", "CD"), ("E", "EF")]
K1_CRITICAL = ["BF", "DE", "F"]


def test_k1_field_valid(k1):
    _, field = k1
    assert len(field.matched) == 5
    assert len(field.critical) == 3


def test_missing_critical_reports_coverage(k1):
    complex_, _ = k1
    with pytest.raises(FieldError) as err:
        validate_field(complex_, K1_VECTORS, ["BF", "DE"])
    assert err.value.clause == "ii"
    assert err.value.witness == ("F",)


def test_double_coverage_reports(k1):
    complex_, _ = k1
    with pytest.raises(FieldError) as err:
        validate_field(complex_, K1_VECTORS + [("D", "DE")], K1_CRITICAL)
    assert err.value.clause == "iii"
    assert "covered twice" in str(err.value)


def test_non_facet_vector_rejected(k1):
    complex_, _ = k1
    with pytest.raises(FieldError) as err:
        validate_field(complex_, [("A", "CD")] + K1_VECTORS[1:], K1_CRITICAL + ["AD"])
    assert err.value.clause == "i"


def test_head_reuse_rejected():
    from cmkit import SimplicialComplex
    complex_ = SimplicialComplex("ABC", [["A", "B", "C"]])
    with pytest.raises(FieldError) as err:
        validate_field(complex_, [("A", "AB"), ("B", "AB")], [])
    assert err.value.clause in ("injective", "iii")


def test_sigma_maps_k1(k1):
    complex_, field = k1
    a, ad, bf = complex_.simplex("A"), complex_.simplex("AD"), complex_.simplex("BF")
    assert field.sigma_plus(a) == ad and field.sigma_minus(a) == a
    assert field.sigma_plus(ad) == ad and field.sigma_minus(ad) == a
    assert field.sigma_plus(bf) == bf and field.sigma_minus(bf) == bf


def test_sigma_involutions_everywhere(k1):
    complex_, field = k1
    for sigma in complex_.sorted_simplices():
        plus, minus = field.sigma_plus(sigma), field.sigma_minus(sigma)
        assert field.sigma_plus(minus) == plus
        assert field.sigma_minus(plus) == minus
        critical = field.is_critical(sigma)
        assert critical == (plus == minus == sigma)


def test_partition_round_trip(k1):
    complex_, field = k1
    rebuilt = field_from_partition(complex_, partition_view(field))
    assert rebuilt.matched == field.matched
    assert rebuilt.critical == field.critical


@given(st.integers(min_value=0, max_value=200))
def test_random_fields_satisfy_invariants(seed):
    complex_, field = random_system(seed)
    covered = set(field.critical) | set(field.matched) | set(field.inverse)
    assert covered == complex_.simplices
    for sigma in complex_.simplices:
        plus, minus = field.sigma_plus(sigma), field.sigma_minus(sigma)
        assert field.sigma_plus(minus) == plus
        assert field.sigma_minus(plus) == minus
