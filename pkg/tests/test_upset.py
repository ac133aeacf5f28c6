"""Unit tests for the ultimately periodic set arithmetic."""

import pytest
from hypothesis import given, strategies as st

from ultragraph.upset import UPSet


def dense(u: UPSet, bound: int) -> set[int]:
    return {m for m in range(1, bound + 1) if u.contains(m)}


upsets = st.builds(
    lambda t, tr_bits, p, r_bits: UPSet.from_data(
        t, [m for m in range(1, t + 1) if tr_bits >> (m - 1) & 1],
        p, [r for r in range(p) if r_bits >> r & 1]),
    st.integers(0, 8), st.integers(0, 255),
    st.integers(1, 9), st.integers(0, 511))


class TestFactories:
    def test_empty(self):
        assert UPSet.empty().is_empty()
        assert UPSet.empty().cardinality().count == 0

    def test_naturals(self):
        n = UPSet.naturals()
        assert not n.is_finite()
        assert n.enumerate(5) == [1, 2, 3, 4, 5]

    def test_from_members(self):
        u = UPSet.from_members([3, 1, 3])
        assert u.members() == [1, 3]
        with pytest.raises(ValueError):
            UPSet.from_members([0])

    def test_multiples(self):
        assert UPSet.multiples(3).enumerate(10) == [3, 6, 9]

    def test_bounds(self):
        assert UPSet.at_most(3).members() == [1, 2, 3]
        assert UPSet.at_most(0).is_empty()
        assert UPSet.at_least(4).enumerate(6) == [4, 5, 6]
        assert UPSet.singleton(7).members() == [7]


class TestCanonicalForm:
    def test_period_is_minimal(self):
        # residues 0,2 mod 4 collapse to 0 mod 2
        u = UPSet.from_data(0, (), 4, (0, 2))
        assert u.period == 2 and u.residues == frozenset({0})

    def test_threshold_is_minimal(self):
        # transient part that just repeats the tail is absorbed
        u = UPSet.from_data(6, (2, 4, 6), 2, (0,))
        assert u.threshold == 0 and u.period == 2

    def test_full_tail_is_naturals_tail(self):
        u = UPSet.from_data(0, (), 6, range(6))
        assert u.period == 1 and u.residues == frozenset({0})

    @given(upsets)
    def test_canonical_is_stable(self, u):
        again = UPSet.from_data(u.threshold, u.transient, u.period, u.residues)
        assert again == u

    @given(upsets, upsets)
    def test_equal_iff_same_dense(self, a, b):
        bound = 4 * a.period * b.period + a.threshold + b.threshold
        assert (a == b) == (dense(a, bound) == dense(b, bound))


class TestOperations:
    @given(upsets, upsets)
    def test_ops_match_dense_model(self, a, b):
        bound = 4 * a.period * b.period + a.threshold + b.threshold
        da, db = dense(a, bound), dense(b, bound)
        assert dense(a.union(b), bound) == da | db
        assert dense(a.intersect(b), bound) == da & db
        assert dense(a.difference(b), bound) == da - db
        assert dense(a.complement(), bound) == set(range(1, bound + 1)) - da

    @given(upsets, upsets)
    def test_operator_sugar(self, a, b):
        assert a | b == a.union(b)
        assert a & b == a.intersect(b)
        assert a - b == a.difference(b)

    def test_complement_involution(self):
        u = UPSet.from_data(3, (1,), 4, (2, 3))
        assert u.complement().complement() == u


class TestQueries:
    def test_cardinality(self):
        assert UPSet.from_members([5, 9]).cardinality().count == 2
        assert UPSet.multiples(2).cardinality().count is None

    def test_members_requires_finite(self):
        with pytest.raises(ValueError):
            UPSet.multiples(2).members()

    def test_min_element(self):
        assert UPSet.empty().min_element() is None
        assert UPSet.multiples(5).min_element() == 5
        assert UPSet.from_data(4, (3,), 2, (0,)).min_element() == 3

    def test_enumerate_rejects_bad_limit(self):
        with pytest.raises(ValueError):
            UPSet.naturals().enumerate(0)


class TestSerialization:
    @given(upsets)
    def test_round_trip(self, u):
        assert UPSet.deserialize(u.serialize()) == u

    def test_rejects_non_canonical(self):
        # 0,2 mod 4 is not the canonical form of the even numbers
        with pytest.raises(ValueError):
            UPSet.deserialize("upset{T=0; transient=; p=4; residues=0,2}")

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            UPSet.deserialize("upset{T=0}")
