import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidal.algebra import (
    AXIOM_ASSOCIATIVITY,
    AXIOM_UNIT,
    StructureAlgebra,
    center,
    centralizer,
    diagonal_algebra,
    direct_product,
    double_centralizer_check,
    matrix_algebra,
    product_subalgebra,
    scalars,
    separability_element,
    subalgebra_closure,
    tensor_over_subring,
    validate_algebra,
    verify_separability,
    view,
    whole,
)
from groupoidal.errors import PreconditionError
from groupoidal.linalg import Subspace
from tests.oracles import brute_center, brute_centralizer
from tests.strategies import actions, vectors


def dual_numbers(p: int) -> StructureAlgebra:
    """F_p[t]/(t^2)."""
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = 1
    return StructureAlgebra(p, mul, np.array([1, 0]), ("1", "t"))


def group_algebra_z2(p: int) -> StructureAlgebra:
    """F_p[Z/2] on the basis 1, s with s^2 = 1."""
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = mul[1, 1, 0] = 1
    return StructureAlgebra(p, mul, np.array([1, 0]), ("1", "s"))


class TestValidation:
    @pytest.mark.parametrize("a", [matrix_algebra(2, 3), diagonal_algebra(3, 5), dual_numbers(2)])
    def test_builders_are_valid(self, a):
        assert validate_algebra(a).ok

    def test_nonassociative_table(self):
        a = matrix_algebra(2, 5)
        mul = a.mul.copy()
        mul[1, 2, 0] = 0  # e12·e21 = 0, while e12·(e21·e12) = e12
        report = validate_algebra(StructureAlgebra(5, mul, a.unit, a.basis_names))
        assert AXIOM_ASSOCIATIVITY in report.axioms

    def test_wrong_unit(self):
        a = diagonal_algebra(2, 5)
        report = validate_algebra(StructureAlgebra(5, a.mul, np.array([1, 0]), a.basis_names))
        assert report.axioms == {AXIOM_UNIT}

    def test_direct_product_renames(self):
        a = direct_product(diagonal_algebra(1, 5, ["1"]), diagonal_algebra(1, 5, ["1"]))
        assert a.basis_names == ("1", "1'")
        assert a.unit.tolist() == [1, 1]
        assert validate_algebra(a).ok


class TestCentralizers:
    def test_center_of_matrix_algebra(self):
        a = matrix_algebra(2, 5)
        assert center(a) == scalars(a)

    def test_center_of_commutative(self):
        a = diagonal_algebra(3, 2)
        assert center(a) == whole(a)
        assert a.is_commutative

    def test_centralizer_of_diagonal(self):
        a = matrix_algebra(2, 3)
        diag = view(a, [a.basis_vector(0), a.basis_vector(3)])
        assert centralizer(a, diag, whole(a)) == diag
        assert double_centralizer_check(a, diag)

    def test_centralizer_of_nothing(self):
        a = matrix_algebra(2, 3)
        empty = view(a, [])
        assert centralizer(a, empty, whole(a)) == whole(a)

    def test_closure_of_nilpotent(self):
        a = matrix_algebra(2, 5)
        s = subalgebra_closure(a, [a.basis_vector(1)])
        assert s.dim == 2 and s.unital and s.is_closed()
        assert centralizer(a, s, whole(a)) == s

    def test_product_needs_central_factor(self):
        a = matrix_algebra(2, 5)
        with pytest.raises(PreconditionError, match="central"):
            product_subalgebra(a, whole(a), view(a, [a.basis_vector(0)]))

    @settings(max_examples=50, deadline=None)
    @given(actions())
    def test_center_matches_enumeration(self, act):
        a = act.algebra
        expected, count = brute_center(a)
        assert center(a).space == expected
        assert count == a.p ** expected.dim

    @settings(max_examples=50, deadline=None)
    @given(actions(), st.data())
    def test_centralizer_matches_enumeration(self, act, data):
        a = act.algebra
        seed = data.draw(vectors(a.dim, a.p))
        inner = subalgebra_closure(a, [seed])
        outer = act.ideals[0]
        expected, _ = brute_centralizer(a, inner.space, outer)
        assert centralizer(a, inner, view(a, outer.basis)).space == expected

    @settings(max_examples=50, deadline=None)
    @given(actions(), st.data())
    def test_centralizer_absorbs_center(self, act, data):
        a = act.algebra
        s = subalgebra_closure(a, [data.draw(vectors(a.dim, a.p))])
        c = center(a)
        r = whole(a)
        assert centralizer(a, s, r) == centralizer(a, product_subalgebra(a, s, c), r)
        if s.issubset(c):
            assert centralizer(a, s, r) == r


class TestSeparability:
    def test_matrix_algebra_over_scalars(self):
        a = matrix_algebra(2, 5)
        witness = separability_element(a, whole(a), scalars(a))
        assert witness is not None
        assert verify_separability(a, witness)

    def test_dual_numbers_are_not_separable(self):
        a = dual_numbers(3)
        assert separability_element(a, whole(a), scalars(a)) is None

    @pytest.mark.parametrize("p, separable", [(2, False), (3, True), (5, True)])
    def test_group_algebra_needs_invertible_order(self, p, separable):
        a = group_algebra_z2(p)
        assert (separability_element(a, whole(a), scalars(a)) is not None) is separable

    def test_over_itself(self):
        a = diagonal_algebra(2, 7)
        witness = separability_element(a, whole(a), whole(a))
        assert witness is not None
        assert witness.quotient.dim == 2

    def test_base_must_commute(self):
        a = matrix_algebra(2, 5)
        diag = view(a, [a.basis_vector(0), a.basis_vector(3)])
        with pytest.raises(PreconditionError, match="commute"):
            separability_element(a, whole(a), diag)

    def test_base_must_contain_unit(self):
        a = diagonal_algebra(2, 5)
        with pytest.raises(PreconditionError, match="unit"):
            separability_element(a, whole(a), view(a, [a.basis_vector(0)]))

    def test_tensor_over_scalars_has_full_dimension(self):
        a = matrix_algebra(2, 3)
        q = tensor_over_subring(a, whole(a), whole(a), scalars(a))
        assert q.dim == 16
        assert q.relations == Subspace.zero(16, 3)

    def test_tensor_over_itself_collapses(self):
        a = diagonal_algebra(2, 3)
        q = tensor_over_subring(a, whole(a), whole(a), whole(a))
        assert q.dim == 2
        u1, u2 = a.basis_vector(0), a.basis_vector(1)
        assert not q.project(q.tensor(u1, u2)).any()
