import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidal.algebra import center, validate_algebra
from groupoidal.errors import NotWideError
from groupoidal.generators import ex1, ex2, ex3
from groupoidal.groupoid import Subgroupoid, mask_of, wide_subgroupoids
from groupoidal.skew import build_skew, coset_decomposition_check
from tests.strategies import vectors


@pytest.fixture(scope="module")
def skews():
    return {name: build_skew(build(5)) for name, build in (("ex1", ex1), ("ex2", ex2), ("ex3", ex3))}


@pytest.mark.parametrize("name, dim", [("ex1", 4), ("ex2", 8), ("ex3", 12)])
def test_dimension_and_axioms(skews, name, dim):
    skew = skews[name]
    assert skew.dim == dim
    assert validate_algebra(skew.algebra).ok


def test_pair_groupoid_gives_matrix_ring(skews):
    # F_p x F_p moved by the pair groupoid on two objects is M_2(F_p)
    assert center(skews["ex1"].algebra).dim == 1


def test_unit_is_embedded_unit(skews):
    for skew in skews.values():
        assert np.array_equal(skew.embed(skew.action.algebra.unit), skew.algebra.unit)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_embedding_is_multiplicative(skews, data):
    skew = skews["ex2"]
    a = skew.action.algebra
    x, y = data.draw(vectors(a.dim, a.p)), data.draw(vectors(a.dim, a.p))
    assert np.array_equal(
        skew.algebra.multiply(skew.embed(x), skew.embed(y)),
        skew.embed(a.multiply(x, y)),
    )


def test_product_rule(skews):
    skew = skews["ex3"]
    act = skew.action
    g, a = act.groupoid, act.algebra
    for m in range(g.size):
        for n in range(g.size):
            for i in range(a.dim):
                for j in range(a.dim):
                    x, y = a.basis_vector(i), a.basis_vector(j)
                    lhs = skew.algebra.multiply(skew.element(m, x), skew.element(n, y))
                    mn = g.compose(m, n)
                    if mn is None:
                        assert not lhs.any()
                        continue
                    x1 = a.multiply(x, act.one(m))
                    y1 = a.multiply(y, act.one(n))
                    rhs = skew.element(mn, a.multiply(x1, act.apply(m, a.multiply(y1, act.source_one(m)))))
                    assert np.array_equal(lhs, rhs)


def test_sub_rings_are_unital_subalgebras(skews):
    skew = skews["ex3"]
    for h in wide_subgroupoids(skew.action.groupoid):
        sub = skew.sub_ring(h)
        assert sub.unital and sub.is_closed()
        assert sub.dim == sum(len(skew.block_range(m)) for m in h.morphisms)


def test_sub_ring_needs_wide(skews):
    skew = skews["ex1"]
    with pytest.raises(NotWideError):
        skew.sub_ring(Subgroupoid(skew.action.groupoid, mask_of([0, 2])))


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
def test_coset_decompositions(skews, name):
    skew = skews[name]
    for h in wide_subgroupoids(skew.action.groupoid):
        check = coset_decomposition_check(skew, h)
        assert check.ok, check.to_dict()
        assert sum(check.right_dims) == skew.dim
        assert sum(check.left_dims) == skew.dim
