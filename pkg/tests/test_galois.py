import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidal.algebra import centralizer, subalgebra_closure, whole
from groupoidal.errors import (
    EnumerationCapExceeded,
    PreconditionError,
    UnknownSubgroupoidError,
    WellDefinednessError,
)
from groupoidal.formats import load_fixture
from groupoidal.formats.instance import load_expectation
from groupoidal.galois import (
    CHECKS,
    GaloisCoordinates,
    GaloisInstance,
    check_commutator_properties,
    check_phi_injective,
    check_theta_injectivity,
    find_coordinates,
    gamma,
    phi,
    sigma,
    sigma_bar,
    theta,
    theta_hypotheses,
    verify_coordinates,
)
from groupoidal.generators import ex2, trivial_group_action
from groupoidal.groupoid import members
from groupoidal.linalg import direct_sum
from groupoidal.models import Status
from groupoidal.service import CheckService
from tests.strategies import diagonal_actions, matrix_actions, vectors

VALID_FIXTURES = ["ex1", "ex2", "ex3", "nongalois"]
CRITERIA = ("lem8_consistent", "teo3_applies", "teo4_applies", "cor1_applies")


class TestCoordinates:
    @pytest.mark.parametrize("name", ["ex1", "ex2"])
    def test_hand_systems_verify(self, fixtures, name):
        inst = fixtures[name]
        assert inst.coordinates_source == "file"
        ok, residuals = verify_coordinates(inst.action, inst.coordinates)
        assert ok
        assert set(residuals) == set(range(inst.groupoid.size))

    def test_ex3_is_searched(self, ex3):
        assert ex3.coordinates_source == "search"
        assert verify_coordinates(ex3.action, ex3.coordinates)[0]

    @pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
    def test_search_finds_a_system(self, fixtures, name):
        coords = find_coordinates(fixtures[name].action)
        assert coords is not None
        assert verify_coordinates(fixtures[name].action, coords)[0]

    def test_non_galois_has_none(self, nongalois):
        assert find_coordinates(nongalois.action) is None
        assert not nongalois.is_galois

    def test_wrong_system_is_rejected(self, ex2):
        a = ex2.algebra
        bad = GaloisCoordinates(((a.unit, a.unit),))
        ok, residuals = verify_coordinates(ex2.action, bad)
        assert not ok
        g = ex2.groupoid.morphism_id("g")
        assert residuals[g].any()

    def test_wrong_file_coordinates_are_kept_for_verification(self):
        act = ex2(5)
        bad = GaloisCoordinates(((act.algebra.unit, act.algebra.unit),))
        inst = GaloisInstance.build(act, coordinates=bad)
        assert inst.supplied_coordinates is bad
        assert inst.coordinates_source == "search"

        summary = CheckService(inst).coordinates_summary()
        assert summary["found"] is True
        assert summary["source"] == "file"
        assert summary["verified"] is False
        assert summary["nonzero_residuals"] == ["g"]
        assert CheckService(inst).coordinates_summary(search=True)["verified"] is True


class TestTables:
    def test_ex3_theta_dimensions(self, ex3):
        assert [theta(ex3, h).dim for h in ex3.wide] == [6, 5, 4, 3]
        assert ex3.invariants.dim == 3
        assert ex3.center_invariants.dim == 2
        assert centralizer(ex3.algebra, ex3.invariants, whole(ex3.algebra)).dim == 4

    def test_ex3_classes(self, ex3):
        assert [len(c) for c in ex3.classes] == [2, 2]
        names = [ex3.groupoid.names[m] for m in members(ex3.s_sets[ex3.full_mask])]
        assert names == ["e", "f", "k", "t"]

    def test_sigma_contains_theta(self, fixtures):
        for inst in fixtures.values():
            for h in inst.wide:
                assert theta(inst, h).issubset(sigma(inst, h))
                assert inst.center.issubset(gamma(inst, h))

    def test_unknown_subgroupoid(self, ex1):
        with pytest.raises(UnknownSubgroupoidError):
            theta(ex1, 0b0101)

    def test_sigma_bar_needs_one_value(self, ex3):
        first, _, third, _ = ex3.wide
        with pytest.raises(WellDefinednessError) as info:
            sigma_bar(ex3, [first, third])
        assert info.value.dims == [6, 4]

    def test_sigma_bar_on_a_class(self, ex3):
        for cls in ex3.classes:
            assert sigma_bar(ex3, cls) == sigma(ex3, cls[0])


class TestPhi:
    def test_ex2_j_is_conjugating_unit(self, ex2):
        g = ex2.groupoid.morphism_id("g")
        assert phi(ex2, [g]).dim == 1

    def test_zero_j_is_rejected(self, ex1):
        g = ex1.groupoid.morphism_id("g")
        with pytest.raises(PreconditionError, match="J_g = 0"):
            phi(ex1, [g])

    @pytest.mark.parametrize("name, subsets", [("ex2", 4), ("ex3", 16)])
    def test_images_are_distinct(self, fixtures, name, subsets):
        result = check_phi_injective(fixtures[name])
        assert result.status is Status.PASS
        assert result.details["subsets"] == subsets
        assert result.details["distinct"] == subsets

    def test_cap(self):
        inst = GaloisInstance.build(ex2(5), max_sg_subsets=2)
        with pytest.raises(EnumerationCapExceeded, match="--max-sg-subsets"):
            check_phi_injective(inst)


class TestTheta:
    def test_ex1_injective_without_hypotheses(self, ex1):
        result = check_theta_injectivity(ex1)
        assert result.status is Status.PASS
        assert result.details["theta_injective"] is True
        assert {result.details[k] for k in CRITERIA} == {Status.NOT_APPLICABLE.value}

    def test_ex2_all_hypotheses_hold(self, ex2):
        assert all(theta_hypotheses(ex2).values())
        result = check_theta_injectivity(ex2)
        assert {result.details[k] for k in CRITERIA} == {Status.PASS.value}

    def test_non_galois_is_not_applicable(self, nongalois):
        assert check_theta_injectivity(nongalois).status is Status.NOT_APPLICABLE


class TestChecks:
    @pytest.mark.parametrize("name", VALID_FIXTURES)
    def test_statuses_match_expectations(self, config, name):
        inst = load_fixture(name, config)
        expected = load_expectation(name)["checks"]
        assert list(expected) == list(CHECKS)
        for check, status in expected.items():
            result = CHECKS[check](inst)
            assert result.status.value == status, (check, result.summary, result.details)

    def test_separability_steps_on_ex2(self, ex2):
        result = CHECKS["separability"](ex2)
        assert result.status is Status.PASS
        assert all(result.details["steps"].values())
        assert ex2.fixed_ring_witness is not None

    def test_decomposition_rows(self, ex3):
        result = CHECKS["lemma-3-1"](ex3)
        rows = {row["subgroupoid"]: row for row in result.details["rows"]}
        assert rows[ex3.label(ex3.full_mask)]["sum_dim"] == 4

    def test_non_galois_still_checks_cosets(self):
        inst = GaloisInstance.build(trivial_group_action(3))
        assert not inst.is_galois
        assert CHECKS["cosets"](inst).status is Status.PASS


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
@settings(max_examples=100, deadline=None)
@given(st.data())
def test_commutator_properties_on_random_seeds(fixtures, name, data):
    inst = fixtures[name]
    a = inst.algebra
    seeds = data.draw(st.lists(vectors(a.dim, a.p), min_size=1, max_size=2))
    s = subalgebra_closure(a, seeds)
    result = check_commutator_properties(inst, extra=[s])
    assert result.status is Status.PASS, result.details


@pytest.mark.parametrize("family", [diagonal_actions, matrix_actions], ids=["diagonal", "matrix"])
@settings(max_examples=50, deadline=None)
@given(st.data())
def test_random_galois_instances(family, data):
    inst = GaloisInstance.build(data.draw(family()))
    if not inst.is_galois:
        assert CHECKS["lemma-3-1"](inst).status is Status.NOT_APPLICABLE
        return

    a = inst.algebra
    for h in inst.wide:
        v = centralizer(a, theta(inst, h), whole(a)).space
        total, direct = direct_sum([inst.action.j_table[m].space for m in h.morphisms], a.dim, a.p)
        assert direct and v == total
    assert CHECKS["lemma-3-1"](inst).status is Status.PASS
    for check in ("phi", "sigma-gamma-bar", "equiv", "theta"):
        result = CHECKS[check](inst)
        assert result.status is not Status.FAIL, (check, result.summary, result.details)
    assert CHECKS["commutator"](inst).status is Status.PASS


def test_coordinates_to_lists(ex1):
    pairs = ex1.coordinates.to_lists()
    assert pairs == [([1, 0], [1, 0]), ([0, 1], [0, 1])]
    assert all(isinstance(v, int) for x, y in pairs for v in x + y)
    assert np.array_equal(ex1.algebra.unit, np.array([1, 1]))
