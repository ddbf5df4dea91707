import numpy as np
import pytest
from hypothesis import given, settings

from groupoidal.action import (
    GroupoidAction,
    h_bar_class,
    invariants_subalgebra,
    j_module,
    s_set,
    t_set,
    validate_action,
)
from groupoidal.errors import NotWideError
from groupoidal.formats.instance import fixture_path, load_expectation, validate_instance_file
from groupoidal.generators import diagonal_transport, ex1, ex2, ex3, trivial_group_action
from groupoidal.groupoid import Subgroupoid, mask_of, members
from groupoidal.linalg import Subspace
from tests.oracles import brute_invariants, brute_j_module
from tests.strategies import actions

ACTION_MUTANTS = [
    "mut_idempotent_sum",
    "mut_beta_identity",
    "mut_beta_image",
    "mut_beta_singular",
    "mut_beta_multiplicative",
    "mut_noncentral_idempotent",
    "mut_beta_composition",
]


class TestValidation:
    @pytest.mark.parametrize("build", [ex1, ex2, ex3, trivial_group_action])
    def test_generated_fixtures_are_valid(self, build):
        assert validate_action(build(5)).ok

    @pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "nongalois"])
    def test_bundled_fixtures_are_valid(self, name):
        parts = validate_instance_file(fixture_path(name))
        assert parts.ok, [str(v) for rep in parts.reports for v in rep.violations]

    @pytest.mark.parametrize("name", ACTION_MUTANTS)
    def test_mutants_report_their_axiom(self, name):
        expected = load_expectation(name)["invalid"]
        parts = validate_instance_file(fixture_path(name))
        assert [rep.subject for rep in parts.reports] == ["groupoid", "algebra", "action"]
        assert parts.reports[0].ok and parts.reports[1].ok
        action_report = parts.reports[2]
        assert expected["subject"] == "action"
        assert expected["axiom"] in action_report.axioms

    def test_singular_conjugation_is_not_bijective(self):
        # u = diag(1, 0): x -> u x u keeps only the e11 entry
        report = validate_action(GroupoidAction(*_with_beta(ex2(5), 1, np.diag([1, 0, 0, 0]))))
        assert "beta-bijective" in report.axioms


def _with_beta(act, m, matrix):
    beta = list(act.beta)
    beta[m] = matrix
    return act.groupoid, act.algebra, act.idempotents, tuple(beta)


class TestInvariants:
    def test_ex1(self):
        act = ex1(5)
        assert invariants_subalgebra(act).space == Subspace.span([[1, 1]], 2, 5)

    def test_ex2_is_diagonal(self):
        act = ex2(5)
        assert invariants_subalgebra(act).space == Subspace.span([[1, 0, 0, 0], [0, 0, 0, 1]], 4, 5)

    def test_ex3_dimension(self):
        assert invariants_subalgebra(ex3(5)).dim == 3

    def test_restriction_to_objects_is_whole(self):
        act = ex3(5)
        g = act.groupoid
        restricted = act.restrict(Subgroupoid(g, g.identity_mask))
        assert invariants_subalgebra(restricted).dim == act.dim

    def test_restriction_needs_wide(self):
        act = ex1(5)
        with pytest.raises(NotWideError):
            act.restrict(Subgroupoid(act.groupoid, mask_of([0])))

    @settings(max_examples=50, deadline=None)
    @given(actions())
    def test_matches_enumeration(self, act):
        expected, count = brute_invariants(act)
        assert invariants_subalgebra(act).space == expected
        assert count == act.p ** expected.dim


class TestJModules:
    def test_ex1_moving_morphisms_vanish(self):
        act = ex1(5)
        assert j_module(act, "e<-f").is_zero
        assert j_module(act, "f<-e").is_zero
        assert j_module(act, "e").space == Subspace.span([[1, 0]], 2, 5)

    def test_ex2_conjugating_unit(self):
        act = ex2(5)
        assert j_module(act, "g").space == Subspace.span([[1, 0, 0, 4]], 4, 5)

    def test_s_and_t_sets(self):
        act = ex1(5)
        g = act.groupoid
        assert members(s_set(act, g.full_mask)) == [0, 1]
        assert members(t_set(act, g.full_mask)) == [2, 3]

    def test_classes_of_ex3(self):
        act = ex3(5)
        g = act.groupoid
        cls = h_bar_class(act, Subgroupoid(g, g.identity_mask))
        assert [h.mask for h in cls] == [g.identity_mask, g.identity_mask | mask_of([2, 3])]

    @settings(max_examples=50, deadline=None)
    @given(actions())
    def test_matches_enumeration(self, act):
        for m in act.morphisms:
            expected, _ = brute_j_module(act, m)
            assert j_module(act, m).space == expected

    def test_diagonal_swap(self):
        act = diagonal_transport(1, [1, 0], 3)
        swap = act.groupoid.morphism_id("a1")
        assert j_module(act, swap).is_zero
