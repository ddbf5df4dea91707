"""Galois coordinates, the map θ with its companions, and the injectivity checkers.

A ``GaloisInstance`` computes its tables eagerly when built; every checker
afterwards only reads them, so checks can run concurrently.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from groupoidal.action import GroupoidAction, invariants_subalgebra, s_set
from groupoidal.algebra import (
    SeparabilityWitness,
    SubalgebraView,
    center,
    centralizer,
    double_centralizer_check,
    intersect_views,
    product_subalgebra,
    separability_element,
    subalgebra_closure,
    whole,
)
from groupoidal.constants import (
    DEFAULT_CHECK_WORKERS,
    DEFAULT_MAX_MORPHISMS,
    DEFAULT_MAX_SG_SUBSETS,
    MAX_WITNESS_ROWS,
    get_logger,
)
from groupoidal.errors import (
    EnumerationCapExceeded,
    GroupoidalError,
    NotDirectSumError,
    PreconditionError,
    UnknownSubgroupoidError,
    WellDefinednessError,
)
from groupoidal.groupoid import Subgroupoid, generated_subgroupoid, mask_of, members, wide_subgroupoids
from groupoidal.linalg import Subspace, direct_sum, solve
from groupoidal.models import CheckResult, Status
from groupoidal.skew import SkewGroupoidRing, build_skew, coset_decomposition_check

logger = get_logger("galois")

Handle = Union[Subgroupoid, int]


@dataclass(frozen=True, eq=False)
class GaloisCoordinates:
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]

    def to_lists(self) -> list[tuple[list[int], list[int]]]:
        return [([int(v) for v in x], [int(v) for v in y]) for x, y in self.pairs]


def verify_coordinates(act: GroupoidAction, cand: GaloisCoordinates) -> tuple[bool, dict[int, np.ndarray]]:
    """Evaluate Σ x_i β_g(y_i 1_{g^-1}) against δ_{g ∈ G_0}·1_g for every acting g."""
    a, g, p = act.algebra, act.groupoid, act.p
    residuals = {}
    for m in act.morphisms:
        total = a.zero()
        for x, y in cand.pairs:
            image = act.apply(m, a.multiply(y, act.source_one(m)))
            total = (total + a.multiply(x, image)) % p
        target = act.one(m) if g.is_identity(m) else a.zero()
        residuals[m] = (total - target) % p
    return all(not r.any() for r in residuals.values()), residuals


def find_coordinates(act: GroupoidAction) -> Optional[GaloisCoordinates]:
    """Solve for w = Σ x_i ⊗ y_i in R ⊗ R; every condition is linear in w."""
    a, g, p = act.algebra, act.groupoid, act.p
    d = a.dim
    rows, rhs = [], []
    for m in act.morphisms:
        columns = []
        for i in range(d):
            for j in range(d):
                image = act.apply(m, a.multiply(a.basis_vector(j), act.source_one(m)))
                columns.append(a.multiply(a.basis_vector(i), image))
        rows.append(np.array(columns, dtype=np.int64).T)
        rhs.append(act.one(m) % p if g.is_identity(m) else a.zero())

    solution = solve(np.vstack(rows), np.concatenate(rhs), p)
    if solution is None:
        logger.info("Система координат Галуа не существует")
        return None

    pairs = []
    for k in np.flatnonzero(solution.particular):
        i, j = divmod(int(k), d)
        pairs.append(((solution.particular[k] * a.basis_vector(i)) % p, a.basis_vector(j)))
    coords = GaloisCoordinates(tuple(pairs))

    ok, _ = verify_coordinates(act, coords)
    if not ok:
        raise GroupoidalError("coordinate system from the solver failed verification")
    logger.info(f"Найдена система координат Галуа из {len(pairs)} пар")
    return coords


@dataclass(frozen=True)
class _Tables:
    theta: SubalgebraView
    sigma: SubalgebraView
    gamma: SubalgebraView


@dataclass(frozen=True, eq=False)
class GaloisInstance:
    action: GroupoidAction
    coordinates: Optional[GaloisCoordinates]
    coordinates_source: Optional[str]  # "file", "search" or None
    center: SubalgebraView
    wide: tuple[Subgroupoid, ...]
    theta_table: dict[int, SubalgebraView]
    sigma_table: dict[int, SubalgebraView]
    gamma_table: dict[int, SubalgebraView]
    s_sets: dict[int, int]
    class_table: dict[int, tuple[int, ...]]
    max_sg_subsets: int = DEFAULT_MAX_SG_SUBSETS
    name: str = field(default="instance")
    # as read from the instance file, kept even when they fail verification
    supplied_coordinates: Optional[GaloisCoordinates] = None

    @classmethod
    def build(
        cls,
        action: GroupoidAction,
        coordinates: Optional[GaloisCoordinates] = None,
        max_morphisms: int = DEFAULT_MAX_MORPHISMS,
        max_sg_subsets: int = DEFAULT_MAX_SG_SUBSETS,
        workers: int = DEFAULT_CHECK_WORKERS,
        search_coordinates: bool = True,
        name: str = "instance",
    ) -> "GaloisInstance":
        a = action.algebra
        wide = tuple(wide_subgroupoids(action.groupoid, max_morphisms))
        c = center(a)
        r = whole(a)
        action.j_table  # filled once before the workers read it

        def tables(h: Subgroupoid) -> _Tables:
            theta = invariants_subalgebra(action.restrict(h))
            return _Tables(theta, product_subalgebra(a, theta, c), centralizer(a, theta, r))

        results: dict[int, _Tables] = {}
        with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
            futures = {executor.submit(tables, h): h for h in wide}
            for future in as_completed(futures):
                h = futures[future]
                try:
                    results[h.mask] = future.result()
                except Exception as e:
                    logger.warning(f"Не удалось вычислить инварианты для {h.label}: {e}")
                    raise

        s_sets = {h.mask: s_set(action, h) for h in wide}
        class_table = {
            h.mask: tuple(l.mask for l in wide if s_sets[l.mask] == s_sets[h.mask]) for h in wide
        }

        supplied = coordinates
        source = None
        if coordinates is not None:
            ok, _ = verify_coordinates(action, coordinates)
            if ok:
                source = "file"
            else:
                logger.warning("Заданная система координат Галуа не проходит проверку")
                coordinates = None
        if coordinates is None and search_coordinates:
            coordinates = find_coordinates(action)
            source = "search" if coordinates is not None else None

        logger.info(f"Экземпляр {name}: {len(wide)} широких подгруппоидов, "
                    f"{'β-Галуа' if coordinates is not None else 'не β-Галуа'}")
        return cls(
            action=action,
            coordinates=coordinates,
            coordinates_source=source,
            center=c,
            wide=wide,
            theta_table={m: t.theta for m, t in results.items()},
            sigma_table={m: t.sigma for m, t in results.items()},
            gamma_table={m: t.gamma for m, t in results.items()},
            s_sets=s_sets,
            class_table=class_table,
            max_sg_subsets=max_sg_subsets,
            name=name,
            supplied_coordinates=supplied,
        )

    @property
    def groupoid(self):
        return self.action.groupoid

    @property
    def algebra(self):
        return self.action.algebra

    @property
    def p(self) -> int:
        return self.action.p

    @property
    def full_mask(self) -> int:
        return self.groupoid.full_mask

    @property
    def is_galois(self) -> bool:
        return self.coordinates is not None

    def mask(self, h: Handle) -> int:
        m = h.mask if isinstance(h, Subgroupoid) else h
        if m not in self.theta_table:
            raise UnknownSubgroupoidError(f"{self.groupoid.label(m)} is not a wide subgroupoid")
        return m

    def label(self, h: Handle) -> str:
        return self.groupoid.label(self.mask(h))

    @property
    def invariants(self) -> SubalgebraView:
        """R^β = θ(G)."""
        return self.theta_table[self.full_mask]

    @cached_property
    def center_invariants(self) -> SubalgebraView:
        """C(R)^β = C(R) ∩ R^β."""
        return intersect_views(self.center, self.invariants)

    @cached_property
    def fixed_ring_witness(self) -> Optional[SeparabilityWitness]:
        """Separability of R^β over C(R)^β."""
        return separability_element(self.algebra, self.invariants, self.center_invariants)

    @property
    def bar_hypothesis(self) -> bool:
        """β-Galois and R^β separable over C(R)^β."""
        return self.is_galois and self.fixed_ring_witness is not None

    @cached_property
    def skew(self) -> SkewGroupoidRing:
        return build_skew(self.action)

    @property
    def classes(self) -> list[tuple[int, ...]]:
        """Distinct classes H̄ in wide-list order."""
        seen, out = set(), []
        for h in self.wide:
            cls = self.class_table[h.mask]
            if cls not in seen:
                seen.add(cls)
                out.append(cls)
        return out


def theta(inst: GaloisInstance, h: Handle) -> SubalgebraView:
    """θ(H) = R^{β_H}."""
    return inst.theta_table[inst.mask(h)]


def sigma(inst: GaloisInstance, h: Handle) -> SubalgebraView:
    """σ(H) = θ(H)·C(R)."""
    return inst.sigma_table[inst.mask(h)]


def gamma(inst: GaloisInstance, h: Handle) -> SubalgebraView:
    """γ(H) = V_R(θ(H))."""
    return inst.gamma_table[inst.mask(h)]


def _class_value(
    inst: GaloisInstance,
    cls: Sequence[Handle],
    fn: Callable[[GaloisInstance, Handle], SubalgebraView],
    map_name: str,
) -> SubalgebraView:
    values = [fn(inst, h) for h in cls]
    if any(v != values[0] for v in values[1:]):
        raise WellDefinednessError(map_name, [inst.label(h) for h in cls], [v.dim for v in values])
    return values[0]


def sigma_bar(inst: GaloisInstance, cls: Sequence[Handle]) -> SubalgebraView:
    return _class_value(inst, cls, sigma, "sigma_bar")


def gamma_bar(inst: GaloisInstance, cls: Sequence[Handle]) -> SubalgebraView:
    return _class_value(inst, cls, gamma, "gamma_bar")


def phi(inst: GaloisInstance, s: Union[int, Iterable[int]]) -> Subspace:
    """φ(S) = ⊕_{g ∈ S} J_g for S ⊆ S_G."""
    mask = s if isinstance(s, int) else mask_of(s)
    a = inst.algebra
    j = inst.action.j_table
    zero = [inst.groupoid.names[m] for m in members(mask) if j[m].is_zero]
    if zero:
        raise PreconditionError(f"J_g = 0 for {', '.join(zero)}")
    total, direct = direct_sum([j[m].space for m in members(mask)], a.dim, a.p)
    if not direct:
        raise NotDirectSumError(f"Σ J_g over {inst.groupoid.label(mask)} is not direct")
    return total


def _not_applicable(name: str, reason: str) -> CheckResult:
    return CheckResult(name, Status.NOT_APPLICABLE, reason)


def _basis(view: Union[SubalgebraView, Subspace]) -> list[list[int]]:
    return [[int(v) for v in row] for row in view.basis[:MAX_WITNESS_ROWS]]


def check_centralizer_decomposition(inst: GaloisInstance) -> CheckResult:
    """V_R(θ(H)) = ⊕_{h ∈ H} J_h for every wide H, directly."""
    name = "lemma-3-1"
    if not inst.is_galois:
        return _not_applicable(name, "нет системы координат Галуа")

    a = inst.algebra
    j = inst.action.j_table
    rows, failures = [], []
    for h in inst.wide:
        lhs = centralizer(a, theta(inst, h), whole(a)).space
        rhs, direct = direct_sum([j[m].space for m in h.morphisms], a.dim, a.p)
        ok = direct and lhs == rhs
        rows.append({"subgroupoid": h.label, "centralizer_dim": lhs.dim, "sum_dim": rhs.dim, "direct": direct})
        if not ok:
            failures.append({"subgroupoid": h.label, "centralizer": _basis(lhs), "sum": _basis(rhs)})

    if failures:
        logger.warning(f"Разложение централизатора нарушено для {len(failures)} подгруппоидов")
        return CheckResult(name, Status.FAIL, f"нарушено для {len(failures)} подгруппоидов",
                           {"rows": rows, "failures": failures})
    full = rows[-1]
    return CheckResult(name, Status.PASS,
                       f"V_R(R^β) = ⊕ J_g, dim {full['sum_dim']}", {"rows": rows})


def check_phi_injective(inst: GaloisInstance) -> CheckResult:
    """Distinct subsets of S_G have distinct φ images."""
    name = "phi"
    if not inst.is_galois:
        return _not_applicable(name, "нет системы координат Галуа")

    s_g = members(inst.s_sets[inst.full_mask])
    total = 1 << len(s_g)
    if total > inst.max_sg_subsets:
        raise EnumerationCapExceeded("subsets of S_G", total, inst.max_sg_subsets, "--max-sg-subsets")

    names = inst.groupoid.names
    seen: dict[Subspace, int] = {}
    collisions = []
    for bits in range(total):
        subset = mask_of(s_g[i] for i in range(len(s_g)) if bits >> i & 1)
        try:
            image = phi(inst, subset)
        except NotDirectSumError as e:
            return CheckResult(name, Status.FAIL, str(e), {"subset": inst.groupoid.label(subset)})
        if image in seen:
            collisions.append([inst.groupoid.label(seen[image]), inst.groupoid.label(subset)])
        else:
            seen[image] = subset

    details = {"s_g": [names[m] for m in s_g], "subsets": total, "distinct": len(seen)}
    if collisions:
        details["collisions"] = collisions[:MAX_WITNESS_ROWS]
        return CheckResult(name, Status.FAIL, f"{len(collisions)} совпадений образов φ", details)
    return CheckResult(name, Status.PASS, f"{total} подмножеств S_G, образы различны", details)


def _injective(values: Sequence[SubalgebraView]) -> bool:
    return len(set(values)) == len(values)


def _collisions(inst: GaloisInstance, table: dict[int, SubalgebraView]) -> list[list[str]]:
    out = []
    for h, l in combinations(inst.wide, 2):
        if table[h.mask] == table[l.mask]:
            out.append([h.label, l.label])
    return out


def check_sigma_gamma_bar_injective(inst: GaloisInstance) -> CheckResult:
    """σ̄ and γ̄ are well defined on classes, injective, and land in separable subalgebras."""
    name = "sigma-gamma-bar"
    if not inst.bar_hypothesis:
        return _not_applicable(name, "гипотеза не выполнена: нужна β-Галуа и сепарабельность R^β над C(R)^β")

    a = inst.algebra
    sigma_values, gamma_values, rows = [], [], []
    for cls in inst.classes:
        labels = [inst.label(h) for h in cls]
        try:
            s, g = sigma_bar(inst, cls), gamma_bar(inst, cls)
        except WellDefinednessError as e:
            logger.warning(f"Отображение не определено корректно: {e}")
            return CheckResult(name, Status.FAIL, str(e),
                               {"map": e.map_name, "members": e.members, "dims": e.dims})
        sigma_values.append(s)
        gamma_values.append(g)
        rows.append({
            "class": labels,
            "sigma_dim": s.dim,
            "gamma_dim": g.dim,
            "sigma_separable": separability_element(a, s, inst.center) is not None,
            "gamma_separable": separability_element(a, g, inst.center) is not None,
        })

    details = {
        "classes": rows,
        "sigma_bar_injective": _injective(sigma_values),
        "gamma_bar_injective": _injective(gamma_values),
    }
    in_b = all(r["sigma_separable"] and r["gamma_separable"] for r in rows)
    details["images_separable"] = in_b
    if details["sigma_bar_injective"] and details["gamma_bar_injective"] and in_b:
        return CheckResult(name, Status.PASS, f"{len(rows)} классов, σ̄ и γ̄ инъективны", details)
    return CheckResult(name, Status.FAIL, "σ̄/γ̄ не инъективны или образ не сепарабелен", details)


def check_sigma_gamma_equivalence(inst: GaloisInstance) -> CheckResult:
    """σ is injective exactly when γ is."""
    name = "equiv"
    if not inst.bar_hypothesis:
        return _not_applicable(name, "гипотеза не выполнена: нужна β-Галуа и сепарабельность R^β над C(R)^β")

    sigma_inj = _injective([inst.sigma_table[h.mask] for h in inst.wide])
    gamma_inj = _injective([inst.gamma_table[h.mask] for h in inst.wide])
    details = {
        "sigma_injective": sigma_inj,
        "gamma_injective": gamma_inj,
        "sigma_collisions": _collisions(inst, inst.sigma_table)[:MAX_WITNESS_ROWS],
        "gamma_collisions": _collisions(inst, inst.gamma_table)[:MAX_WITNESS_ROWS],
    }
    status = Status.PASS if sigma_inj == gamma_inj else Status.FAIL
    return CheckResult(name, status, f"σ инъективно: {sigma_inj}, γ инъективно: {gamma_inj}", details)


def _criterion(gate: bool, hypothesis: bool, injective: bool) -> str:
    if not gate or not hypothesis:
        return Status.NOT_APPLICABLE.value
    return Status.PASS.value if injective else Status.FAIL.value


def theta_hypotheses(inst: GaloisInstance) -> dict[str, bool]:
    """The four sufficient conditions for θ to be injective."""
    g = inst.groupoid
    generated = all(
        generated_subgroupoid(g, g.identity_mask | inst.s_sets[h.mask]).mask == h.mask for h in inst.wide
    )
    return {
        "lem8_consistent": _injective([inst.sigma_table[h.mask] for h in inst.wide])
        or _injective([inst.gamma_table[h.mask] for h in inst.wide]),
        "teo3_applies": all(len(c) == 1 for c in inst.classes),
        "teo4_applies": generated,
        "cor1_applies": inst.s_sets[inst.full_mask] == inst.full_mask,
    }


def check_theta_injectivity(inst: GaloisInstance) -> CheckResult:
    """Every sufficient condition that holds must come with an injective θ."""
    name = "theta"
    injective = _injective([inst.theta_table[h.mask] for h in inst.wide])
    hypotheses = theta_hypotheses(inst)
    gates = {
        "lem8_consistent": inst.bar_hypothesis,
        "teo3_applies": inst.bar_hypothesis,
        # these two hold for any β-Galois extension, separable or not
        "teo4_applies": inst.is_galois,
        "cor1_applies": inst.is_galois,
    }
    criteria = {k: _criterion(gates[k], hypotheses[k], injective) for k in hypotheses}
    details = {
        "theta_injective": injective,
        **criteria,
        "hypotheses": hypotheses,
        "collisions": _collisions(inst, inst.theta_table)[:MAX_WITNESS_ROWS],
    }

    if Status.FAIL.value in criteria.values():
        broken = [k for k, v in criteria.items() if v == Status.FAIL.value]
        logger.warning(f"Достаточное условие выполнено, но θ не инъективно: {broken}")
        return CheckResult(name, Status.FAIL, f"контрпример: {', '.join(broken)}", details)
    if not inst.is_galois:
        return CheckResult(name, Status.NOT_APPLICABLE, "нет системы координат Галуа", details)
    return CheckResult(name, Status.PASS, f"θ инъективно: {injective}", details)


def check_separability_chain(inst: GaloisInstance) -> CheckResult:
    """Separability transfer from R^β to R⋆G, to every θ(H), and the Azumaya step."""
    name = "separability"
    if not inst.bar_hypothesis:
        return _not_applicable(name, "пропущено: R^β не сепарабельно над C(R)^β или нет β-Галуа")

    a = inst.algebra
    base = inst.center_invariants
    skew = inst.skew
    skew_base = skew.embed_subspace(base.space)
    steps = {
        "skew_over_fixed_center": separability_element(skew.algebra, skew.whole(), skew_base) is not None,
        "algebra_over_center": separability_element(a, whole(a), inst.center) is not None,
    }
    skew_bad, theta_bad, sigma_bad, centralizer_bad = [], [], [], []
    for h in inst.wide:
        s = sigma(inst, h)
        if separability_element(skew.algebra, skew.sub_ring(h), skew_base) is None:
            skew_bad.append(h.label)
        if separability_element(a, theta(inst, h), base) is None:
            theta_bad.append(h.label)
        if separability_element(a, s, inst.center) is None:
            sigma_bad.append(h.label)
        if not double_centralizer_check(a, s):
            centralizer_bad.append(h.label)
    steps["skew_subrings_over_fixed_center"] = not skew_bad
    steps["theta_over_fixed_center"] = not theta_bad
    steps["sigma_over_center"] = not sigma_bad
    steps["double_centralizer"] = not centralizer_bad

    failures = {
        "skew_subrings_over_fixed_center": skew_bad[:MAX_WITNESS_ROWS],
        "theta_over_fixed_center": theta_bad[:MAX_WITNESS_ROWS],
        "sigma_over_center": sigma_bad[:MAX_WITNESS_ROWS],
        "double_centralizer": centralizer_bad[:MAX_WITNESS_ROWS],
    }
    details = {"steps": steps, "failures": {k: v for k, v in failures.items() if v}}
    if all(steps.values()):
        return CheckResult(name, Status.PASS, f"все {len(steps)} шагов выполнены", details)
    broken = [k for k, v in steps.items() if not v]
    return CheckResult(name, Status.FAIL, f"нарушены шаги: {', '.join(broken)}", details)


def _seed_subalgebras(inst: GaloisInstance) -> list[SubalgebraView]:
    a = inst.algebra
    views = []
    for h in inst.wide:
        views.extend([theta(inst, h), sigma(inst, h), gamma(inst, h)])
    views.extend(subalgebra_closure(a, [a.basis_vector(i)]) for i in range(a.dim))
    return views


def check_commutator_properties(inst: GaloisInstance, extra: Sequence[SubalgebraView] = ()) -> CheckResult:
    """V_R(S) = V_R(S·C(R)); equal centralizers stay equal after ·C(R); S ⊆ C(R) forces V_R(S) = R."""
    name = "commutator"
    a = inst.algebra
    r = whole(a)
    subalgebras = list(dict.fromkeys(_seed_subalgebras(inst) + list(extra)))

    failures = []
    centralizers = []
    for s in subalgebras:
        v = centralizer(a, s, r)
        vc = centralizer(a, product_subalgebra(a, s, inst.center), r)
        centralizers.append((v, vc))
        if v != vc:
            failures.append({"property": "absorbs-center", "subalgebra": _basis(s)})
        if s.issubset(inst.center) and v != r:
            failures.append({"property": "central-subring", "subalgebra": _basis(s)})

    for (v1, vc1), (v2, vc2) in combinations(centralizers, 2):
        if v1 == v2 and vc1 != vc2:
            failures.append({"property": "equal-centralizers", "dims": [v1.dim, v2.dim]})

    details = {"subalgebras": len(subalgebras), "failures": failures[:MAX_WITNESS_ROWS]}
    if failures:
        return CheckResult(name, Status.FAIL, f"{len(failures)} нарушений", details)
    return CheckResult(name, Status.PASS, f"проверено {len(subalgebras)} подалгебр", details)


def check_coset_decompositions(inst: GaloisInstance) -> CheckResult:
    """R⋆G splits along left and right cosets of every wide subgroupoid."""
    name = "cosets"
    skew = inst.skew
    checks = [coset_decomposition_check(skew, h) for h in inst.wide]
    details = {"skew_dim": skew.dim, "subgroupoids": [c.to_dict() for c in checks]}
    bad = [c.subgroupoid for c in checks if not c.ok]
    if bad:
        return CheckResult(name, Status.FAIL, f"разложение нарушено для {', '.join(bad)}", details)
    return CheckResult(name, Status.PASS, f"dim R⋆G = {skew.dim}, {len(checks)} разложений", details)


# Ordered as reported by ``check all``.
CHECKS: dict[str, Callable[[GaloisInstance], CheckResult]] = {
    "lemma-3-1": check_centralizer_decomposition,
    "phi": check_phi_injective,
    "sigma-gamma-bar": check_sigma_gamma_bar_injective,
    "equiv": check_sigma_gamma_equivalence,
    "theta": check_theta_injectivity,
    "separability": check_separability_chain,
    "commutator": check_commutator_properties,
    "cosets": check_coset_decompositions,
}
