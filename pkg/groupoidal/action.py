"""Unital groupoid actions on a structure algebra.

The ideal E_e is carried by its central idempotent 1_e, so E_g = R·1_{r(g)}.
Each β_g is stored as a full ``dim R x dim R`` matrix that kills the
complement of E_{d(g)} and lands in E_{r(g)}.
"""

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from groupoidal.algebra import StructureAlgebra, SubalgebraView, direct_product
from groupoidal.constants import DEFAULT_MAX_MORPHISMS, get_logger
from groupoidal.errors import DimensionMismatchError, NotWideError
from groupoidal.groupoid import (
    Groupoid,
    Subgroupoid,
    disjoint_union,
    members,
    transport_groupoid,
    transport_triples,
    wide_subgroupoids,
)
from groupoidal.linalg import Subspace, identity, inverse, kernel_within, nullspace
from groupoidal.models import ValidationReport

logger = get_logger("action")

AXIOM_TABLES = "tables"
AXIOM_IDEMPOTENT_CENTRAL = "idempotent-central"
AXIOM_IDEMPOTENT = "idempotent"
AXIOM_ORTHOGONAL = "idempotent-orthogonal"
AXIOM_IDEMPOTENT_SUM = "idempotent-sum"
AXIOM_BETA_IDENTITY = "beta-identity"
AXIOM_BETA_COMPLEMENT = "beta-annihilates-complement"
AXIOM_BETA_IMAGE = "beta-image"
AXIOM_BETA_MULTIPLICATIVE = "beta-multiplicative"
AXIOM_BETA_UNITAL = "beta-unital"
AXIOM_BETA_BIJECTIVE = "beta-bijective"
AXIOM_BETA_COMPOSITION = "beta-composition"


@dataclass(frozen=True)
class JModule:
    morphism: int
    space: Subspace

    @property
    def is_zero(self) -> bool:
        return self.space.is_zero

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True, eq=False)
class GroupoidAction:
    groupoid: Groupoid
    algebra: StructureAlgebra
    idempotents: tuple[np.ndarray, ...]  # indexed by object
    beta: tuple[np.ndarray, ...]         # indexed by morphism
    support: Optional[int] = None        # mask of the acting morphisms; None means all

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def mask(self) -> int:
        return self.groupoid.full_mask if self.support is None else self.support

    @property
    def morphisms(self) -> list[int]:
        return members(self.mask)

    def one(self, g: int) -> np.ndarray:
        """1_g = 1_{r(g)}."""
        return self.idempotents[self.groupoid.ran[g]]

    def source_one(self, g: int) -> np.ndarray:
        """1_{g^-1} = 1_{d(g)}."""
        return self.idempotents[self.groupoid.dom[g]]

    @cached_property
    def ideals(self) -> tuple[Subspace, ...]:
        a = self.algebra
        return tuple(Subspace.full(a.dim, a.p).image(a.right_matrix(e)) for e in self.idempotents)

    def ideal(self, obj: Union[int, str]) -> Subspace:
        """E_e = R·1_e."""
        return self.ideals[self.groupoid.object_id(obj)]

    def apply(self, g: int, x) -> np.ndarray:
        return (self.beta[g] @ self.algebra.vector(x)) % self.p

    def restrict(self, h: Subgroupoid) -> "GroupoidAction":
        """β_H: the same algebra and idempotents, acting only through H."""
        if not h.is_wide:
            raise NotWideError(f"restriction to a non-wide subgroupoid {h.label}")
        if h.mask == self.groupoid.full_mask:
            return self
        return replace(self, support=h.mask)

    @cached_property
    def j_table(self) -> tuple[JModule, ...]:
        return tuple(_j_module(self, g) for g in range(self.groupoid.size))

    def label(self, g: int) -> str:
        return self.groupoid.names[g]


def validate_action(act: GroupoidAction) -> ValidationReport:
    """Check the action axioms over basis elements and composable pairs."""
    report = ValidationReport("action")
    g, a, p = act.groupoid, act.algebra, act.p
    d = a.dim

    if len(act.idempotents) != len(g.objects) or len(act.beta) != g.size:
        report.add(AXIOM_TABLES, f"{len(act.idempotents)} idempotents and {len(act.beta)} maps "
                                 f"for {len(g.objects)} objects and {g.size} morphisms")
        return report
    if any(e.shape != (d,) for e in act.idempotents) or any(b.shape != (d, d) for b in act.beta):
        report.add(AXIOM_TABLES, f"idempotents or maps do not match dim R = {d}")
        return report

    total = a.zero()
    for i, e in enumerate(act.idempotents):
        obj = g.objects[i]
        if a.commutator_matrix(e).any():
            report.add(AXIOM_IDEMPOTENT_CENTRAL, f"1_{obj} = {a.format(e)} is not central")
        if not np.array_equal(a.multiply(e, e), e % p):
            report.add(AXIOM_IDEMPOTENT, f"1_{obj}·1_{obj} != 1_{obj}")
        for j in range(i + 1, len(act.idempotents)):
            if a.multiply(e, act.idempotents[j]).any():
                report.add(AXIOM_ORTHOGONAL, f"1_{obj}·1_{g.objects[j]} != 0")
        total = (total + e) % p
    if not np.array_equal(total, a.unit % p):
        report.add(AXIOM_IDEMPOTENT_SUM, f"sum of idempotents is {a.format(total)}, not 1")

    eye = identity(d)
    proj = [a.right_matrix(e) for e in act.idempotents]

    for m in range(g.size):
        name = g.names[m]
        b = act.beta[m] % p
        src, tgt = g.dom[m], g.ran[m]

        if g.is_identity(m) and not np.array_equal(b, proj[src]):
            report.add(AXIOM_BETA_IDENTITY, f"β_{name} is not the identity of E_{g.objects[src]}")
        if ((b @ (eye - proj[src])) % p).any():
            report.add(AXIOM_BETA_COMPLEMENT, f"β_{name} does not vanish off E_{g.objects[src]}")
        if not np.array_equal((proj[tgt] @ b) % p, b):
            report.add(AXIOM_BETA_IMAGE, f"β_{name} leaves E_{g.objects[tgt]}")
        if not np.array_equal((b @ act.idempotents[src]) % p, act.idempotents[tgt] % p):
            report.add(AXIOM_BETA_UNITAL, f"β_{name}(1_{g.objects[src]}) != 1_{g.objects[tgt]}")

        # columns of proj[src] span E_src; compare β(xy) with β(x)β(y) on them
        x = proj[src]
        y = (b @ x) % p
        inner = np.einsum("ai,abk->ibk", x, a.mul) % p
        products = np.einsum("bj,ibk->ijk", x, inner) % p
        outer = np.einsum("ai,abk->ibk", y, a.mul) % p
        image_products = np.einsum("bj,ibk->ijk", y, outer) % p
        lhs = np.einsum("lk,ijk->ijl", b, products) % p
        bad = np.argwhere((lhs != image_products).any(axis=2))
        if bad.size:
            i, j = (int(t) for t in bad[0])
            report.add(AXIOM_BETA_MULTIPLICATIVE,
                       f"β_{name}(xy) != β_{name}(x)β_{name}(y) for x = {a.basis_names[i]}·1, y = {a.basis_names[j]}·1")

        domain, codomain = act.ideals[src], act.ideals[tgt]
        image = domain.image(b)
        if image.dim != domain.dim or domain.dim != codomain.dim:
            report.add(AXIOM_BETA_BIJECTIVE,
                       f"β_{name}: E_{g.objects[src]} (dim {domain.dim}) -> E_{g.objects[tgt]} "
                       f"(dim {codomain.dim}) has rank {image.dim}")

    for (m, n), mn in sorted(g.comp.items()):
        lhs = (act.beta[m] @ act.beta[n] - act.beta[mn]) % p
        if ((lhs @ proj[g.dom[n]]) % p).any():
            report.add(AXIOM_BETA_COMPOSITION, f"β_{g.names[m]}∘β_{g.names[n]} != β_{g.names[mn]}")

    if report.ok:
        logger.debug(f"Действие валидно: dim R = {d}, {g.size} морфизмов")
    else:
        logger.info(f"Действие нарушает {len(report.violations)} аксиом")
    return report


def invariants_subalgebra(act: GroupoidAction) -> SubalgebraView:
    """R^β: solutions of β_g(r·1_{g^-1}) = r·1_g for every acting g."""
    a, p = act.algebra, act.p
    constraints = [
        (act.beta[m] @ a.right_matrix(act.source_one(m)) - a.right_matrix(act.one(m))) % p
        for m in act.morphisms
    ]
    if not constraints:
        return SubalgebraView(a, Subspace.full(a.dim, p), True)
    return SubalgebraView(a, nullspace(np.vstack(constraints), p, a.dim), True)


def _j_module(act: GroupoidAction, g: int) -> JModule:
    a, p = act.algebra, act.p
    constraints = []
    for i in range(a.dim):
        x = a.basis_vector(i)
        y = act.apply(g, a.multiply(x, act.source_one(g)))
        constraints.append((a.right_matrix(y) - a.left_matrix(x)) % p)
    space = kernel_within(np.vstack(constraints), act.ideals[act.groupoid.ran[g]])
    return JModule(g, space)


def j_module(act: GroupoidAction, g: Union[int, str]) -> JModule:
    """J_g = {r in E_g : r·β_g(x·1_{g^-1}) = x·r for all x in R}."""
    if isinstance(g, str):
        g = act.groupoid.morphism_id(g)
    return act.j_table[g]


def _mask(h: Union[Subgroupoid, int]) -> int:
    return h.mask if isinstance(h, Subgroupoid) else h


def s_set(act: GroupoidAction, h: Union[Subgroupoid, int]) -> int:
    """S_H as a mask: members of H with J_g != 0."""
    return sum(1 << m for m in members(_mask(h)) if not act.j_table[m].is_zero)


def t_set(act: GroupoidAction, h: Union[Subgroupoid, int]) -> int:
    """T_H as a mask: members of H with J_g = 0."""
    return _mask(h) & ~s_set(act, h)


def h_bar_class(
    act: GroupoidAction,
    h: Subgroupoid,
    wide: Optional[Sequence[Subgroupoid]] = None,
    max_morphisms: int = DEFAULT_MAX_MORPHISMS,
) -> list[Subgroupoid]:
    """Wide subgroupoids L with S_L = S_H."""
    if not h.is_wide:
        raise NotWideError(f"class of a non-wide subgroupoid {h.label}")
    if wide is None:
        wide = wide_subgroupoids(act.groupoid, max_morphisms)
    target = s_set(act, h)
    return [l for l in wide if s_set(act, l) == target]


def permutation_automorphism(perm: Sequence[int], p: int) -> np.ndarray:
    """Automorphism of F_p^k sending the i-th idempotent to the ``perm[i]``-th."""
    k = len(perm)
    m = np.zeros((k, k), dtype=np.int64)
    for i, j in enumerate(perm):
        m[j, i] = 1
    return m


def conjugation_automorphism(u, p: int) -> np.ndarray:
    """x -> u x u^-1 on M_n(F_p) in the row-major matrix-unit basis."""
    u = np.asarray(u, dtype=np.int64) % p
    n = u.shape[0]
    u_inv = inverse(u, p)
    columns = []
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=np.int64)
            unit[i, j] = 1
            columns.append(((u @ unit @ u_inv) % p).reshape(-1))
    return np.array(columns, dtype=np.int64).T


def transport_action(
    objects: Sequence[str],
    group_table: Sequence[Sequence[int]],
    algebra: StructureAlgebra,
    automorphisms: Sequence[np.ndarray],
    element_names: Optional[Sequence[str]] = None,
) -> GroupoidAction:
    """One copy of ``algebra`` per object; the morphism (i, j, a) maps copy j to copy i by α_a.

    ``automorphisms[a]`` must realise the group element ``a`` with
    ``α_a α_b = α_{ab}``; bad input shows up in ``validate_action``.
    """
    if len(automorphisms) != len(group_table):
        raise DimensionMismatchError(f"{len(automorphisms)} automorphisms for a group of order {len(group_table)}")
    groupoid = transport_groupoid(objects, group_table, element_names)
    k, da, p = len(objects), algebra.dim, algebra.p

    r = algebra
    for _ in range(k - 1):
        r = direct_product(r, algebra)
    if k > 1:
        names = tuple(f"{name}_{obj}" for obj in objects for name in algebra.basis_names)
        r = StructureAlgebra(p, r.mul, r.unit, names)

    idempotents = []
    for i in range(k):
        e = np.zeros(k * da, dtype=np.int64)
        e[i * da:(i + 1) * da] = algebra.unit
        idempotents.append(e % p)

    beta = []
    for i, j, a in transport_triples(k, len(group_table)):
        b = np.zeros((k * da, k * da), dtype=np.int64)
        b[i * da:(i + 1) * da, j * da:(j + 1) * da] = np.asarray(automorphisms[a]) % p
        beta.append(b)

    return GroupoidAction(groupoid, r, tuple(idempotents), tuple(beta))


def trivial_action(algebra: StructureAlgebra, obj: str = "e") -> GroupoidAction:
    """The one-object identity-only groupoid acting trivially."""
    return transport_action([obj], [[0]], algebra, [identity(algebra.dim)])


def disjoint_union_action(first: GroupoidAction, second: GroupoidAction) -> GroupoidAction:
    """Action of the disjoint union of groupoids on the product algebra."""
    groupoid = disjoint_union(first.groupoid, second.groupoid)
    algebra = direct_product(first.algebra, second.algebra)
    d1, d = first.dim, algebra.dim

    idempotents = [np.concatenate([e, np.zeros(d - d1, dtype=np.int64)]) for e in first.idempotents]
    idempotents += [np.concatenate([np.zeros(d1, dtype=np.int64), e]) for e in second.idempotents]

    beta = []
    for b in first.beta:
        block = np.zeros((d, d), dtype=np.int64)
        block[:d1, :d1] = b
        beta.append(block)
    for b in second.beta:
        block = np.zeros((d, d), dtype=np.int64)
        block[d1:, d1:] = b
        beta.append(block)

    return GroupoidAction(groupoid, algebra, tuple(idempotents), tuple(beta))
