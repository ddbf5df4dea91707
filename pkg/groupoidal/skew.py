"""The skew groupoid ring R ⋆ G as a structure algebra.

Basis vectors are pairs (g, v) with v running over the canonical basis of
E_g = E_{r(g)}; the block of g is a contiguous index range.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from groupoidal.action import GroupoidAction
from groupoidal.algebra import StructureAlgebra, SubalgebraView, validate_algebra
from groupoidal.constants import get_logger
from groupoidal.errors import AssociativityError, NotWideError
from groupoidal.groupoid import Subgroupoid, coset_decomposition
from groupoidal.linalg import Subspace, direct_sum, zeros

logger = get_logger("skew")


@dataclass(frozen=True, eq=False)
class SkewGroupoidRing:
    action: GroupoidAction
    algebra: StructureAlgebra
    offsets: dict[int, int]  # morphism -> first basis index of its block

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def p(self) -> int:
        return self.algebra.p

    def local_basis(self, g: int) -> np.ndarray:
        return self.action.ideals[self.action.groupoid.ran[g]].basis

    def block_range(self, g: int) -> range:
        start = self.offsets[g]
        return range(start, start + self.local_basis(g).shape[0])

    def block(self, g: int) -> Subspace:
        """E_g·u_g as a subspace of the skew ring."""
        rows = [self.algebra.basis_vector(i) for i in self.block_range(g)]
        return Subspace.span(rows or zeros(0, self.dim), self.dim, self.p)

    def element(self, g: int, x) -> np.ndarray:
        """Coordinates of (x·1_g)·u_g."""
        a = self.action.algebra
        local = self.action.ideals[self.action.groupoid.ran[g]]
        x = a.multiply(x, self.action.one(g))
        v = np.zeros(self.dim, dtype=np.int64)
        v[list(self.block_range(g))] = local.coordinates(x)
        return v

    def embed(self, r) -> np.ndarray:
        """r -> Σ_e r·1_e·u_e."""
        g = self.action.groupoid
        v = np.zeros(self.dim, dtype=np.int64)
        for e in g.identities:
            v = (v + self.element(e, r)) % self.p
        return v

    def embed_subspace(self, space: Subspace) -> SubalgebraView:
        images = [self.embed(r) for r in space.basis]
        return SubalgebraView.of(self.algebra, Subspace.span(images or zeros(0, self.dim), self.dim, self.p))

    def sub_ring(self, h: Subgroupoid) -> SubalgebraView:
        """R ⋆ H inside R ⋆ G for a wide H."""
        if not h.is_wide:
            raise NotWideError(f"R⋆H needs a wide subgroupoid, got {h.label}")
        rows = [self.algebra.basis_vector(i) for m in h.morphisms for i in self.block_range(m)]
        return SubalgebraView.of(self.algebra, Subspace.span(rows or zeros(0, self.dim), self.dim, self.p))

    def whole(self) -> SubalgebraView:
        return SubalgebraView(self.algebra, Subspace.full(self.dim, self.p), True)


def build_skew(act: GroupoidAction) -> SkewGroupoidRing:
    """Structure constants of (x u_g)(y u_h) = x β_g(y 1_{g^-1}) u_{gh} for d(g) = r(h)."""
    g, a, p = act.groupoid, act.algebra, act.p
    morphisms = act.morphisms
    support = act.mask

    offsets, names = {}, []
    for m in morphisms:
        offsets[m] = len(names)
        for v in act.ideals[g.ran[m]].basis:
            names.append(f"({a.format(v)})u_{g.names[m]}")
    d = len(names)

    mul = np.zeros((d, d, d), dtype=np.int64)
    for m in morphisms:
        left = act.ideals[g.ran[m]].basis
        for n in morphisms:
            mn = g.compose(m, n)
            if mn is None or not support >> mn & 1:
                continue
            right = act.ideals[g.ran[n]].basis
            target = act.ideals[g.ran[mn]]
            for i, x in enumerate(left):
                for j, y in enumerate(right):
                    product = a.multiply(x, act.apply(m, a.multiply(y, act.source_one(m))))
                    start = offsets[mn]
                    mul[offsets[m] + i, offsets[n] + j, start:start + target.dim] = target.coordinates(product)

    unit = np.zeros(d, dtype=np.int64)
    for e_obj, e in enumerate(g.identities):
        if not support >> e & 1:
            continue
        local = act.ideals[e_obj]
        unit[offsets[e]:offsets[e] + local.dim] = local.coordinates(act.idempotents[e_obj])

    ring = StructureAlgebra(p, mul, unit % p, tuple(names))
    report = validate_algebra(ring)
    if not report.ok:
        raise AssociativityError(f"skew groupoid ring is not a unital associative algebra: "
                                 f"{'; '.join(str(v) for v in report.violations)}")
    logger.info(f"Кольцо R⋆G построено: размерность {d}")
    return SkewGroupoidRing(act, ring, offsets)


@dataclass
class CosetCheck:
    """Decomposition of R⋆G along the cosets of one wide subgroupoid."""

    subgroupoid: str
    right_reps: list[str]
    left_reps: list[str]
    right_dims: list[int]
    left_dims: list[int]
    right_direct: bool
    left_direct: bool
    right_total: bool
    left_total: bool

    @property
    def ok(self) -> bool:
        return self.right_direct and self.left_direct and self.right_total and self.left_total

    def to_dict(self) -> dict:
        return {
            "subgroupoid": self.subgroupoid,
            "right_reps": self.right_reps,
            "left_reps": self.left_reps,
            "right_dims": self.right_dims,
            "left_dims": self.left_dims,
            "right_direct": self.right_direct,
            "left_direct": self.left_direct,
            "right_total": self.right_total,
            "left_total": self.left_total,
        }


def _summands(skew: SkewGroupoidRing, sub: SubalgebraView, reps: Iterable[int], side: str) -> list[Subspace]:
    out = []
    for rep in reps:
        w = skew.element(rep, skew.action.one(rep))
        matrix = skew.algebra.right_matrix(w) if side == "right" else skew.algebra.left_matrix(w)
        out.append(sub.space.image(matrix))
    return out


def coset_decomposition_check(skew: SkewGroupoidRing, h: Subgroupoid) -> CosetCheck:
    """R⋆G = ⊕ (R⋆H)·u_{g'_i} = ⊕ u_{g_i}·(R⋆H) over the coset representatives.

    Representatives follow ``coset_decomposition``: the identity in a coset
    when it has one, otherwise its least morphism id.
    """
    g = skew.action.groupoid
    cosets = coset_decomposition(g, h)
    sub = skew.sub_ring(h)

    right = _summands(skew, sub, cosets.right_reps, "right")
    left = _summands(skew, sub, cosets.left_reps, "left")
    right_sum, right_direct = direct_sum(right, skew.dim, skew.p)
    left_sum, left_direct = direct_sum(left, skew.dim, skew.p)

    check = CosetCheck(
        subgroupoid=h.label,
        right_reps=[g.names[m] for m in cosets.right_reps],
        left_reps=[g.names[m] for m in cosets.left_reps],
        right_dims=[s.dim for s in right],
        left_dims=[s.dim for s in left],
        right_direct=right_direct,
        left_direct=left_direct,
        right_total=right_sum.dim == skew.dim,
        left_total=left_sum.dim == skew.dim,
    )
    if not check.ok:
        logger.warning(f"Разложение по смежным классам {h.label} не прямое или неполное")
    return check

