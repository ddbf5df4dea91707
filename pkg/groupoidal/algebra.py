"""Finite-dimensional associative unital F_p-algebras given by structure constants.

Elements are coordinate vectors in the algebra's basis. Subalgebras,
centralizers and modules are canonical subspaces of that coordinate space,
so two subalgebras of the same algebra are equal exactly when their
``Subspace`` values are.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from groupoidal.constants import get_logger
from groupoidal.errors import DimensionMismatchError, GroupoidalError, PreconditionError
from groupoidal.linalg import (
    Subspace,
    as_vector,
    identity,
    kernel_within,
    nullspace,
    solve,
    zeros,
)
from groupoidal.models import ValidationReport

logger = get_logger("algebra")

AXIOM_SHAPE = "structure-shape"
AXIOM_ASSOCIATIVITY = "associativity"
AXIOM_UNIT = "unit"


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    """``mul[i, j, k]`` is the coefficient of basis k in ``b_i · b_j``."""

    p: int
    mul: np.ndarray
    unit: np.ndarray
    basis_names: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.mul.shape[0]

    @cached_property
    def _left_flat(self) -> np.ndarray:
        # row i holds c_{i j k} flattened over (j, k)
        return self.mul.reshape(self.dim, self.dim * self.dim)

    @cached_property
    def _right_flat(self) -> np.ndarray:
        # row j holds c_{i j k} flattened over (i, k)
        return self.mul.transpose(1, 0, 2).reshape(self.dim, self.dim * self.dim)

    def vector(self, v) -> np.ndarray:
        return as_vector(v, self.p, self.dim)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def multiply(self, x, y) -> np.ndarray:
        """Bilinear product contracted against the structure constants."""
        x, y = self.vector(x), self.vector(y)
        t = ((x @ self._left_flat) % self.p).reshape(self.dim, self.dim)
        return (y @ t) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x·y``."""
        x = self.vector(x)
        return (((x @ self._left_flat) % self.p).reshape(self.dim, self.dim)).T.copy()

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of ``x -> x·y``."""
        y = self.vector(y)
        return (((y @ self._right_flat) % self.p).reshape(self.dim, self.dim)).T.copy()

    def commutator_matrix(self, s) -> np.ndarray:
        """Matrix of ``x -> x·s - s·x``."""
        return (self.right_matrix(s) - self.left_matrix(s)) % self.p

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.transpose(1, 0, 2)))

    def format(self, v) -> str:
        v = self.vector(v)
        terms = []
        for coeff, name in zip(v, self.basis_names):
            if coeff == 0:
                continue
            terms.append(name if coeff == 1 else f"{int(coeff)}{name}")
        return " + ".join(terms) if terms else "0"


def multiply(a: StructureAlgebra, x, y) -> np.ndarray:
    return a.multiply(x, y)


def validate_algebra(a: StructureAlgebra) -> ValidationReport:
    """Associativity on every basis triple and the two-sided unit."""
    report = ValidationReport("algebra")
    d, p = len(a.basis_names), a.p
    if a.mul.shape != (d, d, d) or a.unit.shape != (d,):
        report.add(AXIOM_SHAPE, f"structure constants {a.mul.shape} and unit {a.unit.shape} for {d} basis names")
        return report

    lhs = np.einsum("ijm,mkl->ijkl", a.mul, a.mul) % p
    rhs = np.einsum("jkm,iml->ijkl", a.mul, a.mul) % p
    bad = np.argwhere((lhs != rhs).any(axis=3))
    if bad.size:
        i, j, k = (int(t) for t in bad[0])
        names = a.basis_names
        report.add(
            AXIOM_ASSOCIATIVITY,
            f"({names[i]}·{names[j]})·{names[k]} != {names[i]}·({names[j]}·{names[k]}) "
            f"({len(bad)} triples in total)",
        )

    eye = identity(d)
    if not np.array_equal(a.left_matrix(a.unit), eye) or not np.array_equal(a.right_matrix(a.unit), eye):
        report.add(AXIOM_UNIT, f"{a.format(a.unit)} is not a two-sided unit")
    return report


@dataclass(frozen=True, eq=False)
class SubalgebraView:
    """A subspace of an algebra; equality is equality of canonical bases.

    ``unital`` records whether the parent's unit lies in the subspace. Views
    that are only modules (such as J_g) are allowed.
    """

    parent: StructureAlgebra
    space: Subspace
    unital: bool

    @classmethod
    def of(cls, parent: StructureAlgebra, space: Subspace) -> "SubalgebraView":
        return cls(parent, space, space.contains(parent.unit))

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> np.ndarray:
        return self.space.basis

    @property
    def key(self) -> tuple:
        return self.space.key

    def contains(self, v) -> bool:
        return self.space.contains(v)

    def issubset(self, other: "SubalgebraView") -> bool:
        return self.space.issubset(other.space)

    def is_closed(self) -> bool:
        a = self.parent
        return all(self.space.contains(a.multiply(x, y)) for x in self.basis for y in self.basis)

    def is_commutative(self) -> bool:
        a = self.parent
        return all(
            not ((a.multiply(x, y) - a.multiply(y, x)) % a.p).any()
            for i, x in enumerate(self.basis)
            for y in self.basis[i + 1:]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubalgebraView):
            return NotImplemented
        return self.space == other.space

    def __hash__(self) -> int:
        return hash(self.space)

    def __repr__(self) -> str:
        return f"SubalgebraView(dim={self.dim}, unital={self.unital})"


def whole(a: StructureAlgebra) -> SubalgebraView:
    return SubalgebraView(a, Subspace.full(a.dim, a.p), True)


def scalars(a: StructureAlgebra) -> SubalgebraView:
    return SubalgebraView(a, Subspace.span([a.unit], a.dim, a.p), True)


def view(a: StructureAlgebra, vectors: Iterable) -> SubalgebraView:
    return SubalgebraView.of(a, Subspace.span(list(vectors) or zeros(0, a.dim), a.dim, a.p))


def intersect_views(u: SubalgebraView, v: SubalgebraView) -> SubalgebraView:
    return SubalgebraView.of(u.parent, u.space.intersect(v.space))


def center(a: StructureAlgebra) -> SubalgebraView:
    """C(R): solutions of x·b_i = b_i·x for every basis element."""
    constraints = np.vstack([a.commutator_matrix(a.basis_vector(i)) for i in range(a.dim)])
    return SubalgebraView(a, nullspace(constraints, a.p, a.dim), True)


def centralizer(a: StructureAlgebra, inner: SubalgebraView, outer: SubalgebraView) -> SubalgebraView:
    """V_outer(inner) = {r in outer : r·s = s·r for all s in inner}."""
    if inner.dim == 0:
        return outer
    constraints = np.vstack([a.commutator_matrix(s) for s in inner.basis])
    space = kernel_within(constraints, outer.space)
    return SubalgebraView.of(a, space)


def subalgebra_closure(a: StructureAlgebra, seed: Iterable, include_unit: bool = True) -> SubalgebraView:
    """Least subspace containing ``seed`` (and 1 if asked) closed under products."""
    vectors = [a.vector(v) for v in seed]
    if include_unit:
        vectors.append(a.unit)
    space = Subspace.span(vectors or zeros(0, a.dim), a.dim, a.p)

    while True:
        products = [a.multiply(x, y) for x in space.basis for y in space.basis]
        if not products:
            break
        grown = space + Subspace.span(products, a.dim, a.p)
        if grown.dim == space.dim:
            break
        space = grown

    return SubalgebraView.of(a, space)


def product_subalgebra(a: StructureAlgebra, s: SubalgebraView, c: SubalgebraView) -> SubalgebraView:
    """S·C: span of the products s_i·c_j for a central C."""
    if not c.space.issubset(center(a).space):
        raise PreconditionError("product_subalgebra needs a central second factor")
    products = [a.multiply(x, y) for x in s.basis for y in c.basis]
    return SubalgebraView.of(a, Subspace.span(products or zeros(0, a.dim), a.dim, a.p))


def double_centralizer_check(a: StructureAlgebra, sub: SubalgebraView) -> bool:
    """Whether V_R(V_R(sub)) = sub."""
    r = whole(a)
    return centralizer(a, centralizer(a, sub, r), r) == sub


def _action_on(a: StructureAlgebra, target: SubalgebraView, r, side: str) -> np.ndarray:
    """Matrix, in ``target`` coordinates, of left or right multiplication by ``r``."""
    columns = []
    for b in target.basis:
        product = a.multiply(r, b) if side == "left" else a.multiply(b, r)
        columns.append(target.space.coordinates(product))
    if not columns:
        return zeros(0, 0)
    return np.array(columns, dtype=np.int64).T


@dataclass(frozen=True, eq=False)
class TensorQuotient:
    """``left ⊗_base right`` as a quotient of the coordinate tensor space.

    Coordinate ``i * right.dim + j`` stands for ``left_i ⊗ right_j``. The
    quotient is identified with the coordinates that are not pivots of the
    relation subspace; ``projection`` sends a tensor to its reduced form.
    """

    left: SubalgebraView
    right: SubalgebraView
    base: SubalgebraView
    relations: Subspace
    free: tuple[int, ...]
    projection: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def ambient_dim(self) -> int:
        return self.left.dim * self.right.dim

    @property
    def p(self) -> int:
        return self.left.parent.p

    def project(self, v) -> np.ndarray:
        return (self.projection @ as_vector(v, self.p, self.ambient_dim)) % self.p

    def lift(self, z) -> np.ndarray:
        v = np.zeros(self.ambient_dim, dtype=np.int64)
        v[list(self.free)] = as_vector(z, self.p, self.dim)
        return v

    def tensor(self, x, y) -> np.ndarray:
        """Coordinates of the elementary tensor ``x ⊗ y``."""
        return np.kron(self.left.space.coordinates(x), self.right.space.coordinates(y)) % self.p

    @cached_property
    def multiplication_matrix(self) -> np.ndarray:
        """Matrix of ``x ⊗ y -> x·y`` on the coordinate tensor space."""
        a = self.left.parent
        cols = [a.multiply(x, y) for x in self.left.basis for y in self.right.basis]
        if not cols:
            return zeros(a.dim, 0)
        return np.array(cols, dtype=np.int64).T

    def left_action(self, r) -> np.ndarray:
        a = self.left.parent
        return np.kron(_action_on(a, self.left, r, "left"), identity(self.right.dim)) % self.p

    def right_action(self, r) -> np.ndarray:
        a = self.left.parent
        return np.kron(identity(self.left.dim), _action_on(a, self.right, r, "right")) % self.p


def _check_base(a: StructureAlgebra, base: SubalgebraView, *containers: SubalgebraView) -> None:
    if not base.contains(a.unit):
        raise PreconditionError("base subring must contain the unit")
    if not base.is_commutative():
        raise PreconditionError("base subring must be commutative")
    for c in containers:
        if not base.issubset(c):
            raise PreconditionError("base subring is not contained in both tensor factors")


def tensor_over_subring(
    a: StructureAlgebra,
    left: SubalgebraView,
    right: SubalgebraView,
    base: SubalgebraView,
) -> TensorQuotient:
    """Quotient of ``left ⊗ right`` by the balancing relations ``xc⊗y - x⊗cy``."""
    _check_base(a, base, left, right)
    p = a.p
    dl, dr = left.dim, right.dim
    n = dl * dr

    blocks = []
    for c in base.basis:
        # column (i, j) is left_i·c ⊗ right_j - left_i ⊗ c·right_j
        blocks.append((np.kron(_action_on(a, left, c, "right"), identity(dr))
                       - np.kron(identity(dl), _action_on(a, right, c, "left"))).T % p)
    relations = Subspace.span(np.vstack(blocks) if blocks else zeros(0, n), n, p)

    pivots = set(relations.pivots)
    free = tuple(k for k in range(n) if k not in pivots)
    position = {k: i for i, k in enumerate(free)}
    projection = zeros(len(free), n)
    for k in free:
        projection[position[k], k] = 1
    for i, k in enumerate(relations.pivots):
        projection[:, k] = (-relations.basis[i, list(free)]) % p

    logger.debug(f"Тензорное произведение: {dl}x{dr} -> размерность {len(free)}")
    return TensorQuotient(left, right, base, relations, free, projection)


@dataclass(frozen=True, eq=False)
class SeparabilityWitness:
    """z = Σ x_i ⊗ y_i with Σ x_i y_i = 1 and r·z = z·r for r in the subalgebra."""

    quotient: TensorQuotient
    coordinates: np.ndarray
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]


def verify_separability(a: StructureAlgebra, witness: SeparabilityWitness) -> bool:
    """Substitute the pairs back into both defining conditions."""
    q = witness.quotient
    total = a.zero()
    for x, y in witness.pairs:
        total = (total + a.multiply(x, y)) % a.p
    if not np.array_equal(total, a.unit % a.p):
        return False

    for r in q.left.basis:
        diff = np.zeros(q.ambient_dim, dtype=np.int64)
        for x, y in witness.pairs:
            diff = (diff + q.tensor(a.multiply(r, x), y) - q.tensor(x, a.multiply(y, r))) % a.p
        if q.project(diff).any():
            return False
    return True


def separability_element(
    a: StructureAlgebra,
    sub: SubalgebraView,
    base: SubalgebraView,
) -> Optional[SeparabilityWitness]:
    """A separability element of ``sub`` over ``base``, or ``None``.

    Both defining conditions are linear in z, so this is an exact decision.
    """
    _check_base(a, base, sub)
    if centralizer(a, sub, base) != base:
        raise PreconditionError("base subring does not commute with the subalgebra")

    q = tensor_over_subring(a, sub, sub, base)
    free = list(q.free)
    rows = [q.multiplication_matrix[:, free]]
    rhs = [a.unit % a.p]
    for r in sub.basis:
        commutator = (q.left_action(r) - q.right_action(r)) % a.p
        rows.append((q.projection @ commutator[:, free]) % a.p)
        rhs.append(np.zeros(q.dim, dtype=np.int64))

    solution = solve(np.vstack(rows), np.concatenate(rhs), a.p)
    if solution is None:
        logger.debug(f"Элемент сепарабельности не существует (dim {sub.dim} над dim {base.dim})")
        return None

    lifted = q.lift(solution.particular)
    pairs = []
    for k in np.flatnonzero(lifted):
        i, j = divmod(int(k), sub.dim)
        pairs.append(((lifted[k] * sub.basis[i]) % a.p, sub.basis[j].copy()))
    witness = SeparabilityWitness(q, solution.particular, tuple(pairs))

    if not verify_separability(a, witness):
        raise GroupoidalError("separability witness failed substitution")
    return witness


def matrix_algebra(n: int, p: int) -> StructureAlgebra:
    """M_n(F_p) on the matrix units e_ij (row-major)."""
    d = n * n
    mul = np.zeros((d, d, d), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for l in range(n):
                mul[i * n + j, j * n + l, i * n + l] = 1
    unit = np.zeros(d, dtype=np.int64)
    for i in range(n):
        unit[i * n + i] = 1
    names = tuple(f"e{i + 1}{j + 1}" for i in range(n) for j in range(n))
    return StructureAlgebra(p, mul, unit, names)


def diagonal_algebra(k: int, p: int, names: Optional[Sequence[str]] = None) -> StructureAlgebra:
    """F_p^k with componentwise product."""
    mul = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        mul[i, i, i] = 1
    names = tuple(names) if names is not None else tuple(f"u{i + 1}" for i in range(k))
    return StructureAlgebra(p, mul, np.ones(k, dtype=np.int64), names)


def direct_product(first: StructureAlgebra, second: StructureAlgebra) -> StructureAlgebra:
    if first.p != second.p:
        raise DimensionMismatchError(f"algebras over F_{first.p} and F_{second.p}")
    d1, d2 = first.dim, second.dim
    d = d1 + d2
    mul = np.zeros((d, d, d), dtype=np.int64)
    mul[:d1, :d1, :d1] = first.mul
    mul[d1:, d1:, d1:] = second.mul
    taken = set(first.basis_names)
    names = list(first.basis_names)
    for name in second.basis_names:
        while name in taken:
            name += "'"
        taken.add(name)
        names.append(name)
    return StructureAlgebra(first.p, mul, np.concatenate([first.unit, second.unit]), tuple(names))
