"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``int64`` numpy arrays with entries in ``[0, p)``; vectors
are 1-D arrays and matrices act on column vectors (``y = m @ x``). Subspaces
are stored by their reduced row-echelon basis, which makes equality of
subspaces an equality of arrays.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import isprime

from groupoidal.constants import MAX_PRIME
from groupoidal.errors import DimensionMismatchError, PreconditionError


def check_prime(p: int) -> int:
    """Validate a field modulus and return it."""
    if p < 2 or not isprime(p):
        raise PreconditionError(f"modulus not prime: {p}")
    if p > MAX_PRIME:
        raise PreconditionError(f"modulus {p} exceeds the supported maximum {MAX_PRIME}")
    return p


def as_matrix(m, p: int, cols: Optional[int] = None) -> np.ndarray:
    """Coerce ``m`` to a 2-D int64 array reduced mod ``p``."""
    arr = np.asarray(m, dtype=np.int64)
    if arr.size == 0:
        width = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
        return np.zeros((0, width), dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got shape {arr.shape}")
    if cols is not None and arr.shape[1] != cols:
        raise DimensionMismatchError(f"expected {cols} columns, got {arr.shape[1]}")
    return arr % p


def as_vector(v, p: int, length: Optional[int] = None) -> np.ndarray:
    arr = np.asarray(v, dtype=np.int64).reshape(-1)
    if length is not None and arr.shape[0] != length:
        raise DimensionMismatchError(f"expected a vector of length {length}, got {arr.shape[0]}")
    return arr % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def row_reduce(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``m`` and its pivot columns.

    Zero rows are kept at the bottom so the shape is preserved.
    """
    r = as_matrix(m, p).copy()
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0

    for col in range(cols):
        if row == rows:
            break
        nonzero = np.flatnonzero(r[row:, col])
        if nonzero.size == 0:
            continue
        found = row + int(nonzero[0])
        if found != row:
            r[[row, found]] = r[[found, row]]

        r[row] = (r[row] * pow(int(r[row, col]), -1, p)) % p

        # Clear the column everywhere else in one outer-product update.
        factors = r[:, col].copy()
        factors[row] = 0
        if factors.any():
            r = (r - np.outer(factors, r[row])) % p

        pivots.append(col)
        row += 1

    return r, pivots


def rref(m, p: int) -> tuple[np.ndarray, int]:
    """Reduced row-echelon form and rank."""
    reduced, pivots = row_reduce(m, p)
    return reduced, len(pivots)


def rank(m, p: int) -> int:
    return len(row_reduce(m, p)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F_p^n held as its canonical (RREF) basis, one vector per row."""

    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]
    p: int

    @classmethod
    def span(cls, vectors, ambient_dim: int, p: int) -> "Subspace":
        arr = as_matrix(vectors, p, cols=ambient_dim)
        reduced, pivots = row_reduce(arr, p)
        basis = reduced[: len(pivots)].copy()
        basis.setflags(write=False)
        return cls(ambient_dim, basis, tuple(pivots), p)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls.span(zeros(0, ambient_dim), ambient_dim, p)

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls.span(identity(ambient_dim), ambient_dim, p)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def key(self) -> tuple:
        """Hashable canonical form; equal subspaces have equal keys."""
        return (self.ambient_dim, self.p, self.pivots, self.basis.tobytes())

    def vectors(self) -> list[np.ndarray]:
        return [row.copy() for row in self.basis]

    def _check_compatible(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim or self.p != other.p:
            raise DimensionMismatchError(
                f"subspaces of F_{self.p}^{self.ambient_dim} and F_{other.p}^{other.ambient_dim}"
            )

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of ``v`` in the canonical basis (read off at the pivots)."""
        v = as_vector(v, self.p, self.ambient_dim)
        coords = v[list(self.pivots)] if self.pivots else np.zeros(0, dtype=np.int64)
        if ((coords @ self.basis - v) % self.p).any():
            raise PreconditionError("vector is not in the subspace")
        return coords

    def contains(self, v) -> bool:
        v = as_vector(v, self.p, self.ambient_dim)
        if not self.pivots:
            return not v.any()
        coords = v[list(self.pivots)]
        return not ((coords @ self.basis - v) % self.p).any()

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(other.contains(row) for row in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def annihilator(self) -> "Subspace":
        """Vectors w with b·w = 0 for every basis row b."""
        return nullspace(self.basis, self.p, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection as the common kernel of both annihilators."""
        self._check_compatible(other)
        constraints = np.vstack([self.annihilator().basis, other.annihilator().basis])
        return nullspace(constraints, self.p, self.ambient_dim)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def image(self, matrix: np.ndarray) -> "Subspace":
        """Image under ``x -> matrix @ x``."""
        matrix = as_matrix(matrix, self.p)
        if matrix.shape[1] != self.ambient_dim:
            raise DimensionMismatchError(
                f"matrix with {matrix.shape[1]} columns applied to F_p^{self.ambient_dim}"
            )
        images = (self.basis @ matrix.T) % self.p
        return Subspace.span(images, matrix.shape[0], self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.p == other.p
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        rows = [[int(x) for x in row] for row in self.basis]
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, p={self.p}, basis={rows})"


def nullspace(m, p: int, cols: Optional[int] = None) -> Subspace:
    """Kernel of ``x -> m @ x`` in canonical form."""
    m = as_matrix(m, p, cols)
    n = m.shape[1]
    reduced, pivots = row_reduce(m, p)
    pivot_set = set(pivots)
    vectors = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = np.zeros(n, dtype=np.int64)
        v[free] = 1
        for i, col in enumerate(pivots):
            v[col] = (-reduced[i, free]) % p
        vectors.append(v)
    if not vectors:
        return Subspace.zero(n, p)
    return Subspace.span(np.array(vectors), n, p)


def kernel_within(constraints, space: Subspace) -> Subspace:
    """Elements x of ``space`` with ``constraints @ x = 0``."""
    p = space.p
    constraints = as_matrix(constraints, p, space.ambient_dim)
    if space.is_zero or constraints.shape[0] == 0:
        return space
    local = nullspace((constraints @ space.basis.T) % p, p, space.dim)
    if local.is_zero:
        return Subspace.zero(space.ambient_dim, p)
    return Subspace.span((local.basis @ space.basis) % p, space.ambient_dim, p)


@dataclass(frozen=True, eq=False)
class Solution:
    particular: np.ndarray
    kernel: Subspace


def solve(a, b, p: int) -> Optional[Solution]:
    """Solve ``a @ x = b``; ``None`` when the system is inconsistent."""
    a = as_matrix(a, p)
    b = as_vector(b, p)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(f"{a.shape[0]} equations but right-hand side of length {b.shape[0]}")
    n = a.shape[1]
    reduced, pivots = row_reduce(np.hstack([a, b.reshape(-1, 1)]), p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, col in enumerate(pivots):
        x[col] = reduced[i, n]
    return Solution(x, nullspace(a, p, n))


def inverse(m, p: int) -> np.ndarray:
    m = as_matrix(m, p)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionMismatchError(f"inverse of non-square matrix {m.shape}")
    reduced, pivots = row_reduce(np.hstack([m, identity(n)]), p)
    if pivots[:n] != list(range(n)):
        raise PreconditionError("matrix is singular")
    return reduced[:, n:].copy()


def span_all(spaces: Iterable[Subspace], ambient_dim: int, p: int) -> Subspace:
    rows = [s.basis for s in spaces]
    if not rows:
        return Subspace.zero(ambient_dim, p)
    return Subspace.span(np.vstack(rows), ambient_dim, p)


def direct_sum(spaces: Sequence[Subspace], ambient_dim: int, p: int) -> tuple[Subspace, bool]:
    """Sum of ``spaces`` and whether it is internal-direct."""
    total = span_all(spaces, ambient_dim, p)
    return total, total.dim == sum(s.dim for s in spaces)
