"""Instance builders: the reference fixtures in code and parametrised random families.

Every family produces a valid action by construction: one algebra copied over
the objects of a transport groupoid, moved by the powers of one automorphism.
"""

from typing import Sequence

import numpy as np

from groupoidal.action import (
    GroupoidAction,
    conjugation_automorphism,
    disjoint_union_action,
    permutation_automorphism,
    transport_action,
)
from groupoidal.algebra import diagonal_algebra, matrix_algebra
from groupoidal.errors import PreconditionError
from groupoidal.linalg import identity

MAX_CYCLIC_ORDER = 12


def cyclic_table(n: int) -> list[list[int]]:
    """Cayley table of Z/n with element 0 as identity."""
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def cyclic_automorphisms(alpha: np.ndarray, p: int, max_order: int = MAX_CYCLIC_ORDER) -> list[np.ndarray]:
    """[1, α, α², ...] up to the order of α."""
    alpha = np.asarray(alpha, dtype=np.int64) % p
    eye = identity(alpha.shape[0])
    powers = [eye]
    current = alpha
    while not np.array_equal(current, eye):
        if len(powers) >= max_order:
            raise PreconditionError(f"automorphism order exceeds {max_order}")
        powers.append(current)
        current = (current @ alpha) % p
    return powers


def _object_names(n: int) -> list[str]:
    return [f"o{i}" for i in range(n)]


def diagonal_transport(n_objects: int, perm: Sequence[int], p: int) -> GroupoidAction:
    """F_p^k on each object, the group generated by a coordinate permutation."""
    algebra = diagonal_algebra(len(perm), p)
    powers = cyclic_automorphisms(permutation_automorphism(perm, p), p)
    return transport_action(_object_names(n_objects), cyclic_table(len(powers)), algebra, powers)


def matrix_transport(n_objects: int, u, p: int) -> GroupoidAction:
    """M_n(F_p) on each object, the group generated by conjugation by ``u``."""
    u = np.asarray(u, dtype=np.int64)
    algebra = matrix_algebra(u.shape[0], p)
    powers = cyclic_automorphisms(conjugation_automorphism(u, p), p)
    return transport_action(_object_names(n_objects), cyclic_table(len(powers)), algebra, powers)


def ex1(p: int = 5) -> GroupoidAction:
    """Pair groupoid on {e, f} swapping the two factors of F_p × F_p."""
    return transport_action(["e", "f"], [[0]], diagonal_algebra(1, p, ["1"]), [identity(1)])


def ex2(p: int = 5) -> GroupoidAction:
    """Z/2 acting on M_2(F_p) by conjugation with diag(1, -1)."""
    if p == 2:
        raise PreconditionError("conjugation by diag(1, -1) is trivial over F_2")
    u = np.array([[1, 0], [0, p - 1]], dtype=np.int64)
    alpha = conjugation_automorphism(u, p)
    return transport_action(["e"], cyclic_table(2), matrix_algebra(2, p), [identity(4), alpha], ["e", "g"])


def ex3(p: int = 5) -> GroupoidAction:
    return disjoint_union_action(ex1(p), ex2(p))


def trivial_group_action(p: int = 5, order: int = 2) -> GroupoidAction:
    """Z/order acting trivially on F_p; never β-Galois for order > 1."""
    return transport_action(["e"], cyclic_table(order), diagonal_algebra(1, p, ["1"]), [identity(1)] * order)
