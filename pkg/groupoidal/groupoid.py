"""Finite groupoids as morphism tables with bitmask subsets."""

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence, Union

from groupoidal.constants import DEFAULT_MAX_MORPHISMS, get_logger
from groupoidal.errors import (
    EnumerationCapExceeded,
    NotWideError,
    PreconditionError,
    UnknownObjectError,
)
from groupoidal.models import ValidationReport

logger = get_logger("groupoid")

# Axiom identifiers used in validation reports.
AXIOM_TABLES = "tables"
AXIOM_IDENTITY_ENDPOINTS = "identity-endpoints"
AXIOM_INVERSE_ENDPOINTS = "inverse-endpoints"
AXIOM_COMPOSITION_MISSING = "composition-missing"
AXIOM_COMPOSITION_NONCOMPOSABLE = "composition-noncomposable"
AXIOM_COMPOSITION_ENDPOINTS = "composition-endpoints"
AXIOM_IDENTITY_LAW = "identity-law"
AXIOM_INVERSE_LAW = "inverse-law"
AXIOM_ASSOCIATIVITY = "associativity"


@dataclass(frozen=True, eq=False)
class Groupoid:
    """Morphisms are dense ids ``0..size-1``; objects are indices into ``objects``.

    ``comp[(g, h)]`` is the composite ``gh`` (first ``h``, then ``g``) and is
    defined exactly when ``dom[g] == ran[h]``.
    """

    objects: tuple[str, ...]
    names: tuple[str, ...]
    dom: tuple[int, ...]
    ran: tuple[int, ...]
    inv: tuple[int, ...]
    comp: dict[tuple[int, int], int]
    identities: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def identity_mask(self) -> int:
        return mask_of(self.identities)

    def is_identity(self, m: int) -> bool:
        return self.identities[self.dom[m]] == m and self.ran[m] == self.dom[m]

    def composable(self, g: int, h: int) -> bool:
        return self.dom[g] == self.ran[h]

    def compose(self, g: int, h: int) -> Optional[int]:
        if not self.composable(g, h):
            return None
        return self.comp.get((g, h))

    def morphism_id(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownObjectError(f"unknown morphism {name!r}") from None

    def object_id(self, obj: Union[int, str]) -> int:
        if isinstance(obj, int):
            if 0 <= obj < len(self.objects):
                return obj
            raise UnknownObjectError(f"unknown object index {obj}")
        try:
            return self.objects.index(obj)
        except ValueError:
            raise UnknownObjectError(f"unknown object {obj!r}") from None

    def hom_set(self, source: Union[int, str], target: Union[int, str]) -> list[int]:
        """Morphisms from ``source`` to ``target``."""
        e, f = self.object_id(source), self.object_id(target)
        return [m for m in range(self.size) if self.dom[m] == e and self.ran[m] == f]

    def objects_of(self, mask: int) -> set[int]:
        objs = set()
        for m in members(mask):
            objs.add(self.dom[m])
            objs.add(self.ran[m])
        return objs

    def label(self, mask: int) -> str:
        return "{" + ", ".join(self.names[m] for m in members(mask)) + "}"


def mask_of(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class Subgroupoid:
    """A morphism subset of a parent groupoid, compared by its bitmask."""

    groupoid: Groupoid = field(compare=False, repr=False)
    mask: int

    @property
    def morphisms(self) -> list[int]:
        return members(self.mask)

    @property
    def objects(self) -> set[int]:
        return self.groupoid.objects_of(self.mask)

    @property
    def is_wide(self) -> bool:
        ids = self.groupoid.identity_mask
        return self.mask & ids == ids

    def __contains__(self, m: int) -> bool:
        return bool(self.mask >> m & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    @property
    def label(self) -> str:
        return self.groupoid.label(self.mask)

    def __str__(self) -> str:
        return self.label


def validate_groupoid(g: Groupoid) -> ValidationReport:
    """Check every groupoid axiom; each violation carries a witness."""
    report = ValidationReport("groupoid")
    n = g.size
    n_obj = len(g.objects)

    if not (len(g.dom) == len(g.ran) == len(g.inv) == n) or len(g.identities) != n_obj:
        report.add(AXIOM_TABLES, "dom/ran/inv/identity tables have inconsistent lengths")
        return report
    bad = [m for m in range(n) if not (0 <= g.dom[m] < n_obj and 0 <= g.ran[m] < n_obj and 0 <= g.inv[m] < n)]
    bad += [e for e, m in enumerate(g.identities) if not 0 <= m < n]
    bad_comp = [(k, v) for k, v in g.comp.items() if not (0 <= k[0] < n and 0 <= k[1] < n and 0 <= v < n)]
    if bad or bad_comp:
        report.add(AXIOM_TABLES, f"indices out of range: {bad or bad_comp}")
        return report

    name = g.names
    for e, m in enumerate(g.identities):
        if g.dom[m] != e or g.ran[m] != e:
            report.add(AXIOM_IDENTITY_ENDPOINTS, f"id_{g.objects[e]} = {name[m]} is not an endomorphism of {g.objects[e]}")

    for m in range(n):
        i = g.inv[m]
        if g.dom[i] != g.ran[m] or g.ran[i] != g.dom[m]:
            report.add(AXIOM_INVERSE_ENDPOINTS, f"{name[i]} = {name[m]}^-1 has the wrong domain or range")

    for (a, b), c in sorted(g.comp.items()):
        if g.dom[a] != g.ran[b]:
            report.add(AXIOM_COMPOSITION_NONCOMPOSABLE, f"{name[a]}·{name[b]} defined but d({name[a]}) != r({name[b]})")
        elif g.dom[c] != g.dom[b] or g.ran[c] != g.ran[a]:
            report.add(AXIOM_COMPOSITION_ENDPOINTS, f"{name[a]}·{name[b]} = {name[c]} has the wrong domain or range")

    for a, b in product(range(n), repeat=2):
        if g.dom[a] == g.ran[b] and (a, b) not in g.comp:
            report.add(AXIOM_COMPOSITION_MISSING, f"{name[a]}·{name[b]} is composable but undefined")

    for m in range(n):
        left = g.comp.get((g.identities[g.ran[m]], m))
        right = g.comp.get((m, g.identities[g.dom[m]]))
        if left is not None and left != m:
            report.add(AXIOM_IDENTITY_LAW, f"id_{g.objects[g.ran[m]]}·{name[m]} = {name[left]}")
        if right is not None and right != m:
            report.add(AXIOM_IDENTITY_LAW, f"{name[m]}·id_{g.objects[g.dom[m]]} = {name[right]}")

        i = g.inv[m]
        there = g.comp.get((m, i))
        back = g.comp.get((i, m))
        if there is not None and there != g.identities[g.ran[m]]:
            report.add(AXIOM_INVERSE_LAW, f"{name[m]}·{name[i]} = {name[there]}, expected id_{g.objects[g.ran[m]]}")
        if back is not None and back != g.identities[g.dom[m]]:
            report.add(AXIOM_INVERSE_LAW, f"{name[i]}·{name[m]} = {name[back]}, expected id_{g.objects[g.dom[m]]}")

    for a, b, c in product(range(n), repeat=3):
        ab = g.comp.get((a, b)) if g.dom[a] == g.ran[b] else None
        bc = g.comp.get((b, c)) if g.dom[b] == g.ran[c] else None
        if ab is None or bc is None:
            continue
        lhs = g.comp.get((ab, c))
        rhs = g.comp.get((a, bc))
        if lhs is not None and rhs is not None and lhs != rhs:
            report.add(
                AXIOM_ASSOCIATIVITY,
                f"({name[a]}·{name[b]})·{name[c]} = {name[lhs]} but {name[a]}·({name[b]}·{name[c]}) = {name[rhs]}",
            )

    if report.ok:
        logger.debug(f"Группоид валиден: {n} морфизмов, {n_obj} объектов")
    else:
        logger.info(f"Группоид нарушает {len(report.violations)} аксиом")
    return report


def isotropy_group(g: Groupoid, obj: Union[int, str]) -> Subgroupoid:
    """G(e, e): the morphisms from ``obj`` to itself."""
    e = g.object_id(obj)
    return Subgroupoid(g, mask_of(g.hom_set(e, e)))


def is_closed(g: Groupoid, mask: int) -> bool:
    """Nonempty and stable under composition and inverses."""
    if not mask:
        return False
    ids = members(mask)
    for m in ids:
        if not mask >> g.inv[m] & 1:
            return False
    for a in ids:
        for b in ids:
            if g.dom[a] == g.ran[b] and not mask >> g.comp[(a, b)] & 1:
                return False
    return True


def _closure(g: Groupoid, mask: int) -> int:
    if not mask:
        return 0
    inside = set(members(mask))
    frontier = deque(inside)
    while frontier:
        m = frontier.popleft()
        found = [g.inv[m], g.identities[g.dom[m]], g.identities[g.ran[m]]]
        for other in tuple(inside):
            if g.dom[m] == g.ran[other]:
                found.append(g.comp[(m, other)])
            if g.dom[other] == g.ran[m]:
                found.append(g.comp[(other, m)])
        for x in found:
            if x not in inside:
                inside.add(x)
                frontier.append(x)
    return mask_of(inside)


def generated_subgroupoid(g: Groupoid, seed: Union[int, Iterable[int]]) -> Subgroupoid:
    """Least subgroupoid containing ``seed`` and the identities of its members.

    An empty seed yields the empty subset.
    """
    mask = seed if isinstance(seed, int) else mask_of(seed)
    return Subgroupoid(g, _closure(g, mask))


def wide_subgroupoids(g: Groupoid, max_morphisms: int = DEFAULT_MAX_MORPHISMS) -> list[Subgroupoid]:
    """All wide subgroupoids, sorted by bitmask.

    Every wide subgroupoid is reached from G_0 by adjoining its members one
    at a time and closing, so a breadth-first walk over single-morphism
    extensions enumerates the lattice without visiting every subset.
    """
    if g.size > max_morphisms:
        raise EnumerationCapExceeded("wide subgroupoid enumeration", g.size, max_morphisms, "--max-morphisms")

    start = _closure(g, g.identity_mask)
    seen = {start}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        for m in range(g.size):
            if mask >> m & 1:
                continue
            bigger = _closure(g, mask | 1 << m)
            if bigger not in seen:
                seen.add(bigger)
                queue.append(bigger)

    logger.debug(f"Найдено {len(seen)} широких подгруппоидов")
    return [Subgroupoid(g, mask) for mask in sorted(seen)]


@dataclass(frozen=True)
class CosetDecomposition:
    left_reps: tuple[int, ...]
    right_reps: tuple[int, ...]
    left_cosets: tuple[int, ...]   # masks of g_i H, aligned with left_reps
    right_cosets: tuple[int, ...]  # masks of H g'_i, aligned with right_reps

    @property
    def index(self) -> int:
        return len(self.left_reps)


def _coset_rep(g: Groupoid, coset: int) -> int:
    ids = members(coset)
    for m in ids:
        if g.is_identity(m):
            return m
    return ids[0]


def _partition(g: Groupoid, coset_of) -> tuple[tuple[int, ...], tuple[int, ...]]:
    assigned = 0
    cosets = []
    for m in range(g.size):
        if assigned >> m & 1:
            continue
        coset = coset_of(m)
        if coset & assigned:
            raise PreconditionError(f"cosets overlap at {g.names[m]}; the subset is not a subgroupoid")
        assigned |= coset
        cosets.append(coset)
    reps = [_coset_rep(g, c) for c in cosets]
    order = sorted(range(len(cosets)), key=lambda i: (not g.is_identity(reps[i]), reps[i]))
    return tuple(reps[i] for i in order), tuple(cosets[i] for i in order)


def coset_decomposition(g: Groupoid, h: Subgroupoid) -> CosetDecomposition:
    """Partition G into left cosets gH and right cosets Hg'.

    A coset containing an identity is represented by that identity, any
    other coset by its least morphism id; identity cosets come first.
    """
    if not h.is_wide:
        raise NotWideError(f"coset decomposition needs a wide subgroupoid, got {h.label}")
    hs = h.morphisms

    def left(m: int) -> int:
        return mask_of(g.comp[(m, k)] for k in hs if g.dom[m] == g.ran[k])

    def right(m: int) -> int:
        return mask_of(g.comp[(k, m)] for k in hs if g.dom[k] == g.ran[m])

    left_reps, left_cosets = _partition(g, left)
    right_reps, right_cosets = _partition(g, right)
    return CosetDecomposition(left_reps, right_reps, left_cosets, right_cosets)


def transport_triples(n_objects: int, n_elements: int) -> list[tuple[int, int, int]]:
    """Morphism ids of a transport groupoid as ``(range, domain, element)``; identities first."""
    triples = [(i, i, 0) for i in range(n_objects)]
    triples += [
        (i, j, a)
        for i, j, a in product(range(n_objects), range(n_objects), range(n_elements))
        if (i, j, a) != (i, i, 0)
    ]
    return triples


def transport_groupoid(
    objects: Sequence[str],
    group_table: Sequence[Sequence[int]],
    element_names: Optional[Sequence[str]] = None,
) -> Groupoid:
    """Pair groupoid on ``objects`` times a group given by its Cayley table.

    The morphism ``(i, j, a)`` goes from object ``j`` to object ``i``;
    element 0 of the table must be the group identity. One object gives the
    group itself; the trivial group gives the pair groupoid.
    """
    n = len(group_table)
    if any(group_table[0][a] != a or group_table[a][0] != a for a in range(n)):
        raise PreconditionError("element 0 of the group table is not the identity")
    element_names = list(element_names or [f"a{a}" for a in range(n)])
    group_inv = [next(b for b in range(n) if group_table[a][b] == 0) for a in range(n)]

    triples = transport_triples(len(objects), n)
    index = {t: k for k, t in enumerate(triples)}

    def name(i: int, j: int, a: int) -> str:
        if i == j and a == 0:
            return objects[i]
        if len(objects) == 1:
            return element_names[a]
        if n == 1:
            return f"{objects[i]}<-{objects[j]}"
        return f"{objects[i]}<-{objects[j]}:{element_names[a]}"

    comp = {}
    for (i, j, a), (k, l, b) in product(triples, repeat=2):
        if j == k:
            comp[(index[(i, j, a)], index[(k, l, b)])] = index[(i, l, group_table[a][b])]

    return Groupoid(
        objects=tuple(objects),
        names=tuple(name(*t) for t in triples),
        dom=tuple(j for _, j, _ in triples),
        ran=tuple(i for i, _, _ in triples),
        inv=tuple(index[(j, i, group_inv[a])] for i, j, a in triples),
        comp=comp,
        identities=tuple(range(len(objects))),
    )


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def disjoint_union(first: Groupoid, second: Groupoid) -> Groupoid:
    """Disjoint union; ids of ``second`` are shifted past those of ``first``."""
    shift = first.size
    obj_shift = len(first.objects)

    taken = set(first.objects)
    objects = list(first.objects)
    renamed_objects = {}
    for obj in second.objects:
        new = _fresh(obj, taken)
        taken.add(new)
        renamed_objects[obj] = new
        objects.append(new)

    taken = set(first.names)
    names = list(first.names)
    for m, nm in enumerate(second.names):
        if second.is_identity(m):
            new = renamed_objects[second.objects[second.dom[m]]]
        else:
            new = _fresh(nm, taken | set(objects))
        taken.add(new)
        names.append(new)

    comp = dict(first.comp)
    comp.update({(a + shift, b + shift): c + shift for (a, b), c in second.comp.items()})
    return Groupoid(
        objects=tuple(objects),
        names=tuple(names),
        dom=first.dom + tuple(d + obj_shift for d in second.dom),
        ran=first.ran + tuple(r + obj_shift for r in second.ran),
        inv=first.inv + tuple(i + shift for i in second.inv),
        comp=comp,
        identities=first.identities + tuple(m + shift for m in second.identities),
    )
