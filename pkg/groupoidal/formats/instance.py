"""Line-oriented instance files (``ggal-instance v1``).

Reading happens in two stages: ``load_instance_file`` checks syntax and
resolves names into an ``InstanceFile``; ``parse_instance`` builds the
groupoid, algebra and action, validates them and returns a ``GaloisInstance``.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from groupoidal.action import GroupoidAction, validate_action
from groupoidal.algebra import StructureAlgebra, validate_algebra
from groupoidal.config import Config
from groupoidal.constants import EXPECTATION_SUFFIX, INSTANCE_HEADER, INSTANCE_SUFFIX, get_logger
from groupoidal.errors import InstanceFormatError, InstanceValidationError, PreconditionError
from groupoidal.galois import GaloisCoordinates, GaloisInstance
from groupoidal.groupoid import Groupoid, validate_groupoid
from groupoidal.linalg import check_prime
from groupoidal.models import ValidationReport

logger = get_logger("formats.instance")

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

SECTIONS = ("algebra", "groupoid", "action", "coordinates")


@dataclass
class InstanceFile:
    path: str
    prime: Optional[int] = None  # None: take the configured default
    prime_line: int = 0
    basis: list[str] = field(default_factory=list)
    unit: list[int] = field(default_factory=list)
    mul: list[tuple[int, int, int, int]] = field(default_factory=list)
    objects: list[str] = field(default_factory=list)
    # morphisms in declaration order: (name, dom, ran, inverse name); identities have dom == ran == own object
    morphisms: list[tuple[str, int, int, str]] = field(default_factory=list)
    identities: dict[int, int] = field(default_factory=dict)  # object -> morphism index
    compositions: list[tuple[int, int, int]] = field(default_factory=list)
    idempotents: dict[int, list[int]] = field(default_factory=dict)
    beta: list[tuple[int, int, int, int]] = field(default_factory=list)
    coordinates: Optional[list[tuple[list[int], list[int]]]] = None

    @property
    def dim(self) -> int:
        return len(self.basis)


class _Reader:
    def __init__(self, path: str):
        self.path = path
        self.line = 0

    def error(self, message: str) -> InstanceFormatError:
        return InstanceFormatError(message, self.path, self.line or None)

    def ints(self, tokens: list[str]) -> list[int]:
        try:
            return [int(t) for t in tokens]
        except ValueError:
            raise self.error(f"expected integers, got {' '.join(tokens)!r}") from None

    def index(self, table: list[str], name: str, kind: str) -> int:
        try:
            return table.index(name)
        except ValueError:
            raise self.error(f"unknown {kind} {name!r}") from None


def load_instance_file(path: Union[str, Path]) -> InstanceFile:
    """Read and resolve an instance file without validating any axiom."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(f"cannot read instance: {e.strerror or e}", str(path)) from None
    return loads_instance(text, str(path))


def loads_instance(text: str, path: str = "<string>") -> InstanceFile:
    r = _Reader(path)
    lines = [(n, raw.split("#", 1)[0].split()) for n, raw in enumerate(text.splitlines(), start=1)]
    lines = [(n, tokens) for n, tokens in lines if tokens]

    if not lines or " ".join(lines[0][1]) != INSTANCE_HEADER:
        r.line = lines[0][0] if lines else 0
        raise r.error(f"missing header line {INSTANCE_HEADER!r}")

    inst = InstanceFile(path=path)
    section = None
    pending_morphisms: list[tuple[int, list[str]]] = []
    pending_compose: list[tuple[int, list[str]]] = []
    pending_action: list[tuple[int, list[str]]] = []

    for n, tokens in lines[1:]:
        r.line = n
        head, args = tokens[0], tokens[1:]

        if head.startswith("[") and head.endswith("]"):
            section = head[1:-1]
            if section not in SECTIONS or args:
                raise r.error(f"unknown section {' '.join(tokens)!r}")
            continue

        if section is None:
            if head != "prime" or len(args) != 1 or inst.prime is not None:
                raise r.error(f"expected a single 'prime <p>' before the first section, got {head!r}")
            inst.prime, inst.prime_line = r.ints(args)[0], n
            continue

        if section == "algebra":
            if head == "basis":
                if len(set(args)) != len(args) or not args:
                    raise r.error("basis names must be nonempty and distinct")
                inst.basis = list(args)
            elif head == "unit":
                inst.unit = r.ints(args)
                if len(inst.unit) != inst.dim:
                    raise r.error(f"unit has {len(inst.unit)} entries for {inst.dim} basis elements")
            elif head == "mul" and len(args) == 4:
                i, j, k = (r.index(inst.basis, t, "basis element") for t in args[:3])
                inst.mul.append((i, j, k, r.ints(args[3:])[0]))
            else:
                raise r.error(f"bad [algebra] line {' '.join(tokens)!r}")

        elif section == "groupoid":
            if head == "object" and len(args) == 1:
                name = args[0]
                if name in inst.objects or name in [m[0] for m in inst.morphisms]:
                    raise r.error(f"duplicate object {name!r}")
                obj = len(inst.objects)
                inst.objects.append(name)
                inst.identities[obj] = len(inst.morphisms)
                inst.morphisms.append((name, obj, obj, name))
            elif head == "morphism" and len(args) == 4:
                if args[0] in [m[0] for m in inst.morphisms]:
                    raise r.error(f"duplicate morphism {args[0]!r}")
                pending_morphisms.append((n, args))
                inst.morphisms.append((args[0], -1, -1, args[3]))
            elif head == "compose" and len(args) == 3:
                pending_compose.append((n, args))
            else:
                raise r.error(f"bad [groupoid] line {' '.join(tokens)!r}")

        elif section == "action":
            if head in ("idempotent", "beta"):
                pending_action.append((n, tokens))
            else:
                raise r.error(f"bad [action] line {' '.join(tokens)!r}")

        elif section == "coordinates":
            if head != "pair" or args.count("|") != 1:
                raise r.error(f"bad [coordinates] line {' '.join(tokens)!r}")
            split = args.index("|")
            x, y = r.ints(args[:split]), r.ints(args[split + 1:])
            if len(x) != inst.dim or len(y) != inst.dim:
                raise r.error(f"coordinate pair vectors must have {inst.dim} entries")
            inst.coordinates = (inst.coordinates or []) + [(x, y)]

    if not inst.basis:
        raise r.error("[algebra] needs a basis line")
    if len(inst.unit) != inst.dim:
        raise r.error("[algebra] needs a unit line")

    names = [m[0] for m in inst.morphisms]
    for n, (name, dom, ran, inverse) in pending_morphisms:
        r.line = n
        idx = names.index(name)
        inst.morphisms[idx] = (
            name,
            r.index(inst.objects, dom, "object"),
            r.index(inst.objects, ran, "object"),
            inverse,
        )
    for name, _, _, inverse in inst.morphisms:
        if inverse not in names:
            r.line = next((ln for ln, a in pending_morphisms if a[0] == name), 0)
            raise r.error(f"unknown inverse {inverse!r} of {name!r}")
    for n, args in pending_compose:
        r.line = n
        inst.compositions.append(tuple(r.index(names, t, "morphism") for t in args))

    for n, tokens in pending_action:
        r.line = n
        head, args = tokens[0], tokens[1:]
        if head == "idempotent":
            obj = r.index(inst.objects, args[0], "object") if args else None
            values = r.ints(args[1:])
            if obj is None or len(values) != inst.dim:
                raise r.error(f"idempotent needs an object and {inst.dim} integers")
            inst.idempotents[obj] = values
        else:
            if len(args) != 4:
                raise r.error("beta needs: <morphism> <source basis> <target basis> <value>")
            inst.beta.append((
                r.index(names, args[0], "morphism"),
                r.index(inst.basis, args[1], "basis element"),
                r.index(inst.basis, args[2], "basis element"),
                r.ints(args[3:])[0],
            ))

    missing = [inst.objects[o] for o in range(len(inst.objects)) if o not in inst.idempotents]
    if missing:
        r.line = 0
        raise r.error(f"no idempotent for objects: {', '.join(missing)}")
    if not inst.objects:
        r.line = 0
        raise r.error("[groupoid] declares no objects")
    return inst


def build_groupoid(f: InstanceFile) -> Groupoid:
    names = tuple(m[0] for m in f.morphisms)
    dom = tuple(m[1] for m in f.morphisms)
    ran = tuple(m[2] for m in f.morphisms)
    inv = tuple(names.index(m[3]) for m in f.morphisms)
    identities = tuple(f.identities[o] for o in range(len(f.objects)))

    comp = {(g, h): gh for g, h, gh in f.compositions}
    for m in range(len(names)):
        comp.setdefault((identities[ran[m]], m), m)
        comp.setdefault((m, identities[dom[m]]), m)
    return Groupoid(tuple(f.objects), names, dom, ran, inv, comp, identities)


def build_algebra(f: InstanceFile, p: int) -> StructureAlgebra:
    d = f.dim
    mul = np.zeros((d, d, d), dtype=np.int64)
    for i, j, k, v in f.mul:
        mul[i, j, k] = v % p
    return StructureAlgebra(p, mul, np.array(f.unit, dtype=np.int64) % p, tuple(f.basis))


def build_action(f: InstanceFile, groupoid: Groupoid, algebra: StructureAlgebra) -> GroupoidAction:
    p, d = algebra.p, algebra.dim
    idempotents = tuple(np.array(f.idempotents[o], dtype=np.int64) % p for o in range(len(f.objects)))
    beta = [np.zeros((d, d), dtype=np.int64) for _ in range(groupoid.size)]
    given = set()
    for g, src, dst, v in f.beta:
        beta[g][dst, src] = v % p
        given.add(g)
    # identity maps default to the projection onto E_e
    for obj, m in enumerate(groupoid.identities):
        if m not in given:
            beta[m] = algebra.right_matrix(idempotents[obj])
    return GroupoidAction(groupoid, algebra, idempotents, tuple(beta))


@dataclass
class ValidatedParts:
    file: InstanceFile
    path: str
    prime: int
    groupoid: Groupoid
    algebra: StructureAlgebra
    action: GroupoidAction
    reports: list[ValidationReport]

    @property
    def ok(self) -> bool:
        return all(rep.ok for rep in self.reports)


def _resolve_prime(f: InstanceFile, config: Config, prime: Optional[int]) -> int:
    if prime is not None:
        p, line = prime, None
    elif f.prime is not None:
        p, line = f.prime, f.prime_line
    else:
        p, line = config.prime, None
    try:
        return check_prime(p)
    except PreconditionError as e:
        raise InstanceFormatError(str(e), f.path, line) from None


def validate_instance_file(
    path: Union[str, Path],
    config: Optional[Config] = None,
    prime: Optional[int] = None,
) -> ValidatedParts:
    """Build the parts of an instance and run every validator; nothing is raised for axioms."""
    config = config or Config()
    f = load_instance_file(path)
    p = _resolve_prime(f, config, prime)

    groupoid = build_groupoid(f)
    algebra = build_algebra(f, p)
    action = build_action(f, groupoid, algebra)
    reports = [validate_groupoid(groupoid), validate_algebra(algebra)]
    # the action axioms presuppose a groupoid and an algebra
    if all(rep.ok for rep in reports):
        reports.append(validate_action(action))
    return ValidatedParts(f, f.path, p, groupoid, algebra, action, reports)


def parse_instance(
    path: Union[str, Path],
    config: Optional[Config] = None,
    prime: Optional[int] = None,
) -> GaloisInstance:
    """Read, validate and build an instance.

    Raises ``InstanceFormatError`` for syntax problems or a bad modulus and
    ``InstanceValidationError`` when an axiom fails.
    """
    config = config or Config()
    parts = validate_instance_file(path, config, prime)
    if not parts.ok:
        logger.info(f"Экземпляр {parts.path} не прошёл валидацию")
        raise InstanceValidationError(parts.reports)

    f = parts.file
    p = parts.prime
    coordinates = None
    if f.coordinates is not None:
        coordinates = GaloisCoordinates(tuple(
            (np.array(x, dtype=np.int64) % p, np.array(y, dtype=np.int64) % p) for x, y in f.coordinates
        ))

    logger.debug(f"Экземпляр {parts.path} прочитан: dim R = {parts.algebra.dim}, |G| = {parts.groupoid.size}")
    return GaloisInstance.build(
        parts.action,
        coordinates=coordinates,
        max_morphisms=config.max_morphisms,
        max_sg_subsets=config.max_sg_subsets,
        workers=config.workers,
        search_coordinates=config.search_coordinates,
        name=Path(path).name,
    )


def dumps_instance(action: GroupoidAction, coordinates: Optional[GaloisCoordinates] = None) -> str:
    """Serialise an action; structure constants and β entries are written sparsely."""
    g, a, p = action.groupoid, action.algebra, action.p
    names = a.basis_names
    out = [INSTANCE_HEADER, f"prime {p}", "", "[algebra]", "basis " + " ".join(names)]
    out.append("unit " + " ".join(str(int(v)) for v in a.unit))
    for i, j, k in zip(*np.nonzero(a.mul % p)):
        out.append(f"mul {names[i]} {names[j]} {names[k]} {int(a.mul[i, j, k] % p)}")

    out += ["", "[groupoid]"]
    for m in range(g.size):
        if g.is_identity(m):
            out.append(f"object {g.objects[g.dom[m]]}")
    for m in range(g.size):
        if not g.is_identity(m):
            out.append(f"morphism {g.names[m]} {g.objects[g.dom[m]]} {g.objects[g.ran[m]]} {g.names[g.inv[m]]}")
    for (x, y), xy in sorted(g.comp.items()):
        if not (g.is_identity(x) or g.is_identity(y)):
            out.append(f"compose {g.names[x]} {g.names[y]} {g.names[xy]}")

    out += ["", "[action]"]
    for obj, e in enumerate(action.idempotents):
        out.append(f"idempotent {g.objects[obj]} " + " ".join(str(int(v)) for v in e % p))
    for m in range(g.size):
        if g.is_identity(m):
            continue
        b = action.beta[m] % p
        for dst, src in zip(*np.nonzero(b)):
            out.append(f"beta {g.names[m]} {names[src]} {names[dst]} {int(b[dst, src])}")

    if coordinates is not None:
        out += ["", "[coordinates]"]
        for x, y in coordinates.to_lists():
            out.append("pair " + " ".join(map(str, x)) + " | " + " ".join(map(str, y)))
    return "\n".join(out) + "\n"


def write_instance(
    path: Union[str, Path],
    action: GroupoidAction,
    coordinates: Optional[GaloisCoordinates] = None,
) -> None:
    Path(path).write_text(dumps_instance(action, coordinates), encoding="utf-8")
    logger.debug(f"Экземпляр записан в {path}")


def list_fixtures() -> list[str]:
    return sorted(p.name[: -len(INSTANCE_SUFFIX)] for p in FIXTURES_DIR.glob(f"*{INSTANCE_SUFFIX}"))


def fixture_path(name: str) -> Path:
    path = FIXTURES_DIR / f"{name}{INSTANCE_SUFFIX}"
    if not path.exists():
        raise InstanceFormatError(f"unknown fixture {name!r}; available: {', '.join(list_fixtures())}")
    return path


def load_fixture(name: str, config: Optional[Config] = None) -> GaloisInstance:
    return parse_instance(fixture_path(name), config)


def load_expectation(name: str) -> dict:
    path = FIXTURES_DIR / f"{name}{EXPECTATION_SUFFIX}"
    with open(path, encoding="utf-8") as f:
        return json.load(f)
