"""Exception hierarchy. Axiom violations are reported, never raised."""

from typing import Optional, Sequence


class GroupoidalError(Exception):
    """Base class for every error raised by the package."""


class DimensionMismatchError(GroupoidalError, ValueError):
    """Operands have incompatible shapes or ambient dimensions."""


class UnknownObjectError(GroupoidalError, KeyError):
    """An object name or index is not part of the groupoid."""


class UnknownSubgroupoidError(GroupoidalError, KeyError):
    """A subgroupoid is not in the wide-subgroupoid list of an instance."""


class NotWideError(GroupoidalError):
    """An operation that needs a wide subgroupoid got a non-wide one."""


class PreconditionError(GroupoidalError):
    """A documented precondition of an operation does not hold."""


class EnumerationCapExceeded(GroupoidalError):
    """An exponential enumeration would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int, flag: str):
        self.what = what
        self.size = size
        self.cap = cap
        self.flag = flag
        super().__init__(
            f"{what}: size {size} exceeds cap {cap}; raise it with {flag}"
        )


class WellDefinednessError(GroupoidalError):
    """Members of one class disagree on a class-level map."""

    def __init__(self, map_name: str, members: Sequence[str], dims: Sequence[int]):
        self.map_name = map_name
        self.members = list(members)
        self.dims = list(dims)
        super().__init__(
            f"{map_name} is not constant on class {{{', '.join(self.members)}}}"
        )


class NotDirectSumError(GroupoidalError):
    """A sum of subspaces expected to be direct is not."""


class AssociativityError(GroupoidalError):
    """A constructed multiplication table is not associative."""


class InstanceFormatError(GroupoidalError):
    """Malformed instance file."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{where}{message}")


class InstanceValidationError(GroupoidalError):
    """Instance parsed but violates groupoid, algebra or action axioms."""

    def __init__(self, reports):
        self.reports = list(reports)
        failed = [r.subject for r in self.reports if not r.ok]
        super().__init__(f"axiom violations in: {', '.join(failed)}")
