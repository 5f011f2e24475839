from dataclasses import dataclass
from enum import Enum

from app.errors import ConfigurationError


class SortKind(str, Enum):
    CONTAINER = "container"
    ELEMENT = "element"
    BOOLEAN = "boolean"


@dataclass(frozen=True)
class Sort:
    kind: SortKind
    name: str | None = None  # datatype name for containers

    @property
    def is_container(self) -> bool:
        return self.kind is SortKind.CONTAINER

    @property
    def is_element(self) -> bool:
        return self.kind is SortKind.ELEMENT

    @property
    def is_boolean(self) -> bool:
        return self.kind is SortKind.BOOLEAN

    def __str__(self) -> str:
        if self.kind is SortKind.CONTAINER:
            return self.name
        return "elem" if self.kind is SortKind.ELEMENT else "bool"


ELEMENT = Sort(SortKind.ELEMENT)
BOOLEAN = Sort(SortKind.BOOLEAN)


def container(name: str) -> Sort:
    return Sort(SortKind.CONTAINER, name)


def resolve_sort(name: str, datatypes) -> Sort:
    """Map a sort name from a configuration to a Sort."""
    if name == "elem":
        return ELEMENT
    if name == "bool":
        return BOOLEAN
    if name in datatypes:
        return container(name)
    raise ConfigurationError(f"Unknown sort '{name}'.")


class Role(str, Enum):
    PARAM = "param"
    RESULT = "result"
    QUANTIFIED = "quantified"


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort
    role: Role = Role.PARAM

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class MethodPredicate:
    """An observation on a datatype value; the container comes first, then element positions.

    Comparison predicates over two elements (no container) are also allowed; they may
    appear in assertions but never become features.
    """

    name: str
    signature: tuple[Sort, ...]

    def __post_init__(self):
        if len(self.signature) < 2:
            raise ConfigurationError(f"Predicate '{self.name}' needs arity >= 2.")
        containers = [s for s in self.signature if s.is_container]
        if self.is_comparison:
            return
        if len(containers) != 1 or not self.signature[0].is_container:
            raise ConfigurationError(
                f"Predicate '{self.name}' must have exactly one container position, placed first."
            )
        if not all(s.is_element for s in self.signature[1:]):
            raise ConfigurationError(f"Predicate '{self.name}' may only take elements after its container.")

    @property
    def is_comparison(self) -> bool:
        return len(self.signature) == 2 and all(s.is_element for s in self.signature)

    @property
    def element_arity(self) -> int:
        return len(self.signature) - (0 if self.is_comparison else 1)


QUANTIFIED_NAMES = ("u", "v", "w")


def quantified_vars(count: int) -> tuple[Var, ...]:
    """Fresh quantified variables u, v, w, u3, u4, ... in a stable order."""
    names = [QUANTIFIED_NAMES[i] if i < len(QUANTIFIED_NAMES) else f"u{i}" for i in range(count)]
    return tuple(Var(n, ELEMENT, Role.QUANTIFIED) for n in names)


def is_reserved_name(name: str) -> bool:
    if name in QUANTIFIED_NAMES:
        return True
    return len(name) > 1 and name[0] == "u" and name[1:].isdigit()
