from collections.abc import Hashable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Label(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNLABELED = "unlabeled"


@dataclass(frozen=True, order=True)
class FreshElement:
    """An element value guaranteed not to occur in any sample."""

    index: int = 0

    def __repr__(self) -> str:
        return f"<fresh{self.index}>"


@dataclass(frozen=True)
class Sample:
    """A variable assignment plus one finite relation per method predicate.

    Relations are closed-world: a tuple absent from ``relations[p]`` is false.
    ``elements`` is the element universe quantifiers range over.
    """

    assignment: Mapping[str, Hashable]
    relations: Mapping[str, frozenset[tuple]]
    elements: frozenset = frozenset()
    label: Label = Label.UNLABELED
    literals: Mapping[Any, Hashable] = field(default_factory=dict)
    apps: tuple = ()
    origin: str | None = None

    def relation(self, name: str) -> frozenset[tuple]:
        return self.relations.get(name, frozenset())

    def literal(self, value):
        return self.literals.get(value, value)

    def with_label(self, label: Label, origin: str | None = None) -> "Sample":
        return Sample(
            self.assignment,
            self.relations,
            self.elements,
            label,
            self.literals,
            self.apps,
            origin if origin is not None else self.origin,
        )
