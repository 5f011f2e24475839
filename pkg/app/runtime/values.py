"""Concrete values of the built-in datatypes.

Elements are small integers, lists are tuples, queues are front/rear pairs and
trees are Node/Leaf. All values are immutable and hashable so they can sit in
relation tuples directly.
"""
from dataclasses import dataclass
from typing import Union

from app.errors import ConfigurationError

BUILTIN_DATATYPES = ("list", "queue", "tree")


@dataclass(frozen=True)
class Leaf:
    def __repr__(self) -> str:
        return "Leaf"


LEAF = Leaf()


@dataclass(frozen=True)
class TreeNode:
    value: int
    left: "Tree"
    right: "Tree"

    def __repr__(self) -> str:
        return f"Node({self.value}, {self.left!r}, {self.right!r})"


Tree = Union[Leaf, TreeNode]


@dataclass(frozen=True)
class BatchedQueue:
    """Front list plus reversed rear list; the front is empty only when the whole queue is."""

    front: tuple[int, ...] = ()
    rear: tuple[int, ...] = ()

    @classmethod
    def make(cls, front: tuple, rear: tuple) -> "BatchedQueue":
        if not front:
            return cls(tuple(reversed(rear)), ())
        return cls(tuple(front), tuple(rear))

    def items(self) -> tuple[int, ...]:
        return self.front + tuple(reversed(self.rear))

    def __repr__(self) -> str:
        return f"Queue{list(self.items())}"


def tree_inorder(tree: Tree) -> list[int]:
    out: list[int] = []
    stack: list = []
    node = tree
    while stack or isinstance(node, TreeNode):
        while isinstance(node, TreeNode):
            stack.append(node)
            node = node.left
        node = stack.pop()
        out.append(node.value)
        node = node.right
    return out


def sequence_of(value) -> list[int]:
    """The elements of a container in its natural order."""
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, BatchedQueue):
        return list(value.items())
    if isinstance(value, (Leaf, TreeNode)):
        return tree_inorder(value)
    raise ConfigurationError(f"Not a container value: {value!r}")


def elements_of(value) -> set[int]:
    if isinstance(value, bool):
        return set()
    if isinstance(value, int):
        return {value}
    return set(sequence_of(value))


def is_datatype_value(datatype: str, value) -> bool:
    if datatype == "list":
        return isinstance(value, tuple)
    if datatype == "queue":
        return isinstance(value, BatchedQueue)
    if datatype == "tree":
        return isinstance(value, (Leaf, TreeNode))
    return False


def show(value) -> str:
    """Human-readable value, lists in the [a;b] notation."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return "[" + ";".join(str(x) for x in value) + "]"
    return repr(value)


def to_json(value):
    if isinstance(value, (bool, int)):
        return value
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, BatchedQueue):
        return {"queue": list(value.items())}
    if isinstance(value, Leaf):
        return {"tree": None}
    return {"tree": [value.value, to_json(value.left), to_json(value.right)]}
