"""Built-in blackbox implementations Γ_F (library functions) and Γ_P (method predicates)."""
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from app.errors import ConfigurationError, ContractViolation, DomainError
from app.logic.sorts import Sort
from app.runtime.values import LEAF, BatchedQueue, TreeNode, is_datatype_value, sequence_of


@dataclass(frozen=True)
class LibraryImpl:
    name: str
    impl: str
    params: tuple[Sort, ...]
    result: Sort
    evaluator: Callable


@dataclass(frozen=True)
class PredicateImpl:
    name: str
    impl: str
    signature: tuple[Sort, ...]
    evaluator: Callable[..., bool]


def well_sorted(sort: Sort, value) -> bool:
    if sort.is_boolean:
        return isinstance(value, bool)
    if sort.is_element:
        return isinstance(value, int) and not isinstance(value, bool)
    return is_datatype_value(sort.name, value)


def _check_args(name: str, sorts: Sequence[Sort], args: Sequence):
    if len(args) != len(sorts):
        raise ContractViolation(f"{name} expects {len(sorts)} arguments, got {len(args)}.")
    for sort, value in zip(sorts, args):
        if not well_sorted(sort, value):
            raise ContractViolation(f"{name}: {value!r} is not a value of sort {sort}.")


def eval_predicate(p: PredicateImpl, args: Sequence) -> bool:
    _check_args(p.name, p.signature, args)
    return bool(p.evaluator(*args))


def eval_library(f: LibraryImpl, args: Sequence):
    _check_args(f.name, f.params, args)
    return f.evaluator(*args)


# Predicates

def _head_is(seq: list, u) -> bool:
    return bool(seq) and seq[0] == u


def _occurs_after(seq: list, u, v) -> bool:
    """v occurs strictly after some occurrence of u."""
    for i, x in enumerate(seq):
        if x == u:
            return v in seq[i + 1:]
    return False


BUILTIN_PREDICATES: dict[str, tuple[tuple[str, ...], Callable[..., bool]]] = {
    "list-hd": (("list", "elem"), lambda l, u: _head_is(list(l), u)),
    "list-mem": (("list", "elem"), lambda l, u: u in l),
    "list-ord": (("list", "elem", "elem"), lambda l, u, v: _occurs_after(list(l), u, v)),
    "queue-hd": (("queue", "elem"), lambda q, u: _head_is(sequence_of(q), u)),
    "queue-mem": (("queue", "elem"), lambda q, u: u in sequence_of(q)),
    "queue-ord": (("queue", "elem", "elem"), lambda q, u, v: _occurs_after(sequence_of(q), u, v)),
    "tree-mem": (("tree", "elem"), lambda t, u: u in sequence_of(t)),
    "tree-root": (("tree", "elem"), lambda t, u: isinstance(t, TreeNode) and t.value == u),
    "tree-ord": (("tree", "elem", "elem"), lambda t, u, v: _occurs_after(sequence_of(t), u, v)),
    "elem-lt": (("elem", "elem"), lambda a, b: a < b),
    "elem-le": (("elem", "elem"), lambda a, b: a <= b),
    "elem-gt": (("elem", "elem"), lambda a, b: a > b),
    "elem-ge": (("elem", "elem"), lambda a, b: a >= b),
}


# Library functions

def _nonempty(s: tuple, op: str) -> tuple:
    if not s:
        raise DomainError(f"{op} of an empty list")
    return s


def _queue_nonempty(q: BatchedQueue, op: str) -> BatchedQueue:
    if not q.front:
        raise DomainError(f"{op} of an empty queue")
    return q


def _tree_node(t, op: str) -> TreeNode:
    if not isinstance(t, TreeNode):
        raise DomainError(f"{op} of a leaf")
    return t


def _bst_insert(x: int, t):
    if not isinstance(t, TreeNode):
        return TreeNode(x, LEAF, LEAF)
    if x < t.value:
        return TreeNode(t.value, _bst_insert(x, t.left), t.right)
    if x > t.value:
        return TreeNode(t.value, t.left, _bst_insert(x, t.right))
    return t


BUILTIN_FUNCTIONS: dict[str, tuple[tuple[str, ...], str, Callable]] = {
    "list-nil": ((), "list", lambda: ()),
    "list-push": (("elem", "list"), "list", lambda x, s: (x,) + s),
    "list-top": (("list",), "elem", lambda s: _nonempty(s, "top")[0]),
    "list-tail": (("list",), "list", lambda s: _nonempty(s, "tail")[1:]),
    "list-is-empty": (("list",), "bool", lambda s: len(s) == 0),
    "queue-empty": ((), "queue", lambda: BatchedQueue()),
    "queue-is-empty": (("queue",), "bool", lambda q: not q.front),
    "queue-snoc": (("queue", "elem"), "queue", lambda q, x: BatchedQueue.make(q.front, (x,) + q.rear)),
    "queue-head": (("queue",), "elem", lambda q: _queue_nonempty(q, "head").front[0]),
    "queue-tail": (("queue",), "queue", lambda q: BatchedQueue.make(_queue_nonempty(q, "tail").front[1:], q.rear)),
    "tree-leaf": ((), "tree", lambda: LEAF),
    "tree-maket": (("elem", "tree", "tree"), "tree", lambda x, l, r: TreeNode(x, l, r)),
    "tree-is-leaf": (("tree",), "bool", lambda t: not isinstance(t, TreeNode)),
    "tree-value": (("tree",), "elem", lambda t: _tree_node(t, "value").value),
    "tree-left": (("tree",), "tree", lambda t: _tree_node(t, "left").left),
    "tree-right": (("tree",), "tree", lambda t: _tree_node(t, "right").right),
    "tree-insert": (("elem", "tree"), "tree", _bst_insert),
}


def _sort_names(sorts: Sequence[Sort]) -> tuple[str, ...]:
    return tuple(str(s) for s in sorts)


def bind_predicate(name: str, impl: str, signature: Sequence[Sort]) -> PredicateImpl:
    if impl not in BUILTIN_PREDICATES:
        raise ConfigurationError(f"Unknown predicate implementation '{impl}'.")
    shape, fn = BUILTIN_PREDICATES[impl]
    if _sort_names(signature) != shape:
        raise ConfigurationError(
            f"Predicate '{name}' declared as ({' '.join(_sort_names(signature))}) but '{impl}' is ({' '.join(shape)})."
        )
    return PredicateImpl(name, impl, tuple(signature), fn)


def bind_library(name: str, impl: str, params: Sequence[Sort], result: Sort) -> LibraryImpl:
    if impl not in BUILTIN_FUNCTIONS:
        raise ConfigurationError(f"Unknown library implementation '{impl}'.")
    shape, result_shape, fn = BUILTIN_FUNCTIONS[impl]
    if _sort_names(params) != shape or str(result) != result_shape:
        raise ConfigurationError(
            f"Library '{name}' declared as ({' '.join(_sort_names(params))}) -> {result} "
            f"but '{impl}' is ({' '.join(shape)}) -> {result_shape}."
        )
    return LibraryImpl(name, impl, tuple(params), result, fn)
