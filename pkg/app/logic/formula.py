"""Sentences and hypothesis-space formulas.

One tree type serves three purposes: client assertions (Φ), the bodies of learned
specifications, and the sentences handed to the solver. Atoms are method-predicate
applications, equalities and Boolean-sorted variables.
"""
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from itertools import product
from typing import TYPE_CHECKING, Union

from app.errors import ContractViolation
from app.logic.sample import Sample
from app.logic.sorts import MethodPredicate, Var

if TYPE_CHECKING:
    from app.logic.features import FeatureSet


@dataclass(frozen=True)
class PredApp:
    pred: MethodPredicate
    args: tuple[Var, ...]

    def __post_init__(self):
        if len(self.args) != len(self.pred.signature):
            raise ContractViolation(f"{self.pred.name} expects {len(self.pred.signature)} arguments.")
        for arg, sort in zip(self.args, self.pred.signature):
            if arg.sort != sort:
                raise ContractViolation(f"{self.pred.name}: argument '{arg.name}' has sort {arg.sort}, expected {sort}.")


@dataclass(frozen=True)
class VarEq:
    lhs: Var
    rhs: Var

    def __post_init__(self):
        if self.lhs.sort != self.rhs.sort:
            raise ContractViolation(f"Cannot equate '{self.lhs.name}' and '{self.rhs.name}' of different sorts.")


@dataclass(frozen=True)
class BoolAtom:
    var: Var


@dataclass(frozen=True)
class ConstEq:
    var: Var
    value: bool | int


AtomT = Union[PredApp, VarEq, BoolAtom, ConstEq]


class Node:
    """Base class of the sentence tree."""


@dataclass(frozen=True)
class Const(Node):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Lit(Node):
    atom: AtomT


@dataclass(frozen=True)
class Not(Node):
    arg: Node


@dataclass(frozen=True)
class And(Node):
    args: tuple[Node, ...]


@dataclass(frozen=True)
class Or(Node):
    args: tuple[Node, ...]


@dataclass(frozen=True)
class Implies(Node):
    lhs: Node
    rhs: Node


@dataclass(frozen=True)
class Iff(Node):
    lhs: Node
    rhs: Node


@dataclass(frozen=True)
class Forall(Node):
    vars: tuple[Var, ...]
    body: Node


@dataclass(frozen=True)
class Exists(Node):
    vars: tuple[Var, ...]
    body: Node


# Smart constructors used by the engine; the parser builds nodes verbatim.

def conj(*args: Node) -> Node:
    flat: list[Node] = []
    for arg in args:
        if arg == TRUE:
            continue
        if arg == FALSE:
            return FALSE
        flat.extend(arg.args if isinstance(arg, And) else (arg,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args: Node) -> Node:
    flat: list[Node] = []
    for arg in args:
        if arg == FALSE:
            continue
        if arg == TRUE:
            return TRUE
        flat.extend(arg.args if isinstance(arg, Or) else (arg,))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def neg(arg: Node) -> Node:
    if isinstance(arg, Const):
        return Const(not arg.value)
    if isinstance(arg, Not):
        return arg.arg
    return Not(arg)


def implies(lhs: Node, rhs: Node) -> Node:
    if lhs == TRUE:
        return rhs
    if lhs == FALSE or rhs == TRUE:
        return TRUE
    return Implies(lhs, rhs)


def forall(vars_: Iterable[Var], body: Node) -> Node:
    vars_ = tuple(vars_)
    if not vars_ or isinstance(body, Const):
        return body
    return Forall(vars_, body)


def lit(atom: AtomT, positive: bool = True) -> Node:
    return Lit(atom) if positive else Not(Lit(atom))


def children(node: Node) -> tuple[Node, ...]:
    if isinstance(node, (And, Or)):
        return node.args
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (Implies, Iff)):
        return (node.lhs, node.rhs)
    if isinstance(node, (Forall, Exists)):
        return (node.body,)
    return ()


def walk(node: Node) -> Iterator[Node]:
    yield node
    for child in children(node):
        yield from walk(child)


def atoms_of(node: Node) -> list[AtomT]:
    seen: dict[AtomT, None] = {}
    for sub in walk(node):
        if isinstance(sub, Lit):
            seen.setdefault(sub.atom, None)
    return list(seen)


def atom_vars(atom: AtomT) -> tuple[Var, ...]:
    if isinstance(atom, PredApp):
        return atom.args
    if isinstance(atom, VarEq):
        return (atom.lhs, atom.rhs)
    return (atom.var,)


def free_vars(node: Node, bound: frozenset = frozenset()) -> set[Var]:
    if isinstance(node, Lit):
        return {v for v in atom_vars(node.atom) if v.name not in bound}
    if isinstance(node, (Forall, Exists)):
        return free_vars(node.body, bound | {v.name for v in node.vars})
    found: set[Var] = set()
    for child in children(node):
        found |= free_vars(child, bound)
    return found


def quantifier_width(node: Node) -> int:
    width = 0
    for sub in walk(node):
        if isinstance(sub, (Forall, Exists)):
            width = max(width, len(sub.vars))
    return width


def rename_atom(atom: AtomT, mapping: Mapping[Var, Var]) -> AtomT:
    def r(v: Var) -> Var:
        return mapping.get(v, v)

    if isinstance(atom, PredApp):
        return PredApp(atom.pred, tuple(r(a) for a in atom.args))
    if isinstance(atom, VarEq):
        return VarEq(r(atom.lhs), r(atom.rhs))
    if isinstance(atom, BoolAtom):
        return BoolAtom(r(atom.var))
    return ConstEq(r(atom.var), atom.value)


def rename(node: Node, mapping: Mapping[Var, Var]) -> Node:
    """Rename free occurrences of variables; bound variables shadow the mapping."""
    if not mapping:
        return node
    if isinstance(node, Const):
        return node
    if isinstance(node, Lit):
        return Lit(rename_atom(node.atom, mapping))
    if isinstance(node, Not):
        return Not(rename(node.arg, mapping))
    if isinstance(node, And):
        return And(tuple(rename(a, mapping) for a in node.args))
    if isinstance(node, Or):
        return Or(tuple(rename(a, mapping) for a in node.args))
    if isinstance(node, Implies):
        return Implies(rename(node.lhs, mapping), rename(node.rhs, mapping))
    if isinstance(node, Iff):
        return Iff(rename(node.lhs, mapping), rename(node.rhs, mapping))
    bound = {v.name for v in node.vars}
    inner = {k: v for k, v in mapping.items() if k.name not in bound}
    return type(node)(node.vars, rename(node.body, inner))


def map_atoms(node: Node, fn: Callable[[AtomT], Node]) -> Node:
    """Replace every literal by fn(atom); used for feature-to-symbol translation."""
    if isinstance(node, Const):
        return node
    if isinstance(node, Lit):
        return fn(node.atom)
    if isinstance(node, Not):
        return Not(map_atoms(node.arg, fn))
    if isinstance(node, And):
        return And(tuple(map_atoms(a, fn) for a in node.args))
    if isinstance(node, Or):
        return Or(tuple(map_atoms(a, fn) for a in node.args))
    if isinstance(node, Implies):
        return Implies(map_atoms(node.lhs, fn), map_atoms(node.rhs, fn))
    if isinstance(node, Iff):
        return Iff(map_atoms(node.lhs, fn), map_atoms(node.rhs, fn))
    return type(node)(node.vars, map_atoms(node.body, fn))


# Evaluation

def truth(node: Node, valuation: Callable[[AtomT], bool]) -> bool:
    """Propositional evaluation; quantifiers are not allowed here."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Lit):
        return valuation(node.atom)
    if isinstance(node, Not):
        return not truth(node.arg, valuation)
    if isinstance(node, And):
        return all(truth(a, valuation) for a in node.args)
    if isinstance(node, Or):
        return any(truth(a, valuation) for a in node.args)
    if isinstance(node, Implies):
        return (not truth(node.lhs, valuation)) or truth(node.rhs, valuation)
    if isinstance(node, Iff):
        return truth(node.lhs, valuation) == truth(node.rhs, valuation)
    raise ContractViolation("Quantifier found where a propositional body was expected.")


def atom_holds(atom: AtomT, sample: Sample, env: Mapping[str, object] | None = None) -> bool:
    env = env or {}

    def value(v: Var):
        if v.name in env:
            return env[v.name]
        if v.name not in sample.assignment:
            raise ContractViolation(f"Variable '{v.name}' is not assigned by the sample.")
        return sample.assignment[v.name]

    if isinstance(atom, PredApp):
        return tuple(value(a) for a in atom.args) in sample.relation(atom.pred.name)
    if isinstance(atom, VarEq):
        return value(atom.lhs) == value(atom.rhs)
    if isinstance(atom, BoolAtom):
        return value(atom.var) is True
    if atom.var.sort.is_boolean:
        return value(atom.var) is atom.value
    return value(atom.var) == sample.literal(atom.value)


def holds(node: Node, sample: Sample, env: Mapping[str, object] | None = None) -> bool:
    """Closed-world evaluation; quantifiers range over the sample's element universe."""
    env = dict(env or {})
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Lit):
        return atom_holds(node.atom, sample, env)
    if isinstance(node, Not):
        return not holds(node.arg, sample, env)
    if isinstance(node, And):
        return all(holds(a, sample, env) for a in node.args)
    if isinstance(node, Or):
        return any(holds(a, sample, env) for a in node.args)
    if isinstance(node, Implies):
        return (not holds(node.lhs, sample, env)) or holds(node.rhs, sample, env)
    if isinstance(node, Iff):
        return holds(node.lhs, sample, env) == holds(node.rhs, sample, env)
    domain = sorted(sample.elements, key=repr)
    results = (
        holds(node.body, sample, {**env, **{v.name: x for v, x in zip(node.vars, values)}})
        for values in product(domain, repeat=len(node.vars))
    )
    return all(results) if isinstance(node, Forall) else any(results)


# Printing

_UNARY_SYMBOLS = {True: "⊤", False: "⊥"}


def render_atom(atom: AtomT) -> str:
    if isinstance(atom, PredApp):
        return f"{atom.pred.name}({','.join(a.name for a in atom.args)})"
    if isinstance(atom, VarEq):
        return f"{atom.lhs.name}={atom.rhs.name}"
    if isinstance(atom, BoolAtom):
        return atom.var.name
    if isinstance(atom.value, bool):
        return f"{atom.var.name}={_UNARY_SYMBOLS[atom.value]}"
    return f"{atom.var.name}={atom.value}"


def render(node: Node) -> str:
    def wrap(child: Node) -> str:
        text = render(child)
        return text if isinstance(child, (Const, Lit, Not)) else f"({text})"

    if isinstance(node, Const):
        return _UNARY_SYMBOLS[node.value]
    if isinstance(node, Lit):
        return render_atom(node.atom)
    if isinstance(node, Not):
        return f"¬{wrap(node.arg)}"
    if isinstance(node, And):
        return " ∧ ".join(wrap(a) for a in node.args)
    if isinstance(node, Or):
        return " ∨ ".join(wrap(a) for a in node.args)
    if isinstance(node, Implies):
        return f"{wrap(node.lhs)} ⟹ {wrap(node.rhs)}"
    if isinstance(node, Iff):
        return f"{wrap(node.lhs)} ⟺ {wrap(node.rhs)}"
    symbol = "∀" if isinstance(node, Forall) else "∃"
    return f"{symbol}{' '.join(v.name for v in node.vars)}, {render(node.body)}"


def atom_to_sexpr(atom: AtomT) -> str:
    if isinstance(atom, PredApp):
        return f"({atom.pred.name} {' '.join(a.name for a in atom.args)})"
    if isinstance(atom, VarEq):
        return f"(= {atom.lhs.name} {atom.rhs.name})"
    if isinstance(atom, BoolAtom):
        return atom.var.name
    value = ("true" if atom.value else "false") if isinstance(atom.value, bool) else str(atom.value)
    return f"(= {atom.var.name} {value})"


def to_sexpr(node: Node) -> str:
    if isinstance(node, Const):
        return "true" if node.value else "false"
    if isinstance(node, Lit):
        return atom_to_sexpr(node.atom)
    if isinstance(node, Not):
        return f"(not {to_sexpr(node.arg)})"
    if isinstance(node, And):
        return f"(and {' '.join(to_sexpr(a) for a in node.args)})"
    if isinstance(node, Or):
        return f"(or {' '.join(to_sexpr(a) for a in node.args)})"
    if isinstance(node, Implies):
        return f"(implies {to_sexpr(node.lhs)} {to_sexpr(node.rhs)})"
    if isinstance(node, Iff):
        return f"(iff {to_sexpr(node.lhs)} {to_sexpr(node.rhs)})"
    keyword = "forall" if isinstance(node, Forall) else "exists"
    binders = " ".join(f"({v.name} {v.sort})" for v in node.vars)
    return f"({keyword} ({binders}) {to_sexpr(node.body)})"


@dataclass(frozen=True)
class Formula:
    """A hypothesis-space element: ∀quantified, body, with body atoms drawn from a FeatureSet."""

    quantified: tuple[Var, ...]
    body: Node
    feature_set: "FeatureSet | None" = field(default=None, compare=False)

    @classmethod
    def top(cls, feature_set: "FeatureSet") -> "Formula":
        return cls(feature_set.quantified, TRUE, feature_set)

    @classmethod
    def bottom(cls, feature_set: "FeatureSet") -> "Formula":
        return cls(feature_set.quantified, FALSE, feature_set)

    @property
    def is_bottom(self) -> bool:
        return self.body == FALSE

    def sentence(self) -> Node:
        return forall(self.quantified, self.body)

    def instantiate(self, mapping: Mapping[Var, Var]) -> Node:
        """The closed-over-u sentence with formal variables replaced by actual ones."""
        return forall(self.quantified, rename(self.body, mapping))

    def render(self) -> str:
        if not self.quantified:
            return render(self.body)
        return f"∀{' '.join(v.name for v in self.quantified)}, {render(self.body)}"

    def to_sexpr(self) -> str:
        return to_sexpr(self.sentence())

    def __str__(self) -> str:
        return self.render()
