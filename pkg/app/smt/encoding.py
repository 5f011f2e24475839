"""Translation of sentences into EPR problems in SMT-LIB v2 text.

The queried sentence is negated, put in negation normal form and its outermost
existentials are Skolemized into element constants, so the assertion only has
universal quantifiers. A domain-closure axiom pins the element universe to the
declared constants, which makes every model finite and directly decodable.
"""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from app.errors import ContractViolation
from app.logic.formula import (
    And,
    AtomT,
    BoolAtom,
    Const,
    ConstEq,
    Exists,
    Forall,
    Iff,
    Implies,
    Lit,
    Node,
    Not,
    Or,
    PredApp,
    VarEq,
    atoms_of,
    conj,
    disj,
    free_vars,
    quantifier_width,
    rename,
    walk,
)
from app.logic.sorts import ELEMENT, MethodPredicate, Role, Sort, Var

SKOLEM_PREFIX = "sk!"


def nnf(node: Node, positive: bool = True) -> Node:
    if isinstance(node, Const):
        return Const(node.value == positive)
    if isinstance(node, Lit):
        return node if positive else Not(node)
    if isinstance(node, Not):
        return nnf(node.arg, not positive)
    if isinstance(node, And):
        parts = [nnf(a, positive) for a in node.args]
        return conj(*parts) if positive else disj(*parts)
    if isinstance(node, Or):
        parts = [nnf(a, positive) for a in node.args]
        return disj(*parts) if positive else conj(*parts)
    if isinstance(node, Implies):
        if positive:
            return disj(nnf(node.lhs, False), nnf(node.rhs, True))
        return conj(nnf(node.lhs, True), nnf(node.rhs, False))
    if isinstance(node, Iff):
        lhs_t, lhs_f = nnf(node.lhs, True), nnf(node.lhs, False)
        rhs_t, rhs_f = nnf(node.rhs, True), nnf(node.rhs, False)
        if positive:
            return disj(conj(lhs_t, rhs_t), conj(lhs_f, rhs_f))
        return disj(conj(lhs_t, rhs_f), conj(lhs_f, rhs_t))
    body = nnf(node.body, positive)
    universal = isinstance(node, Forall) == positive
    if isinstance(body, Const):
        return body
    return Forall(node.vars, body) if universal else Exists(node.vars, body)


def skolemize(node: Node, counter: list[int] | None = None, under_forall: bool = False) -> Node:
    """Replace top-level existentials of an NNF sentence by fresh constants."""
    counter = counter if counter is not None else [0]
    if isinstance(node, (Const, Lit, Not)):
        return node
    if isinstance(node, And):
        return conj(*(skolemize(a, counter, under_forall) for a in node.args))
    if isinstance(node, Or):
        return disj(*(skolemize(a, counter, under_forall) for a in node.args))
    if isinstance(node, Forall):
        return Forall(node.vars, skolemize(node.body, counter, True))
    if isinstance(node, Exists):
        if under_forall:
            raise ContractViolation("An existential under a universal leaves the EPR fragment.")
        mapping = {}
        for v in node.vars:
            mapping[v] = Var(f"{SKOLEM_PREFIX}{counter[0]}", v.sort, Role.PARAM)
            counter[0] += 1
        return skolemize(rename(node.body, mapping), counter, under_forall)
    raise ContractViolation(f"Sentence is not in negation normal form: {type(node).__name__}.")


def sort_symbol(sort: Sort) -> str:
    if sort.is_element:
        return "Elem"
    if sort.is_boolean:
        return "Bool"
    return f"D_{sort.name}"


def const_symbol(var: Var) -> str:
    return f"v_{var.name}"


def pred_symbol(pred: MethodPredicate) -> str:
    return f"p_{pred.name}"


def literal_symbol(value: int) -> str:
    return f"lit_{value}" if value >= 0 else f"lit_m{-value}"


@dataclass(frozen=True)
class SmtSymbol:
    symbol: str
    sort: Sort
    var: str | None = None
    literal: int | None = None


@dataclass(frozen=True)
class SmtQuery:
    declarations: tuple[str, ...]
    assertions: tuple[str, ...]
    symbols: tuple[SmtSymbol, ...]
    predicates: tuple[MethodPredicate, ...]
    timeout_ms: int

    def script(self) -> str:
        header = (
            "(set-option :produce-models true)",
            f"(set-option :timeout {self.timeout_ms})",
            "(set-logic UF)",
        )
        return "\n".join(header + self.declarations + self.assertions) + "\n"

    def of_sort(self, sort: Sort) -> list[SmtSymbol]:
        return [s for s in self.symbols if s.sort == sort]


def _term(var: Var, bound: frozenset[str]) -> str:
    return f"q_{var.name}" if var.name in bound else const_symbol(var)


def _atom(atom: AtomT, bound: frozenset[str]) -> str:
    if isinstance(atom, PredApp):
        return f"({pred_symbol(atom.pred)} {' '.join(_term(a, bound) for a in atom.args)})"
    if isinstance(atom, VarEq):
        return f"(= {_term(atom.lhs, bound)} {_term(atom.rhs, bound)})"
    if isinstance(atom, BoolAtom):
        return _term(atom.var, bound)
    if isinstance(atom.value, bool):
        term = _term(atom.var, bound)
        return term if atom.value else f"(not {term})"
    return f"(= {_term(atom.var, bound)} {literal_symbol(atom.value)})"


def emit(node: Node, bound: frozenset[str] = frozenset()) -> str:
    if isinstance(node, Const):
        return "true" if node.value else "false"
    if isinstance(node, Lit):
        return _atom(node.atom, bound)
    if isinstance(node, Not):
        return f"(not {emit(node.arg, bound)})"
    if isinstance(node, And):
        return f"(and {' '.join(emit(a, bound) for a in node.args)})"
    if isinstance(node, Or):
        return f"(or {' '.join(emit(a, bound) for a in node.args)})"
    if isinstance(node, Implies):
        return f"(=> {emit(node.lhs, bound)} {emit(node.rhs, bound)})"
    if isinstance(node, Iff):
        return f"(= {emit(node.lhs, bound)} {emit(node.rhs, bound)})"
    inner = bound | {v.name for v in node.vars}
    binders = " ".join(f"(q_{v.name} {sort_symbol(v.sort)})" for v in node.vars)
    keyword = "forall" if isinstance(node, Forall) else "exists"
    return f"({keyword} ({binders}) {emit(node.body, inner)})"


def _literals_of(node: Node) -> list[int]:
    found: dict[int, None] = {}
    for atom in atoms_of(node):
        if isinstance(atom, ConstEq) and not isinstance(atom.value, bool):
            found.setdefault(atom.value, None)
    return sorted(found)


def _predicates_of(node: Node, declared: Iterable[MethodPredicate]) -> list[MethodPredicate]:
    preds = {p.name: p for p in declared}
    for sub in walk(node):
        if isinstance(sub, Lit) and isinstance(sub.atom, PredApp):
            preds.setdefault(sub.atom.pred.name, sub.atom.pred)
    return list(preds.values())


def encode(
    sentence: Node, predicates: Sequence[MethodPredicate], timeout_ms: int, housed: Sequence[Var] = ()
) -> SmtQuery:
    """The satisfiability problem for ¬sentence; unsat means the sentence is valid.

    ``housed`` variables are declared even when the sentence does not mention them, so
    that a model assigns every variable of the query it came from.
    """
    negated = skolemize(nnf(sentence, positive=False))
    width = max(1, quantifier_width(sentence))

    program_by_name = {v.name: v for v in housed}
    program_by_name.update((v.name, v) for v in free_vars(negated))
    program = sorted(program_by_name.values(), key=lambda v: v.name)
    literals = _literals_of(negated)
    preds = _predicates_of(negated, predicates)

    symbols: list[SmtSymbol] = [SmtSymbol(const_symbol(v), v.sort, var=v.name) for v in program]
    symbols += [SmtSymbol(literal_symbol(n), ELEMENT, literal=n) for n in literals]
    symbols += [SmtSymbol(f"e_{i}", ELEMENT) for i in range(width)]

    sorts = {s.sort for s in symbols if not s.sort.is_boolean}
    sorts |= {sort for p in preds for sort in p.signature}
    sorts.add(ELEMENT)

    declarations = [f"(declare-sort {sort_symbol(s)} 0)" for s in sorted(sorts, key=sort_symbol)]
    declarations += [
        f"(declare-fun {pred_symbol(p)} ({' '.join(sort_symbol(s) for s in p.signature)}) Bool)" for p in preds
    ]
    declarations += [f"(declare-const {s.symbol} {sort_symbol(s.sort)})" for s in symbols]

    assertions = []
    if len(literals) > 1:
        assertions.append(f"(assert (distinct {' '.join(literal_symbol(n) for n in literals)}))")
    elements = [s.symbol for s in symbols if s.sort.is_element]
    cases = [f"(= x!c {e})" for e in elements]
    closure = cases[0] if len(cases) == 1 else f"(or {' '.join(cases)})"
    assertions.append(f"(assert (forall ((x!c Elem)) {closure}))")
    assertions.append(f"(assert {emit(negated)})")

    return SmtQuery(tuple(declarations), tuple(assertions), tuple(symbols), tuple(preds), timeout_ms)
