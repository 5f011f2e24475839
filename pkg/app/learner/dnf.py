"""Two-level minimization of hypothesis-space formulas with sympy."""
from collections.abc import Sequence

from sympy import And, Equivalent, Implies, Not, Or, Symbol
from sympy.logic.boolalg import BooleanFalse, BooleanTrue, false, simplify_logic, to_dnf, true

from app.errors import ContractViolation
from app.logic import formula as fm
from app.logic.formula import Formula, conj, disj, lit

Cube = tuple[tuple[int, bool], ...]


def _literal(term, index: dict[Symbol, int]) -> tuple[int, bool]:
    if isinstance(term, Not):
        return index[term.args[0]], False
    return index[term], True


def _cube(term, index: dict[Symbol, int]) -> Cube:
    parts = term.args if isinstance(term, And) else (term,)
    return tuple(sorted(_literal(p, index) for p in parts))


EXACT_LIMIT = 8


def _absorb(cubes: set[Cube]) -> list[Cube]:
    consistent = {c for c in cubes if len({i for i, _ in c}) == len(c)}
    return sorted(c for c in consistent if not any(o != c and set(o) <= set(c) for o in consistent))


def _cubes_of(expr, index: dict[Symbol, int]) -> list[Cube]:
    if len(expr.free_symbols) <= EXACT_LIMIT:
        simplified = simplify_logic(expr, form="dnf", force=True)
    else:
        # too wide for Quine-McCluskey; keep a flat DNF
        simplified = to_dnf(expr)
    if isinstance(simplified, BooleanTrue):
        return [()]
    if isinstance(simplified, BooleanFalse):
        return []
    terms = simplified.args if isinstance(simplified, Or) else (simplified,)
    return _absorb({_cube(t, index) for t in terms})


def _symbols(width: int) -> list[Symbol]:
    return [Symbol(f"f{i}") for i in range(width)]


def minimize(cubes: Sequence[Cube], width: int) -> list[Cube]:
    """An equivalent sum of products over feature indices."""
    if not cubes:
        return []
    if any(len(c) == 0 for c in cubes):
        return [()]
    symbols = _symbols(width)
    index = {s: i for i, s in enumerate(symbols)}
    expr = Or(*(And(*(symbols[i] if value else Not(symbols[i]) for i, value in cube)) for cube in cubes))
    return _cubes_of(expr, index)


def _to_sympy(node: fm.Node, symbols: dict):
    if isinstance(node, fm.Const):
        return true if node.value else false
    if isinstance(node, fm.Lit):
        if node.atom not in symbols:
            raise ContractViolation(f"{fm.render_atom(node.atom)} is not a feature.")
        return symbols[node.atom]
    if isinstance(node, fm.Not):
        return Not(_to_sympy(node.arg, symbols))
    if isinstance(node, fm.And):
        return And(*(_to_sympy(a, symbols) for a in node.args))
    if isinstance(node, fm.Or):
        return Or(*(_to_sympy(a, symbols) for a in node.args))
    if isinstance(node, fm.Implies):
        return Implies(_to_sympy(node.lhs, symbols), _to_sympy(node.rhs, symbols))
    if isinstance(node, fm.Iff):
        return Equivalent(_to_sympy(node.lhs, symbols), _to_sympy(node.rhs, symbols))
    raise ContractViolation("Hypothesis-space bodies are quantifier-free.")


def from_cubes(cubes: Sequence[Cube], features: Sequence) -> fm.Node:
    return disj(*(conj(*(lit(features[i], value) for i, value in cube)) for cube in cubes))


def simplify(phi: Formula) -> Formula:
    """The minimal DNF of a hypothesis-space formula; classification is unchanged."""
    feature_set = phi.feature_set
    symbols = _symbols(len(feature_set))
    by_atom = dict(zip(feature_set.features, symbols))
    index = {s: i for i, s in enumerate(symbols)}
    cubes = _cubes_of(_to_sympy(phi.body, by_atom), index)
    return Formula(phi.quantified, from_cubes(cubes, feature_set.features), feature_set)
