from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

from app.errors import ContractViolation
from app.logic.features import FeatureSet, positive_vectors
from app.logic.formula import AtomT, Formula, Lit, Node, conj, free_vars
from app.logic.sorts import Var


@dataclass(frozen=True)
class PlaceholderApp:
    """R_f(args, result) inside a verification query."""

    function: str
    args: tuple[Var, ...]
    result: Var


@dataclass(frozen=True)
class CallStep:
    app: PlaceholderApp


@dataclass(frozen=True)
class ContractCallStep:
    """A call to a client function whose contract is assumed rather than inferred."""

    client: str
    args: tuple[Var, ...]
    result: Var


@dataclass(frozen=True)
class GuardStep:
    var: Var
    value: bool


@dataclass(frozen=True)
class VerificationQuery:
    """(Σ, Φ) for one control-flow path of a client.

    Σ is ``apps`` plus ``constraints``; ``steps`` replays the path concretely.
    """

    name: str
    apps: tuple[PlaceholderApp, ...]
    constraints: tuple[AtomT, ...]
    phi: Node
    inputs: tuple[Var, ...] = ()
    auxiliaries: tuple[Var, ...] = ()
    steps: tuple = ()
    client: str | None = None

    @property
    def functions(self) -> list[str]:
        return list(dict.fromkeys(app.function for app in self.apps))

    def apps_of(self, function: str) -> list[PlaceholderApp]:
        return [app for app in self.apps if app.function == function]

    def housed_variables(self) -> tuple[Var, ...]:
        """Inputs, application arguments and results, and auxiliaries, each once and in that order."""
        found: dict[str, Var] = {v.name: v for v in self.inputs}
        for app in self.apps:
            for v in (*app.args, app.result):
                found.setdefault(v.name, v)
        for v in self.auxiliaries:
            found.setdefault(v.name, v)
        return tuple(found.values())

    def housed_vars(self) -> set[str]:
        return {v.name for v in self.housed_variables()}

    def validate(self):
        housed = self.housed_vars()
        stray = sorted(v.name for v in free_vars(self.phi) if v.name not in housed)
        if stray:
            raise ContractViolation(f"Query {self.name}: unbound variables in Φ: {', '.join(stray)}.")
        results = [app.result for app in self.apps]
        if len(set(results)) != len(results):
            raise ContractViolation(f"Query {self.name}: a result variable is reused.")


@dataclass(frozen=True)
class VerificationInterface:
    specs: Mapping[str, Formula] = field(default_factory=dict)

    def __getitem__(self, function: str) -> Formula:
        try:
            return self.specs[function]
        except KeyError:
            raise ContractViolation(f"The interface has no specification for '{function}'.")

    def __contains__(self, function: str) -> bool:
        return function in self.specs

    @property
    def functions(self) -> list[str]:
        return list(self.specs)

    def replace(self, function: str, spec: Formula) -> "VerificationInterface":
        specs = dict(self.specs)
        specs[function] = spec
        return VerificationInterface(specs)

    def items(self):
        return self.specs.items()


def instantiate_app(app: PlaceholderApp, spec: Formula) -> Node:
    mapping = spec.feature_set.formal_mapping(app.args, app.result)
    return spec.instantiate(mapping)


def substitute(query: VerificationQuery, delta: VerificationInterface) -> Node:
    """Σ[Δ]: every R_f(α⃗, ν) replaced by Δ(R_f) at (α⃗, ν), equalities conjoined unchanged."""
    parts = [instantiate_app(app, delta[app.function]) for app in query.apps]
    parts.extend(Lit(c) for c in query.constraints)
    return conj(*parts)


class Order(str, Enum):
    WEAKER = "weaker"
    STRONGER = "stronger"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def truth_table_entails(phi1: Formula, phi2: Formula) -> bool:
    return set(positive_vectors(phi1)) <= set(positive_vectors(phi2))


def interface_order(
    d1: VerificationInterface,
    d2: VerificationInterface,
    entails: Callable[[Formula, Formula], bool] | None = None,
) -> Order:
    """Where d2 sits relative to d1: WEAKER means d2 ≻ d1."""
    if set(d1.functions) != set(d2.functions):
        raise ContractViolation("Interfaces have different domains.")
    entails = entails or truth_table_entails
    forward = all(entails(d1[f], d2[f]) for f in d1.functions)
    backward = all(entails(d2[f], d1[f]) for f in d1.functions)
    if forward and backward:
        return Order.EQUAL
    if forward:
        return Order.WEAKER
    if backward:
        return Order.STRONGER
    return Order.INCOMPARABLE


def functions_of(queries: Iterable[VerificationQuery]) -> list[str]:
    return list(dict.fromkeys(f for q in queries for f in q.functions))


def feature_set_by_function(feature_sets: Iterable[FeatureSet]) -> dict[str, FeatureSet]:
    return {fs.function: fs for fs in feature_sets}
