from dataclasses import dataclass, field

from app.logic.features import FunctionSig
from app.logic.formula import Node
from app.logic.sorts import MethodPredicate, Role, Sort, Var
from app.runtime.generator import GenConfig


@dataclass(frozen=True)
class Let:
    var: Var
    function: str
    args: tuple[Var, ...]


@dataclass(frozen=True)
class If:
    cond: Var
    then: tuple
    orelse: tuple


@dataclass(frozen=True)
class Return:
    var: Var


@dataclass(frozen=True)
class ClientIR:
    name: str
    params: tuple[Var, ...]
    result_sort: Sort
    ensures: Node
    body: tuple
    requires: Node | None = None

    @property
    def result(self) -> Var:
        return Var("nu", self.result_sort, Role.RESULT)


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    signature: tuple[Sort, ...]
    impl: str

    @property
    def predicate(self) -> MethodPredicate:
        return MethodPredicate(self.name, self.signature)


@dataclass(frozen=True)
class LibraryDecl:
    name: str
    params: tuple[Var, ...]
    result_sort: Sort
    impl: str

    @property
    def signature(self) -> FunctionSig:
        return FunctionSig(self.name, self.params, Var("nu", self.result_sort, Role.RESULT))


@dataclass(frozen=True)
class SolverSettings:
    timeout_ms: int | None = None


@dataclass(frozen=True)
class Limits:
    max_qvars: int = 3
    weaken_bound: float = 60.0


@dataclass(frozen=True)
class ConfigFile:
    datatypes: tuple[str, ...]
    predicates: tuple[PredicateDecl, ...]
    libraries: tuple[LibraryDecl, ...]
    clients: tuple[ClientIR, ...]
    generator: GenConfig = field(default_factory=GenConfig)
    solver: SolverSettings = field(default_factory=SolverSettings)
    limits: Limits = field(default_factory=Limits)

    def library(self, name: str) -> LibraryDecl | None:
        return next((d for d in self.libraries if d.name == name), None)

    def client(self, name: str) -> ClientIR | None:
        return next((c for c in self.clients if c.name == name), None)

    def predicate(self, name: str) -> PredicateDecl | None:
        return next((p for p in self.predicates if p.name == name), None)

    @property
    def method_predicates(self) -> list[MethodPredicate]:
        return [p.predicate for p in self.predicates]
