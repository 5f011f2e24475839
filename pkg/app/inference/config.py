from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from app.errors import ConfigurationError
from app.logic.features import FeatureSet, FunctionSig, build_feature_set
from app.logic.formula import Lit, PredApp, walk
from app.logic.query import VerificationQuery
from app.logic.sorts import MethodPredicate, Var
from app.runtime.executor import Runtime


@dataclass
class SpecConfig:
    """((Σ, Φ), P, F, Γ_P, Γ_F) plus the search limits of one run."""

    queries: Sequence[VerificationQuery]
    predicates: Sequence[MethodPredicate]
    functions: Mapping[str, FunctionSig]
    runtime: Runtime
    k_max: int = 3
    weaken_bound: float = 60.0
    name: str = "config"

    def __post_init__(self):
        if self.k_max < 0:
            raise ConfigurationError("max-qvars must be >= 0.")
        if self.weaken_bound <= 0:
            raise ConfigurationError("weaken-bound must be positive.")
        declared = {p.name for p in self.predicates}
        for query in self.queries:
            query.validate()
            for function in query.functions:
                if function not in self.functions:
                    raise ConfigurationError(f"Query {query.name} calls undeclared library function '{function}'.")
            for node in walk(query.phi):
                if isinstance(node, Lit) and isinstance(node.atom, PredApp) and node.atom.pred.name not in declared:
                    raise ConfigurationError(f"Query {query.name} uses undeclared predicate '{node.atom.pred.name}'.")

    @property
    def inferred_functions(self) -> list[str]:
        """Functions with a placeholder in some query, in declaration order."""
        used = {f for q in self.queries for f in q.functions}
        return [f for f in self.functions if f in used]

    def feature_sets(self, quantified: Sequence[Var]) -> dict[str, FeatureSet]:
        return {
            f: build_feature_set(self.predicates, self.functions[f], quantified) for f in self.inferred_functions
        }

    def queries_with(self, function: str) -> list[VerificationQuery]:
        return [q for q in self.queries if function in q.functions]
