from dataclasses import asdict, dataclass, field
from statistics import mean

from app.logic.query import VerificationInterface


@dataclass
class Metrics:
    quantified_var_count: int = 0
    cex_count: int = 0
    time_consistent_ms: float = 0.0
    gathered_vector_count: int = 0
    positive_vector_count: dict[str, int] = field(default_factory=dict)
    time_weaken_ms: float = 0.0
    weakening_iterations: int = 0
    strengthening_rounds: int = 0
    distinguish_ms: list[float] = field(default_factory=list)
    feature_set_sizes: dict[str, int] = field(default_factory=dict)
    non_maximal: list[str] = field(default_factory=list)
    solver_queries: int = 0

    @property
    def time_distinguish(self) -> float | str:
        """Mean time of the weakening queries that found a distinguishing sample; ``Max`` if none did."""
        return mean(self.distinguish_ms) if self.distinguish_ms else "Max"

    def as_dict(self) -> dict:
        data = asdict(self)
        data.pop("distinguish_ms")
        data["time_distinguish"] = self.time_distinguish
        return data


@dataclass
class Interface:
    delta: VerificationInterface
    metrics: Metrics
    exit_code = 0
    kind = "interface"


@dataclass
class Counterexample:
    inputs: dict[str, object]
    violated: str
    metrics: Metrics
    exit_code = 1
    kind = "counterexample"


@dataclass
class Aborted:
    reason: str
    metrics: Metrics
    exit_code = 2
    kind = "aborted"


InferenceOutcome = Interface | Counterexample | Aborted
