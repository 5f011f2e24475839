"""Run reports: the machine-readable record of one inference run."""
import json
from dataclasses import asdict, dataclass, field

from app.frontend.parser import parse_spec
from app.inference.config import SpecConfig
from app.inference.outcome import Aborted, Counterexample, InferenceOutcome, Interface
from app.logic.features import build_feature_set, count_positive
from app.logic.formula import implies
from app.logic.query import VerificationInterface, substitute
from app.logic.sorts import quantified_vars
from app.runtime.values import show, to_json
from app.smt.backend import SmtBackend


@dataclass
class RunReport:
    config: str
    config_hash: str
    seed: int
    outcome: str
    exit_code: int
    shape: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    interface: list[dict] | None = None
    counterexample: dict | None = None
    reason: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        """Sorted keys; everything outside ``timings`` is reproducible for a fixed seed."""
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    @property
    def positive_total(self) -> int | None:
        counts = self.metrics.get("positive_vector_count")
        return sum(counts.values()) if counts else None


def _shape(cfg: SpecConfig) -> dict:
    return {
        "functions": len(cfg.inferred_functions),
        "applications": sum(len(q.apps) for q in cfg.queries),
        "predicates": len(cfg.predicates),
        "queries": len(cfg.queries),
    }


def _interface_entries(delta: VerificationInterface, non_maximal: list[str]) -> list[dict]:
    entries = []
    for function, spec in delta.items():
        sig = spec.feature_set.signature
        entries.append({
            "function": function,
            "params": [[p.name, str(p.sort)] for p in sig.params],
            "result": [sig.result.name, str(sig.result.sort)],
            "spec": spec.to_sexpr(),
            "rendered": spec.render(),
            "positive": count_positive(spec),
            "maximal": function not in non_maximal,
        })
    return entries


def build_report(
    cfg: SpecConfig, config_hash: str, outcome: InferenceOutcome, wall_ms: float
) -> RunReport:
    metrics = outcome.metrics.as_dict()
    timings = {
        "wall_ms": wall_ms,
        "time_consistent_ms": metrics.pop("time_consistent_ms"),
        "time_weaken_ms": metrics.pop("time_weaken_ms"),
        "time_distinguish_ms": metrics.pop("time_distinguish"),
    }
    report = RunReport(
        config=cfg.name,
        config_hash=config_hash,
        seed=cfg.runtime.gen.seed,
        outcome=outcome.kind,
        exit_code=outcome.exit_code,
        shape=_shape(cfg),
        metrics=metrics,
        timings=timings,
    )
    if isinstance(outcome, Interface):
        report.interface = _interface_entries(outcome.delta, outcome.metrics.non_maximal)
    elif isinstance(outcome, Counterexample):
        report.counterexample = {
            "query": outcome.violated,
            "inputs": {k: to_json(v) for k, v in outcome.inputs.items()},
            "shown": {k: show(v) for k, v in outcome.inputs.items()},
        }
    elif isinstance(outcome, Aborted):
        report.reason = outcome.reason
    return report


def error_report(name: str, config_hash: str, seed: int, message: str) -> RunReport:
    return RunReport(config=name, config_hash=config_hash, seed=seed, outcome="error", exit_code=2, reason=message)


def load_interface(report: RunReport, cfg: SpecConfig) -> VerificationInterface:
    """Re-read the specifications of an interface report over the run's feature sets."""
    quantified = quantified_vars(report.metrics["quantified_var_count"])
    predicates = {p.name: p for p in cfg.predicates}
    specs = {}
    for entry in report.interface or []:
        fs = build_feature_set(cfg.predicates, cfg.functions[entry["function"]], quantified)
        specs[entry["function"]] = parse_spec(entry["spec"], fs, predicates)
    return VerificationInterface(specs)


def reverify(report: RunReport, cfg: SpecConfig, backend: SmtBackend) -> list[str]:
    """Names of the queries the reported interface does not verify."""
    delta = load_interface(report, cfg)
    failing = []
    for query in cfg.queries:
        result = backend.verify(implies(substitute(query, delta), query.phi), label=f"recheck {query.name}")
        if not result.is_ok:
            failing.append(query.name)
    return failing
