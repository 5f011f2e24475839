from collections.abc import Iterable
from dataclasses import dataclass

from app.inference.config import SpecConfig
from app.inference.outcome import Metrics
from app.logic.features import FeatureSet, FeatureVector, extract_feature_vectors
from app.logic.formula import implies
from app.logic.query import PlaceholderApp, VerificationInterface, VerificationQuery, substitute
from app.logic.sample import Sample
from app.smt.backend import SmtBackend, VerifyResult


@dataclass(frozen=True)
class Fail:
    """SpecInfer gave up: ``samples`` are the negative models of the last round, empty when Σ[Δ] became vacuous."""

    samples: tuple[Sample, ...] = ()


class InferenceSession:
    """Runtime, solver and metrics shared by the phases of one run."""

    def __init__(self, cfg: SpecConfig, backend: SmtBackend):
        self.cfg = cfg
        self.backend = backend
        self.runtime = cfg.runtime
        self.metrics = Metrics()

    def verify_safe(self, query: VerificationQuery, delta: VerificationInterface, label: str) -> VerifyResult:
        """Verify Σ[Δ] ⟹ Φ for one query."""
        return self.backend.verify(
            implies(substitute(query, delta), query.phi), label=label, housed=query.housed_variables()
        )

    @staticmethod
    def vectors_at(feature_set: FeatureSet, sample: Sample, apps: Iterable[PlaceholderApp]) -> list[FeatureVector]:
        found: dict[FeatureVector, None] = {}
        for app in apps:
            if app.function == feature_set.function:
                found.update(dict.fromkeys(extract_feature_vectors(feature_set, sample, app)))
        return list(found)
