"""Safe and consistent interface inference.

The inner loop makes Δ agree with every concrete execution the sampler finds; the
outer loop asks the solver whether Δ is safe and, if not, turns the model into
negative feature vectors.
"""
import logging
from collections.abc import Sequence

from app.errors import SolverUnknown
from app.inference.session import Fail, InferenceSession
from app.learner.tree import LabeledData, learn
from app.logic.features import FeatureSet, FeatureVector
from app.logic.formula import Formula
from app.logic.query import VerificationInterface
from app.logic.sample import Label
from app.logic.sorts import Var
from app.runtime.sampler import find_inconsistency
from app.smt.backend import Outcome

logger = logging.getLogger(__name__)


def _relearn(
    feature_sets: dict[str, FeatureSet],
    pi: dict[str, set[FeatureVector]],
    omega: dict[str, set[FeatureVector]],
) -> VerificationInterface:
    return VerificationInterface({f: learn(LabeledData(pi[f], omega[f], fs)) for f, fs in feature_sets.items()})


def spec_infer(session: InferenceSession, quantified: Sequence[Var]) -> VerificationInterface | Fail:
    cfg = session.cfg
    feature_sets = cfg.feature_sets(quantified)
    session.metrics.feature_set_sizes = {f: len(fs) for f, fs in feature_sets.items()}
    pi: dict[str, set[FeatureVector]] = {f: set() for f in feature_sets}
    omega: dict[str, set[FeatureVector]] = {f: set() for f in feature_sets}
    delta = VerificationInterface({f: Formula.top(fs) for f, fs in feature_sets.items()})
    logger.info("SpecInfer with |u|=%d over %s", len(quantified), ", ".join(feature_sets) or "no functions")

    while True:
        while (sample := find_inconsistency(delta, session.runtime, cfg.queries)) is not None:
            for f, fs in feature_sets.items():
                pi[f] |= set(session.vectors_at(fs, sample, sample.apps))
                omega[f] -= pi[f]
            delta = _relearn(feature_sets, pi, omega)

        witnesses = []
        for query in cfg.queries:
            result = session.verify_safe(query, delta, label=f"safety {query.name}")
            if result.outcome is Outcome.UNKNOWN:
                raise SolverUnknown(result.reason)
            if result.is_sat:
                session.metrics.cex_count += 1
                witnesses.append((query, result.model.with_label(Label.NEGATIVE, origin=query.name)))

        if not witnesses:
            for query in cfg.queries:
                if not session.backend.check_nontrivial(query, delta):
                    logger.info("Σ[Δ] of %s is unsatisfiable", query.name)
                    return Fail()
            return delta

        fresh: dict[str, set[FeatureVector]] = {f: set() for f in feature_sets}
        for query, model in witnesses:
            for f, fs in feature_sets.items():
                fresh[f] |= set(session.vectors_at(fs, model, query.apps_of(f))) - pi[f] - omega[f]
        if not any(fresh.values()):
            logger.info("Negative sample for %s carries no new vectors", witnesses[0][0].name)
            return Fail(tuple(model for _, model in witnesses))

        for f in feature_sets:
            omega[f] |= fresh[f]
        session.metrics.strengthening_rounds += 1
        measure = sum(len(pi[f] | omega[f]) for f in feature_sets)
        logger.debug("Strengthening round: |π ∪ ω| = %d", measure)
        delta = _relearn(feature_sets, pi, omega)
