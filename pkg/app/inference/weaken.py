"""Weakening of one function's specification while the whole interface stays safe.

W collects the extra vectors found safe so far. The main query asks for a safe
execution, consistent with the other specifications, that uses an f-vector
outside ω ∪ W ∪ Δ(f); each such vector is tried on its own (Update), and the
relearned W is then re-checked until it is safe together with Δ(f) (SafetyLoop).
"""
import logging
import time
from dataclasses import dataclass, field

from app.inference.session import InferenceSession
from app.learner.dnf import simplify
from app.learner.tree import LabeledData, learn
from app.logic.features import FeatureVector, unitary_classifier
from app.logic.formula import Formula, conj, disj, implies
from app.logic.query import VerificationInterface, VerificationQuery, substitute
from app.smt.backend import Outcome

logger = logging.getLogger(__name__)


class _Stop(Exception):
    """The solver said unknown or the time bound expired."""


@dataclass
class _State:
    base: Formula
    weak: Formula
    pi: list[FeatureVector] = field(default_factory=list)
    omega: set[FeatureVector] = field(default_factory=set)

    def candidate(self, extra: Formula | None = None) -> Formula:
        parts = [self.base.body]
        if not self.weak.is_bottom:
            parts.append(self.weak.body)
        if extra is not None:
            parts.append(extra.body)
        return Formula(self.base.quantified, disj(*parts), self.base.feature_set)

    def relearn(self):
        fs = self.base.feature_set
        self.weak = learn(LabeledData(set(self.pi), self.omega, fs)) if self.pi else Formula.bottom(fs)


class Weakener:
    def __init__(self, session: InferenceSession, delta: VerificationInterface, function: str, deadline: float):
        self.session = session
        self.delta = delta
        self.function = function
        self.deadline = deadline
        self.queries = session.cfg.queries_with(function)
        base = delta[function]
        self.state = _State(base, Formula.bottom(base.feature_set))
        self.last_safe = base

    def _check_clock(self):
        if time.monotonic() > self.deadline:
            logger.warning("Weakening %s hit the time bound", self.function)
            raise _Stop

    def _verify(self, sentence, label: str, query: VerificationQuery):
        result = self.session.backend.verify(sentence, label=label, housed=query.housed_variables())
        if result.outcome is Outcome.UNKNOWN:
            raise _Stop
        return result

    def _unsafe_witness(self, spec: Formula, label: str) -> tuple[VerificationQuery, object] | None:
        delta = self.delta.replace(self.function, spec)
        for query in self.queries:
            result = self._verify(implies(substitute(query, delta), query.phi), f"{label} {query.name}", query)
            if result.is_sat:
                return query, result.model
        return None

    def _witness_vectors(self, query: VerificationQuery, model) -> list[FeatureVector]:
        fs = self.state.base.feature_set
        return self.session.vectors_at(fs, model, query.apps_of(self.function))

    def update(self, vectors: list[FeatureVector]):
        state = self.state
        for fv in vectors:
            if fv in state.omega or fv in state.pi:
                continue
            self._check_clock()
            trial = state.candidate(unitary_classifier(fv, state.base.feature_set))
            self.session.metrics.gathered_vector_count += 1
            if self._unsafe_witness(trial, f"update {self.function}") is None:
                state.pi.append(fv)
            else:
                state.omega.add(fv)
        state.relearn()

    def safety_loop(self):
        state = self.state
        while True:
            self._check_clock()
            candidate = state.candidate()
            witness = self._unsafe_witness(candidate, f"safety {self.function}")
            if witness is None:
                self.last_safe = candidate
                return
            vectors = self._witness_vectors(*witness)
            fresh = [fv for fv in vectors if fv not in state.omega and fv not in state.pi]
            if fresh:
                self.update(fresh)
                continue
            # jointly unsafe: demote the latest admitted vector the witness uses
            admitted = [fv for fv in reversed(state.pi) if fv in vectors]
            if not admitted:
                logger.warning("Weakening %s found an unsafe witness with no admitted vector", self.function)
                raise _Stop
            state.pi.remove(admitted[0])
            state.omega.add(admitted[0])
            state.relearn()

    def main_query(self) -> tuple[VerificationQuery, object] | None:
        state = self.state
        metrics = self.session.metrics
        fs = state.base.feature_set
        rejected = disj(*(unitary_classifier(fv, fs).body for fv in sorted(state.omega)))
        known = state.candidate(Formula(state.base.quantified, rejected, fs))
        relaxed = self.delta.replace(self.function, Formula.top(fs))
        bounded = self.delta.replace(self.function, known)
        for query in self.queries:
            before = self.session.backend.solver_ms
            sentence = implies(conj(substitute(query, relaxed), query.phi), substitute(query, bounded))
            result = self._verify(sentence, f"weaken {self.function} {query.name}", query)
            if result.is_sat:
                metrics.distinguish_ms.append(self.session.backend.solver_ms - before)
                return query, result.model
        return None

    def run(self) -> tuple[Formula, bool]:
        """The weakened specification and whether it is known to be maximal."""
        try:
            while True:
                self._check_clock()
                witness = self.main_query()
                if witness is None:
                    break
                self.session.metrics.weakening_iterations += 1
                self.update(self._witness_vectors(*witness))
                self.safety_loop()
        except _Stop:
            return simplify(self.last_safe), False
        return simplify(self.state.candidate()), True


def weaken(
    session: InferenceSession, delta: VerificationInterface, function: str, deadline: float
) -> tuple[Formula, bool]:
    logger.info("Weakening %s", function)
    return Weakener(session, delta, function, deadline).run()
