import logging
import time

from app.errors import SolverUnknown
from app.inference.cex import extract_cex
from app.inference.config import SpecConfig
from app.inference.consistent import spec_infer
from app.inference.outcome import Aborted, Counterexample, InferenceOutcome, Interface
from app.inference.session import Fail, InferenceSession
from app.inference.weaken import weaken
from app.logic.features import count_positive, positive_vectors
from app.logic.query import VerificationInterface
from app.logic.sorts import quantified_vars
from app.smt.backend import SmtBackend

logger = logging.getLogger(__name__)


def _signature(delta: VerificationInterface) -> dict[str, frozenset]:
    return {f: frozenset(positive_vectors(spec)) for f, spec in delta.items()}


def weaken_all(session: InferenceSession, delta: VerificationInterface) -> VerificationInterface:
    """Weaken every function in declaration order until a full pass changes nothing."""
    deadline = time.monotonic() + session.cfg.weaken_bound
    non_maximal: set[str] = set()
    while True:
        before = _signature(delta)
        for function in delta.functions:
            spec, maximal = weaken(session, delta, function, deadline)
            delta = delta.replace(function, spec)
            if not maximal:
                non_maximal.add(function)
        if non_maximal or _signature(delta) == before:
            break
    session.metrics.non_maximal = [f for f in delta.functions if f in non_maximal]
    if non_maximal:
        logger.warning("Returning non-maximal specifications for %s", ", ".join(session.metrics.non_maximal))
    return delta


def multi_abduce(cfg: SpecConfig, backend: SmtBackend) -> InferenceOutcome:
    session = InferenceSession(cfg, backend)
    metrics = session.metrics
    count = 0
    while True:
        metrics.quantified_var_count = count
        start = time.perf_counter()
        try:
            result = spec_infer(session, quantified_vars(count))
        except SolverUnknown as exc:
            metrics.solver_queries = backend.queries
            return Aborted(f"solver returned unknown: {exc.reason}", metrics)
        finally:
            metrics.time_consistent_ms += (time.perf_counter() - start) * 1000

        if isinstance(result, Fail):
            for sample in result.samples:
                inputs = extract_cex(session, sample)
                if inputs is not None:
                    metrics.solver_queries = backend.queries
                    return Counterexample(inputs, sample.origin, metrics)
            if count >= cfg.k_max:
                metrics.solver_queries = backend.queries
                return Aborted(f"no safe interface with up to {cfg.k_max} quantified variables", metrics)
            count += 1
            logger.info("Growing the hypothesis space to |u|=%d", count)
            continue

        start = time.perf_counter()
        delta = weaken_all(session, result)
        metrics.time_weaken_ms = (time.perf_counter() - start) * 1000
        metrics.positive_vector_count = {f: count_positive(spec) for f, spec in delta.items()}
        metrics.solver_queries = backend.queries
        return Interface(delta, metrics)
