import logging
from collections.abc import Callable, Iterator, Sequence

from app.errors import DomainError
from app.logic.features import extract_feature_vectors, is_positive
from app.logic.query import PlaceholderApp, VerificationInterface, VerificationQuery
from app.logic.sample import Sample
from app.runtime.executor import Runtime, run_client_path

logger = logging.getLogger(__name__)


def violating_apps(delta: VerificationInterface, sample: Sample) -> list[PlaceholderApp]:
    """Applications of ``sample`` at which some observed vector is classified negative."""
    bad = []
    for app in sample.apps:
        if app.function not in delta:
            continue
        spec = delta[app.function]
        vectors = extract_feature_vectors(spec.feature_set, sample, app)
        if any(not is_positive(spec, fv) for fv in vectors):
            bad.append(app)
    return bad


def _round(
    delta: VerificationInterface, runtime: Runtime, queries: Sequence[VerificationQuery]
) -> Iterator[Callable[[], Sample]]:
    """``samples_per_round`` standalone calls per library function, then as many runs per client path."""
    per_round = runtime.gen.samples_per_round
    for function in delta.functions:
        sig = delta[function].feature_set.signature
        app = PlaceholderApp(function, sig.params, sig.result)
        for _ in range(per_round):
            yield lambda function=function, app=app: runtime.call_standalone(function, app)
    for query in queries:
        for _ in range(per_round):
            yield lambda query=query: run_client_path(query, runtime.draw_inputs(query), runtime)


def find_inconsistency(
    delta: VerificationInterface,
    runtime: Runtime,
    queries: Sequence[VerificationQuery] = (),
) -> Sample | None:
    """Search for a concrete execution that Δ misclassifies.

    Stops after ``consistent_streak_to_stop`` consistent observations in a row, or
    after twenty times that many attempts when most draws leave the library's domain.
    """
    streak_needed = runtime.gen.consistent_streak_to_stop
    cap = 20 * streak_needed
    if not delta.functions and not queries:
        return None

    streak = attempts = 0
    while streak < streak_needed and attempts < cap:
        for draw in _round(delta, runtime, queries):
            if streak >= streak_needed or attempts >= cap:
                break
            attempts += 1
            try:
                sample = draw()
            except DomainError:
                continue
            if violating_apps(delta, sample):
                logger.debug("Inconsistent observation from %s after %d attempts", sample.origin, attempts)
                return sample
            streak += 1

    if streak < streak_needed:
        logger.debug("Sampling stopped at the attempt cap with a streak of %d", streak)
    return None
