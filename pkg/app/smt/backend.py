import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from itertools import product

from app import settings
from app.errors import ModelDecodingError, SolverError, SolverUnknown
from app.logic.features import FeatureSet
from app.logic.formula import Formula, Node, holds, implies, neg
from app.logic.query import VerificationInterface, VerificationQuery, substitute, truth_table_entails
from app.logic.sample import Sample
from app.logic.sorts import MethodPredicate, Var
from app.smt.encoding import SKOLEM_PREFIX, SmtQuery, SmtSymbol, encode, pred_symbol
from app.smt.reply import parse_reply, parse_values
from app.smt.transport import SolverSession, open_session

logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    OK = "ok"
    SAT = "sat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class VerifyResult:
    outcome: Outcome
    model: Sample | None = None
    reason: str | None = None

    @classmethod
    def ok(cls) -> "VerifyResult":
        return cls(Outcome.OK)

    @classmethod
    def sat(cls, model: Sample) -> "VerifyResult":
        return cls(Outcome.SAT, model=model)

    @classmethod
    def unknown(cls, reason: str) -> "VerifyResult":
        return cls(Outcome.UNKNOWN, reason=reason)

    @property
    def is_ok(self) -> bool:
        return self.outcome is Outcome.OK

    @property
    def is_sat(self) -> bool:
        return self.outcome is Outcome.SAT


def _decode(session: SolverSession, query: SmtQuery) -> Sample:
    """Read back constants and every predicate tuple over representative constants."""
    reply = session.ask(f"(get-value ({' '.join(s.symbol for s in query.symbols)}))")
    raw = {sym.symbol: value for sym, (_, value) in zip(query.symbols, parse_values(reply))}
    if len(raw) != len(query.symbols):
        raise SolverError("The solver returned fewer values than requested.")

    ids: dict[tuple, str] = {}
    reps: dict[str, SmtSymbol] = {}
    for sym in query.symbols:
        if sym.sort.is_boolean:
            continue
        key = (sym.sort, raw[sym.symbol])
        if key not in ids:
            prefix = "e" if sym.sort.is_element else sym.sort.name
            count = sum(1 for k in ids if k[0] == sym.sort)
            ids[key] = f"{prefix}{count}"
            reps[ids[key]] = sym

    def value_of(sym: SmtSymbol):
        if sym.sort.is_boolean:
            return raw[sym.symbol] == "true"
        return ids[(sym.sort, raw[sym.symbol])]

    assignment = {
        sym.var: value_of(sym)
        for sym in query.symbols
        if sym.var is not None and not sym.var.startswith(SKOLEM_PREFIX)
    }
    literals = {sym.literal: value_of(sym) for sym in query.symbols if sym.literal is not None}
    elements = frozenset(i for (sort, _), i in ids.items() if sort.is_element)

    relations: dict[str, frozenset] = {}
    for pred in query.predicates:
        pools = [[i for (sort, _), i in ids.items() if sort == s] for s in pred.signature]
        tuples = list(product(*pools))
        if not tuples:
            relations[pred.name] = frozenset()
            continue
        terms = [f"({pred_symbol(pred)} {' '.join(reps[i].symbol for i in t)})" for t in tuples]
        values = parse_values(session.ask(f"(get-value ({' '.join(terms)}))"))
        relations[pred.name] = frozenset(t for t, (_, v) in zip(tuples, values) if v == "true")

    return Sample(assignment, relations, elements, literals=literals)


class SmtBackend:
    """The Verify oracle: validity checks of closed sentences, one solver session per query."""

    def __init__(
        self,
        predicates: Sequence[MethodPredicate],
        timeout_ms: int | None = None,
        transport: str | None = None,
        solver_path: str | None = None,
        check_models: bool | None = None,
    ):
        self.predicates = tuple(predicates)
        self.timeout_ms = timeout_ms or settings.SMT_TIMEOUT_MS
        self.transport = transport or settings.SMT_TRANSPORT
        self.solver_path = solver_path or settings.SMT_SOLVER_PATH
        self.check_models = settings.SMT_CHECK_MODELS if check_models is None else check_models
        self.queries = 0
        self.solver_ms = 0.0

    def verify(self, sentence: Node, label: str = "verify", housed: Sequence[Var] = ()) -> VerifyResult:
        query = encode(sentence, self.predicates, self.timeout_ms, housed)
        start = time.perf_counter()
        with open_session(self.transport, self.solver_path, self.timeout_ms) as session:
            session.feed(query.script())
            status = parse_reply(session.ask("(check-sat)"))
            if status == "unsat":
                result = VerifyResult.ok()
            elif status == "sat":
                result = VerifyResult.sat(_decode(session, query))
            elif status == "unknown":
                reason = parse_reply(session.ask("(get-info :reason-unknown)"))
                if isinstance(reason, list):
                    reason = str(reason[-1])
                result = VerifyResult.unknown(reason.strip('"'))
            elif status == "timeout":
                result = VerifyResult.unknown("timeout")
            else:
                raise SolverError(f"Unexpected check-sat reply {status!r}")
        elapsed = (time.perf_counter() - start) * 1000
        self.queries += 1
        self.solver_ms += elapsed
        logger.debug("%s: %s in %.1f ms", label, result.outcome.value, elapsed)

        if result.is_sat and self.check_models and holds(sentence, result.model):
            raise ModelDecodingError(f"{label}: the decoded model does not falsify the sentence.")
        if result.outcome is Outcome.UNKNOWN:
            logger.warning("%s: solver returned unknown (%s)", label, result.reason)
        return result

    def check_nontrivial(self, query: VerificationQuery, delta: VerificationInterface) -> bool:
        """Whether Σ[Δ] is satisfiable."""
        result = self.verify(
            neg(substitute(query, delta)), label=f"nontrivial {query.name}", housed=query.housed_variables()
        )
        if result.outcome is Outcome.UNKNOWN:
            raise SolverUnknown(result.reason)
        return result.is_sat

    def entails(self, phi1: Formula, phi2: Formula) -> bool:
        shared: FeatureSet | None = phi1.feature_set
        if shared is not None and shared == phi2.feature_set and truth_table_entails(phi1, phi2):
            return True
        result = self.verify(implies(phi1.sentence(), phi2.sentence()), label="entails")
        if result.outcome is Outcome.UNKNOWN:
            raise SolverUnknown(result.reason)
        return result.is_ok
