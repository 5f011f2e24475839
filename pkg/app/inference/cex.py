"""Concretization of negative models into client inputs."""
import logging
from collections.abc import Iterator
from itertools import islice, permutations, product

from app.errors import DomainError
from app.inference.session import InferenceSession
from app.logic.formula import holds
from app.logic.query import VerificationQuery
from app.logic.sample import Sample
from app.logic.sorts import Sort, Var
from app.runtime.executor import run_client_path
from app.runtime.values import LEAF, BatchedQueue, TreeNode

logger = logging.getLogger(__name__)

EXHAUSTIVE_SIZE = 3
EXHAUSTIVE_CAP = 20_000
RANDOM_BUDGET = 2000
MAX_RENAMED_ELEMENTS = 7

Pattern = tuple[frozenset, list]


def input_pattern(sample: Sample, inputs: tuple[Var, ...]) -> Pattern:
    """Relation facts about the input variables, and the elements they mention."""
    facts = set()
    by_value: dict[object, set[str]] = {}
    for v in inputs:
        if v.sort.is_container:
            by_value.setdefault(sample.assignment[v.name], set()).add(v.name)
    for pred, tuples in sample.relations.items():
        for t in tuples:
            for name in sorted(by_value.get(t[0], ())):
                facts.add((pred, name) + tuple(t[1:]))
    for v in inputs:
        if v.sort.is_element:
            facts.add(("=", v.name, sample.assignment[v.name]))
        elif v.sort.is_boolean:
            facts.add(("bool", v.name, sample.assignment[v.name]))
    elements = sorted({x for fact in facts for x in fact[2:] if not isinstance(x, bool)}, key=repr)
    return frozenset(facts), elements


def _renamed(facts: frozenset, mapping: dict) -> frozenset:
    return frozenset(f[:2] + tuple(mapping.get(x, x) if not isinstance(x, bool) else x for x in f[2:]) for f in facts)


def matches(target: Pattern, candidate: Pattern) -> bool:
    """Equality of two patterns up to a bijective renaming of elements."""
    t_facts, t_elems = target
    c_facts, c_elems = candidate
    if len(t_facts) != len(c_facts) or len(t_elems) != len(c_elems):
        return False
    if len(t_elems) > MAX_RENAMED_ELEMENTS:
        return False
    for perm in permutations(c_elems):
        if _renamed(t_facts, dict(zip(t_elems, perm))) == c_facts:
            return True
    return False


def _trees(size: int, domain: range) -> Iterator:
    if size == 0:
        yield LEAF
        return
    for left in range(size):
        for value in domain:
            for l in _trees(left, domain):
                for r in _trees(size - 1 - left, domain):
                    yield TreeNode(value, l, r)


def small_values(sort: Sort, domain: range) -> list:
    if sort.is_element:
        return list(domain)
    if sort.is_boolean:
        return [False, True]
    if sort.name == "tree":
        return [t for n in range(EXHAUSTIVE_SIZE + 1) for t in _trees(n, domain)]
    seqs = [s for n in range(EXHAUSTIVE_SIZE + 1) for s in product(domain, repeat=n)]
    if sort.name == "queue":
        return [BatchedQueue.make(s, ()) for s in seqs]
    return seqs


def _exhaustive(query: VerificationQuery, domain: range) -> Iterator[dict]:
    pools = [small_values(v.sort, domain) for v in query.inputs]
    for values in islice(product(*pools), EXHAUSTIVE_CAP):
        yield {v.name: x for v, x in zip(query.inputs, values)}


def _random(session: InferenceSession, query: VerificationQuery) -> Iterator[dict]:
    for _ in range(RANDOM_BUDGET):
        yield session.runtime.draw_inputs(query)


def extract_cex(session: InferenceSession, negative: Sample) -> dict | None:
    """Concrete inputs that really violate Φ on the path of ``negative``, preferring ones that look like it."""
    query = next((q for q in session.cfg.queries if q.name == negative.origin), None)
    if query is None:
        return None
    target = input_pattern(negative, query.inputs)
    domain = range(max(1, len(target[1])))

    unmatched = None
    for source in (_exhaustive(query, domain), _random(session, query)):
        for inputs in source:
            try:
                concrete = run_client_path(query, inputs, session.runtime)
            except DomainError:
                continue
            if holds(query.phi, concrete):
                continue
            if matches(target, input_pattern(concrete, query.inputs)):
                logger.info("Concrete counterexample for %s: %s", query.name, inputs)
                return inputs
            if unmatched is None:
                unmatched = inputs
    if unmatched is not None:
        # the model itself is not realizable, but the path still fails on real inputs
        logger.info("Counterexample for %s does not match the negative sample: %s", query.name, unmatched)
    else:
        logger.info("No concrete inputs falsify %s", query.name)
    return unmatched
