import logging
import random
from collections.abc import Mapping, Sequence
from itertools import product

from app.errors import ContractViolation, DomainError, PathInfeasible
from app.frontend.ir import ClientIR, ConfigFile, If, Let, Return
from app.logic.query import CallStep, ContractCallStep, GuardStep, PlaceholderApp, VerificationQuery
from app.logic.sample import Sample
from app.logic.sorts import Sort
from app.runtime.generator import GenConfig, generate
from app.runtime.library import (
    LibraryImpl,
    PredicateImpl,
    bind_library,
    bind_predicate,
    eval_library,
    eval_predicate,
)
from app.runtime.values import BatchedQueue, Leaf, TreeNode, elements_of

logger = logging.getLogger(__name__)

_FALLTHROUGH = object()


def datatype_of(value) -> str | None:
    if isinstance(value, bool) or isinstance(value, int):
        return None
    if isinstance(value, tuple):
        return "list"
    if isinstance(value, BatchedQueue):
        return "queue"
    if isinstance(value, (Leaf, TreeNode)):
        return "tree"
    return None


class ClientProgram:
    """Interpreter for client IR; used to execute contract calls concretely."""

    def __init__(self, clients: Sequence[ClientIR], functions: Mapping[str, LibraryImpl], max_depth: int = 64):
        self.clients = {c.name: c for c in clients}
        self.functions = functions
        self.max_depth = max_depth

    def execute(self, client: str, args: Sequence, depth: int = 0):
        if depth > self.max_depth:
            raise DomainError(f"recursion depth exceeded while executing {client}")
        ir = self.clients[client]
        env = {p.name: a for p, a in zip(ir.params, args)}
        result = self._run_block(ir.body, env, depth)
        if result is _FALLTHROUGH:
            raise ContractViolation(f"Client {client} finished without returning.")
        return result

    def _run_block(self, stmts, env: dict, depth: int):
        for stmt in stmts:
            if isinstance(stmt, Let):
                args = [env[a.name] for a in stmt.args]
                if stmt.function in self.functions:
                    env[stmt.var.name] = eval_library(self.functions[stmt.function], args)
                else:
                    env[stmt.var.name] = self.execute(stmt.function, args, depth + 1)
            elif isinstance(stmt, If):
                branch = stmt.then if env[stmt.cond.name] else stmt.orelse
                result = self._run_block(branch, env, depth)
                if result is not _FALLTHROUGH:
                    return result
            elif isinstance(stmt, Return):
                return env[stmt.var.name]
        return _FALLTHROUGH


class Runtime:
    """Γ_F, Γ_P, the client interpreter and one seeded random stream."""

    def __init__(self, config: ConfigFile, gen: GenConfig | None = None):
        self.config = config
        self.gen = gen or config.generator
        self.functions: dict[str, LibraryImpl] = {
            d.name: bind_library(d.name, d.impl, [p.sort for p in d.params], d.result_sort)
            for d in config.libraries
        }
        self.predicates: dict[str, PredicateImpl] = {
            d.name: bind_predicate(d.name, d.impl, d.signature) for d in config.predicates
        }
        self.program = ClientProgram(config.clients, self.functions)
        self.rng = random.Random(self.gen.seed)

    def draw(self, sort: Sort):
        return generate(self.gen, sort, self.rng)

    def fresh_element(self, present: set[int]) -> int:
        return max(present | {self.gen.elem_max}) + 1

    def observe(
        self,
        assignment: Mapping[str, object],
        apps: tuple[PlaceholderApp, ...] = (),
        origin: str | None = None,
    ) -> Sample:
        """Populate every predicate relation over the values of ``assignment`` plus one fresh element."""
        present: set[int] = set()
        containers: dict[str, list] = {}
        for value in assignment.values():
            present |= elements_of(value)
            kind = datatype_of(value)
            if kind is not None and value not in containers.setdefault(kind, []):
                containers[kind].append(value)
        elements = sorted(present) + [self.fresh_element(present)]

        relations: dict[str, frozenset] = {}
        for name, impl in self.predicates.items():
            if impl.signature[0].is_element:
                pool = product(elements, repeat=len(impl.signature))
            else:
                pool = (
                    (c,) + tail
                    for c in containers.get(impl.signature[0].name, [])
                    for tail in product(elements, repeat=len(impl.signature) - 1)
                )
            relations[name] = frozenset(t for t in pool if eval_predicate(impl, t))
        return Sample(dict(assignment), relations, frozenset(elements), apps=apps, origin=origin)

    def call_standalone(self, function: str, app: PlaceholderApp) -> Sample:
        """Draw random arguments for one library function and observe the call."""
        impl = self.functions[function]
        args = [self.draw(sort) for sort in impl.params]
        result = eval_library(impl, args)
        assignment = {p.name: a for p, a in zip(app.args, args)}
        assignment[app.result.name] = result
        return self.observe(assignment, (app,), origin=function)

    def draw_inputs(self, query: VerificationQuery) -> dict[str, object]:
        return {v.name: self.draw(v.sort) for v in query.inputs}


def run_client_path(query: VerificationQuery, inputs: Mapping[str, object], runtime: Runtime) -> Sample:
    """Replay one query's path on concrete inputs; raises DomainError if the inputs leave it."""
    env = dict(inputs)
    missing = [v.name for v in query.inputs if v.name not in env]
    if missing:
        raise ContractViolation(f"Missing inputs for {query.name}: {', '.join(missing)}.")
    for step in query.steps:
        if isinstance(step, CallStep):
            args = [env[a.name] for a in step.app.args]
            env[step.app.result.name] = eval_library(runtime.functions[step.app.function], args)
        elif isinstance(step, ContractCallStep):
            env[step.result.name] = runtime.program.execute(step.client, [env[a.name] for a in step.args])
        elif isinstance(step, GuardStep):
            if env[step.var.name] is not step.value:
                raise PathInfeasible(f"{step.var.name} is not {step.value} on {query.name}")
    return runtime.observe(env, query.apps, origin=query.name)
