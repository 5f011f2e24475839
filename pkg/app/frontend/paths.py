"""Compilation of client control-flow paths into verification queries."""
import logging
from dataclasses import dataclass, field, replace

from app.errors import ContractViolation
from app.frontend.ir import ClientIR, ConfigFile, If, Let, Return
from app.logic.formula import ConstEq, Node, conj, implies, rename
from app.logic.query import CallStep, ContractCallStep, GuardStep, PlaceholderApp, VerificationQuery
from app.logic.sorts import Var

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Path:
    apps: tuple[PlaceholderApp, ...] = ()
    constraints: tuple = ()
    steps: tuple = ()
    assumptions: tuple[Node, ...] = ()
    auxiliaries: tuple[Var, ...] = ()
    guards: dict = field(default_factory=dict)


def contract_instance(callee: ClientIR, args: tuple[Var, ...], result: Var) -> Node:
    """The callee's contract at one call site: requires ⟹ ensures, renamed to the actual variables."""
    if len(args) != len(callee.params):
        raise ContractViolation(f"{callee.name} takes {len(callee.params)} arguments, got {len(args)}.")
    mapping = dict(zip(callee.params, args))
    mapping[callee.result] = result
    ensures = rename(callee.ensures, mapping)
    if callee.requires is None:
        return ensures
    return implies(rename(callee.requires, mapping), ensures)


class _PathCompiler:
    def __init__(self, client: ClientIR, cfg: ConfigFile):
        self.client = client
        self.cfg = cfg
        self.queries: list[VerificationQuery] = []

    def explore(self, work: tuple, path: _Path):
        for i, stmt in enumerate(work):
            if isinstance(stmt, Let):
                path = self._let(stmt, path)
            elif isinstance(stmt, If):
                rest = work[i + 1:]
                for value, branch in ((True, stmt.then), (False, stmt.orelse)):
                    guarded = self._guard(path, stmt.cond, value)
                    if guarded is not None:
                        self.explore(branch + rest, guarded)
                return
            elif isinstance(stmt, Return):
                self._emit(stmt.var, path)
                return
        raise ContractViolation(f"A path of client {self.client.name} does not return.")

    def _let(self, stmt: Let, path: _Path) -> _Path:
        if self.cfg.library(stmt.function) is not None:
            app = PlaceholderApp(stmt.function, stmt.args, stmt.var)
            return replace(path, apps=path.apps + (app,), steps=path.steps + (CallStep(app),))
        callee = self.cfg.client(stmt.function)
        if callee is None:
            raise ContractViolation(f"Unknown function '{stmt.function}' in client {self.client.name}.")
        return replace(
            path,
            steps=path.steps + (ContractCallStep(callee.name, stmt.args, stmt.var),),
            assumptions=path.assumptions + (contract_instance(callee, stmt.args, stmt.var),),
            auxiliaries=path.auxiliaries + (stmt.var,),
        )

    @staticmethod
    def _guard(path: _Path, cond: Var, value: bool) -> _Path | None:
        known = path.guards.get(cond)
        if known is not None:
            return path if known == value else None
        return replace(
            path,
            constraints=path.constraints + (ConstEq(cond, value),),
            steps=path.steps + (GuardStep(cond, value),),
            guards={**path.guards, cond: value},
        )

    def _emit(self, returned: Var, path: _Path):
        client = self.client
        premise = conj(*(() if client.requires is None else (client.requires,)), *path.assumptions)
        phi = implies(premise, rename(client.ensures, {client.result: returned}))
        query = VerificationQuery(
            name=f"{client.name}#{len(self.queries)}",
            apps=path.apps,
            constraints=path.constraints,
            phi=phi,
            inputs=client.params,
            auxiliaries=path.auxiliaries,
            steps=path.steps,
            client=client.name,
        )
        query.validate()
        self.queries.append(query)


def paths_to_queries(client: ClientIR, cfg: ConfigFile) -> list[VerificationQuery]:
    """One query per feasible branch valuation, in then-before-else order."""
    compiler = _PathCompiler(client, cfg)
    compiler.explore(client.body, _Path())
    logger.debug("Client %s has %d paths", client.name, len(compiler.queries))
    return compiler.queries


def compile_config(cfg: ConfigFile) -> list[VerificationQuery]:
    return [q for client in cfg.clients for q in paths_to_queries(client, cfg)]
