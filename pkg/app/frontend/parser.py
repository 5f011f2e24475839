"""Configuration files: parsing into a ConfigFile and printing back.

Formulas are built node for node, without the simplifying constructors, so that
print_config and parse_config are inverse to each other.
"""
from collections.abc import Mapping

from app.errors import ConfigurationError, ContractViolation, ParseError
from app.frontend.ir import (
    ClientIR,
    ConfigFile,
    If,
    LibraryDecl,
    Let,
    Limits,
    PredicateDecl,
    Return,
    SolverSettings,
)
from app.frontend.sexpr import SList, Symbol, read_all, read_one
from app.logic.features import FeatureSet
from app.logic.formula import (
    FALSE,
    TRUE,
    And,
    BoolAtom,
    Const,
    ConstEq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Lit,
    Node,
    Not,
    Or,
    PredApp,
    VarEq,
    atoms_of,
    to_sexpr,
)
from app.logic.sorts import ELEMENT, MethodPredicate, Role, Var, is_reserved_name, resolve_sort
from app.runtime.generator import GenConfig
from app.runtime.library import bind_library, bind_predicate
from app.runtime.values import BUILTIN_DATATYPES

RESULT_NAME = "nu"
_KEYWORDS = {"true", "false", "not", "and", "or", "implies", "iff", "forall", "exists", "=", RESULT_NAME}


def _where(node) -> tuple[int, int]:
    return node.line, node.column


def _fail(node, message: str) -> ParseError:
    return ParseError(message, *_where(node))


def _symbol(node, what: str) -> str:
    if not isinstance(node, Symbol):
        raise _fail(node, f"expected {what}")
    return node.text


def _list(node, what: str) -> SList:
    if not isinstance(node, SList):
        raise _fail(node, f"expected {what}")
    return node


def _int(node, what: str) -> int:
    text = _symbol(node, what)
    try:
        return int(text)
    except ValueError:
        raise _fail(node, f"{what} must be an integer, got '{text}'")


def _float(node, what: str) -> float:
    text = _symbol(node, what)
    try:
        return float(text)
    except ValueError:
        raise _fail(node, f"{what} must be a number, got '{text}'")


def _name(node, what: str) -> str:
    name = _symbol(node, what)
    if not (name[0].isalpha() or name[0] == "_") or not all(c.isalnum() or c in "_-" for c in name):
        raise _fail(node, f"invalid {what} '{name}'")
    return name


def _options(form: SList, start: int, allowed: set[str]) -> dict[str, object]:
    items = form.items[start:]
    if len(items) % 2:
        raise _fail(form, f"({form.head()} ...) takes :key value pairs")
    opts = {}
    for key, value in zip(items[::2], items[1::2]):
        k = _symbol(key, "an option keyword")
        if k not in allowed:
            raise _fail(key, f"unknown option {k} for {form.head()}")
        opts[k] = value
    return opts


# Formulas


class _Scope:
    def __init__(self, variables: Mapping[str, Var], predicates: Mapping[str, MethodPredicate]):
        self.variables = dict(variables)
        self.predicates = predicates

    def var(self, node) -> Var:
        name = _symbol(node, "a variable")
        if name not in self.variables:
            raise _fail(node, f"unknown variable '{name}'")
        return self.variables[name]

    def bind(self, binders: SList) -> tuple["_Scope", tuple[Var, ...]]:
        bound = []
        for binder in binders.items:
            pair = _list(binder, "a (VAR elem) binder")
            if len(pair) != 2:
                raise _fail(pair, "a binder is (VAR elem)")
            name = _symbol(pair[0], "a quantified variable")
            if not is_reserved_name(name):
                raise _fail(pair[0], f"quantified variables are named u, v, w or uN, not '{name}'")
            if _symbol(pair[1], "a sort") != "elem":
                raise _fail(pair[1], "only elements can be quantified")
            bound.append(Var(name, ELEMENT, Role.QUANTIFIED))
        inner = _Scope({**self.variables, **{v.name: v for v in bound}}, self.predicates)
        return inner, tuple(bound)


def _formula(node, scope: _Scope) -> Node:
    if isinstance(node, Symbol):
        if node.text == "true":
            return TRUE
        if node.text == "false":
            return FALSE
        var = scope.var(node)
        if not var.sort.is_boolean:
            raise _fail(node, f"'{var.name}' is not Boolean")
        return Lit(BoolAtom(var))

    form = _list(node, "a formula")
    head = form.head()
    args = form.items[1:]
    if head is None:
        raise _fail(form, "a formula starts with an operator or predicate name")
    if head == "not":
        if len(args) != 1:
            raise _fail(form, "not takes one argument")
        return Not(_formula(args[0], scope))
    if head in ("and", "or"):
        if not args:
            raise _fail(form, f"{head} needs at least one argument")
        parts = tuple(_formula(a, scope) for a in args)
        return And(parts) if head == "and" else Or(parts)
    if head in ("implies", "iff"):
        if len(args) != 2:
            raise _fail(form, f"{head} takes two arguments")
        lhs, rhs = _formula(args[0], scope), _formula(args[1], scope)
        return Implies(lhs, rhs) if head == "implies" else Iff(lhs, rhs)
    if head in ("forall", "exists"):
        if len(args) != 2:
            raise _fail(form, f"{head} takes a binder list and a body")
        inner, bound = scope.bind(_list(args[0], "a binder list"))
        body = _formula(args[1], inner)
        return Forall(bound, body) if head == "forall" else Exists(bound, body)
    if head == "=":
        if len(args) != 2:
            raise _fail(form, "= takes two arguments")
        lhs = scope.var(args[0])
        text = _symbol(args[1], "a variable or literal")
        try:
            if text in ("true", "false"):
                if not lhs.sort.is_boolean:
                    raise _fail(args[1], f"'{lhs.name}' is not Boolean")
                return Lit(ConstEq(lhs, text == "true"))
            if text.lstrip("-").isdigit():
                if not lhs.sort.is_element:
                    raise _fail(args[1], f"'{lhs.name}' is not an element")
                return Lit(ConstEq(lhs, int(text)))
            return Lit(VarEq(lhs, scope.var(args[1])))
        except ContractViolation as exc:
            raise _fail(form, str(exc))
    if head in scope.predicates:
        try:
            return Lit(PredApp(scope.predicates[head], tuple(scope.var(a) for a in args)))
        except ContractViolation as exc:
            raise _fail(form, str(exc))
    raise _fail(form, f"unknown predicate or operator '{head}'")


def parse_formula(text: str, variables: Mapping[str, Var], predicates: Mapping[str, MethodPredicate]) -> Node:
    return _formula(read_one(text), _Scope(variables, predicates))


def parse_spec(text: str, feature_set: FeatureSet, predicates: Mapping[str, MethodPredicate]) -> Formula:
    """Re-read a serialized specification over the formal variables of its function."""
    variables = {v.name: v for v in feature_set.signature.variables}
    node = parse_formula(text, variables, predicates)
    if isinstance(node, Forall):
        if node.vars != feature_set.quantified:
            raise ConfigurationError(
                f"Specification of {feature_set.function} quantifies "
                f"{', '.join(v.name for v in node.vars)}, expected {', '.join(v.name for v in feature_set.quantified)}."
            )
        node = node.body
    elif feature_set.quantified and not isinstance(node, Const):
        raise ConfigurationError(f"Specification of {feature_set.function} is missing its quantifier prefix.")
    known = set(feature_set.features)
    stray = [a for a in atoms_of(node) if a not in known]
    if stray:
        raise ConfigurationError(f"Specification of {feature_set.function} uses non-features: {stray[0]}.")
    return Formula(feature_set.quantified, node, feature_set)


# Declarations


def _params(node, datatypes: set[str], what: str) -> tuple[Var, ...]:
    params = []
    seen = set()
    for entry in _list(node, f"a {what} parameter list").items:
        pair = _list(entry, "a (NAME SORT) parameter")
        if len(pair) != 2:
            raise _fail(pair, "a parameter is (NAME SORT)")
        name = _name(pair[0], "parameter name")
        if is_reserved_name(name) or name in _KEYWORDS:
            raise _fail(pair[0], f"'{name}' is reserved")
        if name in seen:
            raise _fail(pair[0], f"duplicate parameter '{name}'")
        seen.add(name)
        params.append(Var(name, _sort(pair[1], datatypes), Role.PARAM))
    return tuple(params)


def _sort(node, datatypes: set[str]):
    try:
        return resolve_sort(_symbol(node, "a sort"), datatypes)
    except ConfigurationError as exc:
        raise _fail(node, str(exc))


def _predicate(form: SList, datatypes: set[str]) -> PredicateDecl:
    if len(form) != 5:
        raise _fail(form, "(predicate NAME (SORT ...) :impl IMPL)")
    name = _name(form[1], "predicate name")
    sorts = tuple(_sort(s, datatypes) for s in _list(form[2], "a sort list").items)
    impl = _symbol(_options(form, 3, {":impl"})[":impl"], "an implementation name")
    try:
        MethodPredicate(name, sorts)
        bind_predicate(name, impl, sorts)
    except ConfigurationError as exc:
        raise _fail(form, str(exc))
    return PredicateDecl(name, sorts, impl)


def _library(form: SList, datatypes: set[str]) -> LibraryDecl:
    if len(form) != 6:
        raise _fail(form, "(library NAME ((PARAM SORT) ...) SORT :impl IMPL)")
    name = _name(form[1], "library name")
    params = _params(form[2], datatypes, "library")
    result = _sort(form[3], datatypes)
    impl = _symbol(_options(form, 4, {":impl"})[":impl"], "an implementation name")
    try:
        bind_library(name, impl, [p.sort for p in params], result)
    except ConfigurationError as exc:
        raise _fail(form, str(exc))
    return LibraryDecl(name, params, result, impl)


class _ClientParser:
    def __init__(self, datatypes, predicates, libraries, signatures):
        self.datatypes = datatypes
        self.predicates = predicates
        self.libraries = libraries
        self.signatures = signatures

    def parse(self, form: SList) -> ClientIR:
        if len(form) < 6:
            raise _fail(form, "(client NAME (PARAMS) SORT [(requires F)] (ensures F) (body STMT ...))")
        name = _name(form[1], "client name")
        params, result_sort = self.signatures[name]
        clauses: dict[str, SList] = {}
        for clause in form.items[4:]:
            clause = _list(clause, "a requires, ensures or body clause")
            head = clause.head()
            if head not in ("requires", "ensures", "body") or head in clauses:
                raise _fail(clause, f"unexpected clause '{head}'")
            clauses[head] = clause
        if "ensures" not in clauses or "body" not in clauses:
            raise _fail(form, f"client {name} needs ensures and body clauses")

        scope = {p.name: p for p in params}
        requires = None
        if "requires" in clauses:
            requires = _formula(self._single(clauses["requires"]), _Scope(scope, self.predicates))
        result = Var(RESULT_NAME, result_sort, Role.RESULT)
        ensures = _formula(self._single(clauses["ensures"]), _Scope({**scope, RESULT_NAME: result}, self.predicates))

        self.bound: dict[str, Var] = dict(scope)
        body = self._block(clauses["body"].items[1:], clauses["body"], result_sort, dict(scope))
        return ClientIR(name, params, result_sort, ensures, body, requires)

    @staticmethod
    def _single(clause: SList):
        if len(clause) != 2:
            raise _fail(clause, f"({clause.head()} FORMULA)")
        return clause[1]

    def _block(self, stmts, where, result_sort, env: dict[str, Var]) -> tuple:
        out = []
        env = dict(env)
        returned = False
        for stmt in stmts:
            if returned:
                raise _fail(stmt, "statement after return")
            stmt = _list(stmt, "a statement")
            head = stmt.head()
            if head == "let":
                out.append(self._let(stmt, env))
            elif head == "if":
                if len(stmt) != 4:
                    raise _fail(stmt, "(if VAR (STMT ...) (STMT ...))")
                cond = self._use(stmt[1], env)
                if not cond.sort.is_boolean:
                    raise _fail(stmt[1], f"branch condition '{cond.name}' is not Boolean")
                then = self._block(_list(stmt[2], "a statement list").items, stmt[2], result_sort, env)
                orelse = self._block(_list(stmt[3], "a statement list").items, stmt[3], result_sort, env)
                out.append(If(cond, then, orelse))
            elif head == "return":
                if len(stmt) != 2:
                    raise _fail(stmt, "(return VAR)")
                var = self._use(stmt[1], env)
                if var.sort != result_sort:
                    raise _fail(stmt[1], f"returns '{var.name}' of sort {var.sort}, expected {result_sort}")
                out.append(Return(var))
                returned = True
            else:
                raise _fail(stmt, f"unknown statement '{head}'")
        return tuple(out)

    def _use(self, node, env: dict[str, Var]) -> Var:
        name = _symbol(node, "a variable")
        if name not in env:
            raise _fail(node, f"variable '{name}' is not bound on this path")
        return env[name]

    def _let(self, stmt: SList, env: dict[str, Var]) -> Let:
        if len(stmt) != 3:
            raise _fail(stmt, "(let VAR (FUNC ARG ...))")
        name = _name(stmt[1], "variable name")
        if name in self.bound or is_reserved_name(name) or name in _KEYWORDS:
            raise _fail(stmt[1], f"'{name}' is already bound or reserved")
        call = _list(stmt[2], "a call")
        function = call.head()
        if function in self.libraries:
            decl = self.libraries[function]
            formals, result_sort = decl.params, decl.result_sort
        elif function in self.signatures:
            formals, result_sort = self.signatures[function]
        else:
            raise _fail(call, f"unknown function '{function}'")
        args = tuple(self._use(a, env) for a in call.items[1:])
        if len(args) != len(formals):
            raise _fail(call, f"{function} takes {len(formals)} arguments, got {len(args)}")
        for arg, formal in zip(args, formals):
            if arg.sort != formal.sort:
                raise _fail(call, f"argument '{arg.name}' of {function} has sort {arg.sort}, expected {formal.sort}")
        var = Var(name, result_sort, Role.RESULT)
        self.bound[name] = var
        env[name] = var
        return Let(var, function, args)


def _check_returns(body: tuple, where, name: str):
    if not body:
        raise _fail(where, f"a path of client {name} does not return")
    last = body[-1]
    if isinstance(last, Return):
        return
    if isinstance(last, If):
        _check_returns(last.then, where, name)
        _check_returns(last.orelse, where, name)
        return
    raise _fail(where, f"a path of client {name} does not return")


def parse_config(text: str) -> ConfigFile:
    forms = read_all(text)
    if not forms:
        raise ParseError("empty configuration", 1, 1)
    by_head: dict[str, list[SList]] = {}
    for form in forms:
        form = _list(form, "a top-level form")
        head = form.head()
        if head not in ("datatype", "predicate", "library", "client", "generator", "solver", "limits"):
            raise _fail(form, f"unknown form '{head}'")
        by_head.setdefault(head, []).append(form)

    datatypes: list[str] = []
    for form in by_head.get("datatype", []):
        if len(form) != 2:
            raise _fail(form, "(datatype NAME)")
        name = _symbol(form[1], "a datatype name")
        if name not in BUILTIN_DATATYPES:
            raise _fail(form[1], f"unknown datatype '{name}'; expected one of {', '.join(BUILTIN_DATATYPES)}")
        if name in datatypes:
            raise _fail(form[1], f"datatype '{name}' declared twice")
        datatypes.append(name)
    known = set(datatypes)

    predicates = [_predicate(f, known) for f in by_head.get("predicate", [])]
    libraries = [_library(f, known) for f in by_head.get("library", [])]
    names = [d.name for d in predicates] + [d.name for d in libraries]

    client_forms = by_head.get("client", [])
    if not client_forms:
        raise _fail(forms[0], "the configuration declares no client")
    signatures = {}
    for form in client_forms:
        if len(form) < 4:
            raise _fail(form, "(client NAME (PARAMS) SORT ...)")
        names.append(_name(form[1], "client name"))
        signatures[form[1].text] = (_params(form[2], known, "client"), _sort(form[3], known))
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise _fail(forms[0], f"names declared twice: {', '.join(duplicates)}")

    parser = _ClientParser(known, {p.name: p.predicate for p in predicates}, {d.name: d for d in libraries}, signatures)
    clients = []
    for form in client_forms:
        client = parser.parse(form)
        _check_returns(client.body, form, client.name)
        clients.append(client)

    return ConfigFile(
        tuple(datatypes),
        tuple(predicates),
        tuple(libraries),
        tuple(clients),
        _generator(by_head.get("generator", [])),
        _solver(by_head.get("solver", [])),
        _limits(by_head.get("limits", [])),
    )


def _single_form(forms: list[SList], head: str) -> SList | None:
    if len(forms) > 1:
        raise _fail(forms[1], f"({head} ...) given twice")
    return forms[0] if forms else None


def _generator(forms: list[SList]) -> GenConfig:
    form = _single_form(forms, "generator")
    if form is None:
        return GenConfig()
    keys = {
        ":max-size": "max_container_size",
        ":elem-min": "elem_min",
        ":elem-max": "elem_max",
        ":seed": "seed",
        ":samples": "samples_per_round",
        ":streak": "consistent_streak_to_stop",
    }
    opts = _options(form, 1, set(keys))
    try:
        return GenConfig(**{keys[k]: _int(v, k) for k, v in opts.items()})
    except ConfigurationError as exc:
        raise _fail(form, str(exc))


def _solver(forms: list[SList]) -> SolverSettings:
    form = _single_form(forms, "solver")
    if form is None:
        return SolverSettings()
    opts = _options(form, 1, {":timeout"})
    timeout = _int(opts[":timeout"], ":timeout") if ":timeout" in opts else None
    if timeout is not None and timeout <= 0:
        raise _fail(form, ":timeout must be positive")
    return SolverSettings(timeout)


def _limits(forms: list[SList]) -> Limits:
    form = _single_form(forms, "limits")
    if form is None:
        return Limits()
    opts = _options(form, 1, {":max-qvars", ":weaken-bound"})
    limits = Limits(
        _int(opts[":max-qvars"], ":max-qvars") if ":max-qvars" in opts else Limits.max_qvars,
        _float(opts[":weaken-bound"], ":weaken-bound") if ":weaken-bound" in opts else Limits.weaken_bound,
    )
    if limits.max_qvars < 0 or limits.weaken_bound <= 0:
        raise _fail(form, "limits must be positive")
    return limits


# Printing


def _params_text(params) -> str:
    return "(" + " ".join(f"({p.name} {p.sort})" for p in params) + ")"


def _block_text(stmts, indent: str) -> str:
    return "(" + f"\n{indent} ".join(_stmt_text(s, indent + " ") for s in stmts) + ")"


def _stmt_text(stmt, indent: str) -> str:
    if isinstance(stmt, Let):
        args = "".join(f" {a.name}" for a in stmt.args)
        return f"(let {stmt.var.name} ({stmt.function}{args}))"
    if isinstance(stmt, Return):
        return f"(return {stmt.var.name})"
    inner = indent + "  "
    return f"(if {stmt.cond.name}\n{inner}{_block_text(stmt.then, inner)}\n{inner}{_block_text(stmt.orelse, inner)})"


def print_config(cfg: ConfigFile) -> str:
    lines = [f"(datatype {d})" for d in cfg.datatypes]
    for p in cfg.predicates:
        lines.append(f"(predicate {p.name} ({' '.join(str(s) for s in p.signature)}) :impl {p.impl})")
    for d in cfg.libraries:
        lines.append(f"(library {d.name} {_params_text(d.params)} {d.result_sort} :impl {d.impl})")
    for c in cfg.clients:
        parts = [f"(client {c.name} {_params_text(c.params)} {c.result_sort}"]
        if c.requires is not None:
            parts.append(f"  (requires {to_sexpr(c.requires)})")
        parts.append(f"  (ensures {to_sexpr(c.ensures)})")
        body = "\n    ".join(_stmt_text(s, "    ") for s in c.body)
        parts.append(f"  (body\n    {body}))")
        lines.append("\n".join(parts))
    g = cfg.generator
    lines.append(
        f"(generator :max-size {g.max_container_size} :elem-min {g.elem_min} :elem-max {g.elem_max} "
        f":seed {g.seed} :samples {g.samples_per_round} :streak {g.consistent_streak_to_stop})"
    )
    lines.append("(solver)" if cfg.solver.timeout_ms is None else f"(solver :timeout {cfg.solver.timeout_ms})")
    lines.append(f"(limits :max-qvars {cfg.limits.max_qvars} :weaken-bound {cfg.limits.weaken_bound!r})")
    return "\n".join(lines) + "\n"
