# tests/test_frontend.py

import tempfile
import unittest
from pathlib import Path

from app.errors import ConfigurationError, ParseError
from app.frontend.build import build_spec_config, config_hash, load_config, read_config_text
from app.frontend.ir import If, Let, Return
from app.frontend.parser import parse_config, parse_spec, print_config
from app.frontend.paths import compile_config, contract_instance, paths_to_queries
from app.frontend.sexpr import SList, Symbol, read_all
from app.logic.features import build_feature_set
from app.logic.formula import TRUE, ConstEq, Exists, Forall, Implies, Lit, PredApp
from app.logic.sorts import ELEMENT, Role, Var, quantified_vars
from tests.base import fixture_path, fixture_text

(U,) = quantified_vars(1)

FIXTURES = ("concat.cfg", "concat_unsafe.cfg", "queue_requeue.cfg", "set_maket.cfg")

CONTRACTS = """
(datatype list)
(predicate mem (list elem) :impl list-mem)
(library top ((s list)) elem :impl list-top)
(library is_empty ((s list)) bool :impl list-is-empty)

(client first ((s list)) elem
  (requires (exists ((u elem)) (mem s u)))
  (ensures (mem s nu))
  (body (let h (top s)) (return h)))

(client pick ((s list)) elem
  (ensures (mem s nu))
  (body
    (let b (is_empty s))
    (if b
      ((let x (first s)) (return x))
      ((if b
         ((let y (top s)) (return y))
         ((let z (first s)) (return z)))))))
"""


def _with_body(body: str, ensures: str = "(mem nu u)") -> str:
    return f"""
(datatype list)
(predicate mem (list elem) :impl list-mem)
(library push ((x elem) (s list)) list :impl list-push)
(library is_empty ((s list)) bool :impl list-is-empty)
(client c ((a elem) (s list)) list
  (ensures (forall ((u elem)) {ensures}))
  (body {body}))
"""


class TestReader(unittest.TestCase):
    def test_positions(self):
        forms = read_all("; comment\n(a (b c)\n   d)")
        self.assertEqual(len(forms), 1)
        form = forms[0]
        self.assertIsInstance(form, SList)
        self.assertEqual((form.line, form.column), (2, 1))
        self.assertEqual(form.head(), "a")
        self.assertEqual(form[1][1], Symbol("c", 2, 7))
        self.assertEqual((form[2].line, form[2].column), (3, 4))

    def test_unbalanced(self):
        with self.assertRaises(ParseError):
            read_all("(a (b)")


class TestParseConfig(unittest.TestCase):
    def test_fixtures_parse(self):
        for name in FIXTURES:
            with self.subTest(name=name):
                cfg = parse_config(fixture_text(name))
                self.assertEqual(len(cfg.clients), 1)

    def test_concat_declarations(self):
        cfg = parse_config(fixture_text("concat.cfg"))
        self.assertEqual(cfg.datatypes, ("list",))
        self.assertEqual([p.name for p in cfg.predicates], ["hd", "mem"])
        self.assertEqual([d.name for d in cfg.libraries], ["is_empty", "top", "tail", "push"])
        self.assertEqual(cfg.generator.seed, 7)
        self.assertEqual(cfg.generator.samples_per_round, 10)
        self.assertEqual(cfg.solver.timeout_ms, 5000)
        self.assertEqual(cfg.limits.max_qvars, 2)
        self.assertEqual(cfg.limits.weaken_bound, 60.0)

    def test_concat_body(self):
        client = parse_config(fixture_text("concat.cfg")).client("concat")
        self.assertIsInstance(client.body[0], Let)
        branch = client.body[1]
        self.assertIsInstance(branch, If)
        self.assertEqual(branch.cond.name, "b")
        self.assertIsInstance(branch.then[0], Return)
        self.assertEqual([s.function for s in branch.orelse[:-1]], ["top", "tail", "concat", "push"])
        self.assertIsInstance(client.ensures, Forall)

    def test_print_then_parse(self):
        """
        Printing a parsed configuration and parsing it again gives the same configuration.
        """
        for name in FIXTURES + ("contracts",):
            with self.subTest(name=name):
                text = CONTRACTS if name == "contracts" else fixture_text(name)
                cfg = parse_config(text)
                self.assertEqual(parse_config(print_config(cfg)), cfg)

    def test_defaults(self):
        cfg = parse_config(CONTRACTS)
        self.assertEqual(cfg.generator.seed, 0)
        self.assertIsNone(cfg.solver.timeout_ms)
        self.assertEqual(cfg.limits.max_qvars, 3)

    def test_empty_file(self):
        with self.assertRaises(ParseError) as ctx:
            parse_config("; only a comment\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (1, 1))

    def test_unknown_predicate_is_positioned(self):
        text = _with_body("(let r (push a s)) (return r)", ensures="(hd nu u)")
        with self.assertRaises(ParseError) as ctx:
            parse_config(text)
        self.assertIn("unknown predicate", str(ctx.exception))
        self.assertEqual(ctx.exception.line, 7)

    def test_rejected_configurations(self):
        cases = {
            "unknown datatype": "(datatype set)",
            "bad impl": "(datatype list)\n(library top ((s list)) elem :impl list-pop)",
            "no client": "(datatype list)\n(predicate mem (list elem) :impl list-mem)",
            "quantifier name": _with_body("(return s)").replace("((u elem)) (mem nu u)", "((x elem)) (mem nu x)"),
            "after return": _with_body("(return s) (let r (push a s))"),
            "unbound on path": _with_body("(let b (is_empty s)) (if b ((let r (push a s)) (return r)) ((return r)))"),
            "bad guard": _with_body("(if a ((return s)) ((return s)))"),
            "ssa": _with_body("(let r (push a s)) (let r (push a r)) (return r)"),
            "wrong sort": _with_body("(let r (push s a)) (return r)"),
            "no return": _with_body("(let r (push a s))"),
            "return sort": _with_body("(return a)"),
            "unknown option": _with_body("(return s)") + "(generator :size 3)",
            "twice": _with_body("(return s)") + "(solver :timeout 10)\n(solver :timeout 20)",
            "empty domain": _with_body("(return s)") + "(generator :elem-min 4 :elem-max 1)",
        }
        for name, text in cases.items():
            with self.subTest(name=name):
                with self.assertRaises(ParseError):
                    parse_config(text)

    def test_duplicate_names(self):
        text = _with_body("(return s)") + "(library c ((s list)) list :impl list-tail)"
        with self.assertRaises(ParseError) as ctx:
            parse_config(text)
        self.assertIn("names declared twice: c", str(ctx.exception))


class TestPaths(unittest.TestCase):
    def test_concat_queries(self):
        """
        concat has a base path with is_empty only and a recursive path with four applications.
        """
        cfg = parse_config(fixture_text("concat.cfg"))
        base, rec = paths_to_queries(cfg.client("concat"), cfg)
        self.assertEqual((base.name, rec.name), ("concat#0", "concat#1"))
        self.assertEqual([a.function for a in base.apps], ["is_empty"])
        self.assertEqual([a.function for a in rec.apps], ["is_empty", "top", "tail", "push"])
        self.assertEqual(rec.constraints, (ConstEq(rec.apps[0].result, False),))
        self.assertEqual([v.name for v in rec.auxiliaries], ["r"])
        self.assertEqual([v.name for v in rec.inputs], ["s1", "s2"])
        self.assertIsInstance(rec.phi, Implies)

    def test_contract_calls_and_pruning(self):
        """
        A repeated guard on the same variable is pruned instead of forking the path again.
        """
        cfg = parse_config(CONTRACTS)
        queries = compile_config(cfg)
        self.assertEqual([q.name for q in queries], ["first#0", "pick#0", "pick#1"])
        pick0 = queries[1]
        self.assertEqual([v.name for v in pick0.auxiliaries], ["x"])
        assumption = pick0.phi.lhs
        self.assertIsInstance(assumption, Implies)
        self.assertIsInstance(assumption.lhs, Exists)
        self.assertEqual([v.name for v in queries[2].auxiliaries], ["z"])

    def test_contract_instance_renames(self):
        cfg = parse_config(CONTRACTS)
        first = cfg.client("first")
        s = first.params[0]
        x = Var("x", ELEMENT, Role.RESULT)
        node = contract_instance(first, (s,), x)
        self.assertEqual(node.rhs, Lit(PredApp(cfg.predicate("mem").predicate, (s, x))))
        self.assertEqual(node.lhs, Exists((U,), Lit(PredApp(cfg.predicate("mem").predicate, (s, U)))))

    def test_requires_becomes_premise(self):
        cfg = parse_config(CONTRACTS)
        (query,) = paths_to_queries(cfg.client("first"), cfg)
        self.assertIsInstance(query.phi, Implies)
        self.assertIsInstance(query.phi.lhs, Exists)


class TestParseSpec(unittest.TestCase):
    def setUp(self):
        cfg = parse_config(fixture_text("concat.cfg"))
        self.predicates = {p.name: p.predicate for p in cfg.predicates}
        self.fs = build_feature_set(cfg.method_predicates, cfg.library("push").signature, quantified_vars(1))

    def test_reads_features(self):
        phi = parse_spec("(forall ((u elem)) (implies (= x u) (mem nu u)))", self.fs, self.predicates)
        x_eq_u, mem_nu_u = self.fs.features[4], self.fs.features[3]
        self.assertEqual(phi.body, Implies(Lit(x_eq_u), Lit(mem_nu_u)))
        self.assertEqual(phi.to_sexpr(), "(forall ((u elem)) (implies (= x u) (mem nu u)))")

    def test_constant_needs_no_prefix(self):
        self.assertEqual(parse_spec("true", self.fs, self.predicates).body, TRUE)

    def test_rejects_non_features(self):
        with self.assertRaises(ConfigurationError):
            parse_spec("(forall ((u elem)) (mem s x))", self.fs, self.predicates)
        with self.assertRaises(ConfigurationError):
            parse_spec("(= x x)", self.fs, self.predicates)
        with self.assertRaises(ConfigurationError):
            parse_spec("(forall ((v elem)) (mem s v))", self.fs, self.predicates)


class TestBuild(unittest.TestCase):
    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            read_config_text(Path("/nonexistent/concat.cfg"))

    def test_binary_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.cfg"
            path.write_bytes(b"\xff\xfe\x00")
            with self.assertRaises(ConfigurationError):
                read_config_text(path)

    def test_hash_is_stable(self):
        text = fixture_text("concat.cfg")
        self.assertEqual(config_hash(text), config_hash(text))
        self.assertEqual(len(config_hash(text)), 16)
        self.assertNotEqual(config_hash(text), config_hash(text + " "))

    def test_flags_override_file(self):
        cfg = load_config(fixture_path("concat.cfg"))
        spec_cfg = build_spec_config(cfg, name="concat", seed=99, samples=3, max_qvars=1, weaken_bound=5.0)
        self.assertEqual(spec_cfg.runtime.gen.seed, 99)
        self.assertEqual(spec_cfg.runtime.gen.samples_per_round, 3)
        self.assertEqual(spec_cfg.k_max, 1)
        self.assertEqual(spec_cfg.weaken_bound, 5.0)
        self.assertEqual(len(spec_cfg.queries), 2)

        defaults = build_spec_config(cfg)
        self.assertEqual(defaults.runtime.gen.seed, 7)
        self.assertEqual(defaults.k_max, 2)


if __name__ == "__main__":
    unittest.main()
