# tests/test_cli.py

import json
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

from app.errors import ConfigurationError
from app.utils.report import RunReport
from cli import app
from tests.base import BaseCLITest, fixture_path, requires_z3

METRICS = {
    "quantified_var_count": 1,
    "cex_count": 2,
    "gathered_vector_count": 5,
    "positive_vector_count": {"maket": 8},
    "weakening_iterations": 1,
    "feature_set_sizes": {"maket": 4},
    "non_maximal": [],
    "solver_queries": 12,
    "time_distinguish": "Max",
}
TIMINGS = {"wall_ms": 40.0, "time_consistent_ms": 30.0, "time_weaken_ms": 9.5, "time_distinguish_ms": "Max"}


def make_report(outcome: str = "interface", exit_code: int = 0, **kwargs) -> RunReport:
    report = RunReport(
        config="set_maket",
        config_hash="0123456789abcdef",
        seed=3,
        outcome=outcome,
        exit_code=exit_code,
        shape={"functions": 1, "applications": 1, "predicates": 1, "queries": 1},
        metrics=dict(METRICS),
        timings=dict(TIMINGS),
    )
    if outcome == "interface":
        report.interface = [{
            "function": "maket",
            "params": [["x", "elem"], ["l", "tree"], ["r", "tree"]],
            "result": ["nu", "tree"],
            "spec": "(forall ((u elem)) (iff (mem nu u) (or (mem l u) (mem r u) (= x u))))",
            "rendered": "∀u, mem(nu,u) ⟺ (mem(l,u) ∨ mem(r,u) ∨ x=u)",
            "positive": 8,
            "maximal": True,
        }]
    for key, value in kwargs.items():
        setattr(report, key, value)
    return report


class TestRunCommand(BaseCLITest):
    def setUp(self):
        super().setUp()
        self.run_config = self._patch("app.commands.run.run_config")

    def test_interface_exits_zero(self):
        self.run_config.return_value = make_report()
        result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg"))])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("maket", result.output)

    def test_counterexample_exits_one(self):
        """
        A counterexample prints the failing query and the offending inputs.
        """
        self.run_config.return_value = make_report(
            "counterexample",
            1,
            counterexample={"query": "concat#1", "inputs": {"s1": [0], "s2": []}, "shown": {"s1": "[0]", "s2": "[]"}},
        )
        result = self.runner.invoke(app, ["run", str(fixture_path("concat_unsafe.cfg"))])
        self.assertEqual(result.exit_code, 1)
        self.assertIn("concat#1", result.output)
        self.assertIn("s1 = [0]", result.output)

    def test_aborted_exits_two(self):
        self.run_config.return_value = make_report("aborted", 2, reason="no safe interface with up to 0 quantified variables")
        result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg"))])
        self.assertEqual(result.exit_code, 2)
        self.assertIn("no safe interface", result.output)

    def test_configuration_error_exits_two(self):
        self.run_config.side_effect = ConfigurationError("Configuration file 'missing.cfg' does not exist.")
        result = self.runner.invoke(app, ["run", "missing.cfg"])
        self.assertEqual(result.exit_code, 2)
        self.assertIn("does not exist", result.output)

    def test_usage_error_exits_64(self):
        """
        Bad flags exit with 64 so they cannot be mistaken for an aborted run.
        """
        result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg")), "--seed", "many"])
        self.assertEqual(result.exit_code, 64)
        result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg")), "--no-such-flag"])
        self.assertEqual(result.exit_code, 64)
        result = self.runner.invoke(app, ["frobnicate"])
        self.assertEqual(result.exit_code, 64)
        result = self.runner.invoke(app, ["run"])
        self.assertEqual(result.exit_code, 64)
        result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg")), "--format", "yaml"])
        self.assertEqual(result.exit_code, 64)
        self.run_config.assert_not_called()

    def test_help(self):
        result = self.runner.invoke(app, ["run", "--help"])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("--max-qvars", result.output)

    def test_flags_reach_options(self):
        self.run_config.return_value = make_report()
        self.runner.invoke(
            app,
            ["run", "x.cfg", "--seed", "5", "--timeout-smt", "100", "--weaken-bound", "2.5",
             "--max-qvars", "1", "--samples", "4", "--recheck"],
        )
        path, options = self.run_config.call_args.args
        self.assertEqual(path, Path("x.cfg"))
        self.assertEqual(
            (options.seed, options.timeout_ms, options.weaken_bound, options.max_qvars, options.samples, options.recheck),
            (5, 100, 2.5, 1, 4, True),
        )

    def test_json_lines_output(self):
        self.run_config.return_value = make_report()
        result = self.runner.invoke(app, ["run", "x.cfg", "--format", "json-lines"])
        self.assertEqual(result.exit_code, 0)
        data = json.loads(result.output.strip().splitlines()[-1])
        self.assertEqual(data["outcome"], "interface")
        self.assertEqual(data["interface"][0]["positive"], 8)

    def test_out_file(self):
        self.run_config.return_value = make_report()
        with tempfile.TemporaryDirectory() as tmp:
            out = Path(tmp) / "report.json"
            self.runner.invoke(app, ["run", "x.cfg", "--out", str(out)])
            self.assertEqual(RunReport.from_json(out.read_text()), make_report())

    def test_record(self):
        """
        --record stores the run and one row per inferred specification.
        """
        self.run_config.return_value = make_report()
        result = self.runner.invoke(app, ["run", "x.cfg", "--record"])
        self.assertEqual(result.exit_code, 0)
        self.mock_db.add.assert_called_once()
        self.mock_db.commit.assert_called_once()
        run = self.mock_db.add.call_args.args[0]
        self.assertEqual(run.config_name, "set_maket")
        self.assertEqual(run.positive_vector_count, 8)
        self.assertEqual([s.function for s in run.specs], ["maket"])


class TestBenchCommand(BaseCLITest):
    def setUp(self):
        super().setUp()
        self.run_config = self._patch("app.commands.bench.run_config")
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)
        for name in ("set_maket.cfg", "concat.cfg"):
            shutil.copy(fixture_path(name), self.tmp / name)

    def test_table_and_sidecar(self):
        self.run_config.side_effect = lambda path, options: make_report(config=path.stem)
        result = self.runner.invoke(app, ["bench", str(self.tmp)])
        self.assertEqual(result.exit_code, 0)
        self.assertIn("Benchmarks", result.output)
        lines = (self.tmp / "bench.jsonl").read_text().splitlines()
        self.assertEqual([json.loads(line)["config"] for line in lines], ["concat", "set_maket"])

    def test_failing_benchmark_is_an_error_row(self):
        """
        One broken configuration does not stop the suite, but the exit code reports it.
        """
        def fake(path, options):
            if path.stem == "concat":
                raise ConfigurationError("1:1: unknown form 'foo'")
            return make_report(config=path.stem)

        self.run_config.side_effect = fake
        result = self.runner.invoke(app, ["bench", str(self.tmp), "--format", "json-lines"])
        self.assertEqual(result.exit_code, 2)
        rows = [json.loads(line) for line in result.output.strip().splitlines() if line.startswith("{")]
        self.assertEqual([r["outcome"] for r in rows], ["error", "interface"])
        self.assertIn("unknown form", rows[0]["reason"])

    def test_custom_sidecar(self):
        self.run_config.side_effect = lambda path, options: make_report(config=path.stem)
        out = self.tmp / "results" / "all.jsonl"
        out.parent.mkdir()
        result = self.runner.invoke(app, ["bench", str(self.tmp), "--out", str(out), "--seed", "9"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(len(out.read_text().splitlines()), 2)
        self.assertEqual(self.run_config.call_args.args[1].seed, 9)

    def test_missing_directory(self):
        result = self.runner.invoke(app, ["bench", str(self.tmp / "nowhere")])
        self.assertEqual(result.exit_code, 2)

    def test_empty_directory(self):
        empty = self.tmp / "empty"
        empty.mkdir()
        result = self.runner.invoke(app, ["bench", str(empty)])
        self.assertEqual(result.exit_code, 2)
        self.assertIn("No *.cfg files", result.output)

    def test_record(self):
        self.run_config.side_effect = lambda path, options: make_report(config=path.stem)
        result = self.runner.invoke(app, ["bench", str(self.tmp), "--record"])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(self.mock_db.add.call_count, 2)


@requires_z3
class TestEndToEnd(BaseCLITest):
    def test_run_set_maket(self):
        result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg")), "--recheck"])
        self.assertEqual(result.exit_code, 0)

    def test_run_unsafe_concat(self):
        result = self.runner.invoke(app, ["run", str(fixture_path("concat_unsafe.cfg"))])
        self.assertEqual(result.exit_code, 1)
        self.assertIn("concat#1", result.output)

    def test_same_seed_same_report(self):
        """
        Apart from timings, two runs with the same seed produce the same report.
        """
        reports = []
        for _ in range(2):
            result = self.runner.invoke(app, ["run", str(fixture_path("set_maket.cfg")), "--format", "json-lines"])
            data = json.loads(result.output.strip().splitlines()[-1])
            data.pop("timings")
            reports.append(data)
        self.assertEqual(reports[0], reports[1])
