# -*- coding: utf-8 -*-
"""
Unit tests for the command line front-end (app.py).

Commands run through click's CliRunner inside an isolated directory, so no
config.json from the working tree leaks in. JSON output is parsed from
stdout; logs go to stderr.
"""

import json
import os
import tempfile
import unittest
from unittest.mock import patch

from click.testing import CliRunner

from torusdiv import __version__
from torusdiv.app import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, cli, main
from torusdiv.certificates import Diagnostic, DiagnosticCode
from torusdiv.divisor import example_es, example_es2, example_es3


def write_json(path, data):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f)


class TestCli(unittest.TestCase):
    """
    Runs every subcommand end to end and checks exit codes and payloads.
    """

    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, *args, env=None):
        return self.runner.invoke(cli, list(args), env=env)

    def invoke_json(self, *args):
        result = self.invoke(*args, "--output", "json")
        return result, json.loads(result.stdout) if result.stdout.strip() else None

    def test_version(self):
        result = self.invoke("--version")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertIn(__version__, result.stdout)

    def test_stabilizer(self):
        """The stabilizer of X^2 = 1 is the group of order 2."""
        with self.runner.isolated_filesystem():
            result, data = self.invoke_json("stabilizer", "--poly", "X1^2 - 1", "--dim", "1")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(data["stabilizer"], "(0, [2])")
        self.assertEqual(data["dimension"], 0)
        self.assertEqual(data["invariant_factors"], [2])

    def test_stabilizer_parse_error(self):
        with self.runner.isolated_filesystem():
            result = self.invoke("stabilizer", "--poly", "X1 $ 1", "--dim", "1")
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertIn("position 3", result.output)

    def test_erdos_power_pair(self):
        with self.runner.isolated_filesystem():
            result, data = self.invoke_json("erdos", "--x", "2", "--y", "4", "--n-max", "40")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(data["k"], 2)
        self.assertTrue(data["inclusion_holds"])
        self.assertEqual(data["bound_reached"], 40)

    def test_erdos_violation(self):
        with self.runner.isolated_filesystem():
            result, data = self.invoke_json("erdos", "--x", "2", "--y", "3", "--n-max", "20")
        self.assertEqual(result.exit_code, EXIT_NEGATIVE)
        self.assertEqual(data["violation"], {"n": 2, "witness": 3})

    def test_erdos_rejects_small_bases(self):
        with self.runner.isolated_filesystem():
            result = self.invoke("erdos", "--x", "1", "--y", "3")
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_certify_es(self):
        """ES needs h = 2: the morphism only matches on even n."""
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            result, data = self.invoke_json("certify", "--instance", "es.json")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(data["kind"], "morphism")
        self.assertEqual(data["A"], [["1"]])
        self.assertEqual(data["h"], 2)
        self.assertEqual(data["instance"]["g2"], ["-2"])

    def test_certify_text_output(self):
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            result = self.invoke("certify", "--instance", "es.json")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertIn("verification", result.stdout)
        self.assertIn("pass", result.stdout)
        self.assertNotIn("FAIL", result.stdout)

    def test_certify_is_deterministic(self):
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            first = self.invoke("certify", "--instance", "es.json", "--output", "json").stdout
            second = self.invoke("certify", "--instance", "es.json", "--output", "json").stdout
        self.assertEqual(first, second)

    def test_certify_diagnostic(self):
        with self.runner.isolated_filesystem():
            write_json("es2.json", example_es2().to_json())
            result, data = self.invoke_json("certify", "--instance", "es2.json")
        self.assertEqual(result.exit_code, EXIT_NEGATIVE)
        self.assertEqual(data["kind"], "diagnostic")
        self.assertEqual(data["code"], "HYPOTHESIS")

    def test_certify_input_errors(self):
        """Missing, malformed and schema-violating instance files exit with code 2."""
        with self.runner.isolated_filesystem():
            self.assertEqual(self.invoke("certify", "--instance", "missing.json").exit_code, EXIT_INPUT)
            with open("broken.json", "w", encoding="utf-8") as f:
                f.write("{not json")
            self.assertEqual(self.invoke("certify", "--instance", "broken.json").exit_code, EXIT_INPUT)
            write_json("extra.json", {**example_es().to_json(), "note": "x"})
            self.assertEqual(self.invoke("certify", "--instance", "extra.json").exit_code, EXIT_INPUT)
            write_json("bad_poly.json", {**example_es().to_json(), "F1": "X1 +"})
            self.assertEqual(self.invoke("certify", "--instance", "bad_poly.json").exit_code, EXIT_INPUT)
            self.assertEqual(self.invoke("certify").exit_code, EXIT_INPUT)

    def test_invalid_options(self):
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            result = self.invoke("certify", "--instance", "es.json", "--threshold", "1.5")
            self.assertEqual(result.exit_code, EXIT_INPUT)
            result = self.invoke("certify", "--instance", "es.json", "--s-primes", "2,x")
            self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_threads_env(self):
        with self.runner.isolated_filesystem():
            result = self.invoke("stabilizer", "--poly", "X1 - 1", "--dim", "1",
                                 env={"TORUSDIV_THREADS": "zero"})
        self.assertEqual(result.exit_code, EXIT_INPUT)

    @patch("torusdiv.app.certify_morphism")
    def test_no_evidence_skips_scan(self, mock_certify):
        """--no-evidence hands n_max=None to the construction."""
        mock_certify.return_value = Diagnostic(DiagnosticCode.VERIFY_FAIL, "verify", "stub")
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            result = self.invoke("certify", "--instance", "es.json", "--no-evidence", "--threshold", "0.9")
        self.assertEqual(result.exit_code, EXIT_NEGATIVE)
        args = mock_certify.call_args.args
        self.assertIsNone(args[1])
        self.assertEqual(args[2], 0.9)

    def test_gene(self):
        with self.runner.isolated_filesystem():
            write_json("es2.json", example_es2().to_json())
            result, data = self.invoke_json("gene", "--instance", "es2.json")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(data["Q"], [["1", "0"]])
        self.assertEqual(data["F0"], "X1 - 1")

    def test_hypothesis(self):
        with self.runner.isolated_filesystem():
            write_json("es3.json", example_es3().to_json())
            result, data = self.invoke_json("hypothesis", "--instance", "es3.json")
        self.assertEqual(result.exit_code, EXIT_NEGATIVE)
        self.assertFalse(data["passed"])

    def test_bbs(self):
        with self.runner.isolated_filesystem():
            write_json("pair.json", {"g1": ["2", "3"], "g2": ["6"], "F1": "X1*X2 - 1", "F2": "X1 - 1"})
            result, data = self.invoke_json("bbs", "--instance", "pair.json", "--n-max", "12")
            self.assertEqual(result.exit_code, EXIT_OK)
            self.assertEqual(data["A"], [["1", "1"]])
            write_json("miss.json", {"g1": ["2"], "g2": ["5"], "F1": "X1 - 1", "F2": "X1 - 1"})
            result, data = self.invoke_json("bbs", "--instance", "miss.json", "--n-max", "6")
            self.assertEqual(result.exit_code, EXIT_NEGATIVE)
            self.assertEqual(data["code"], "INSUFFICIENT_EVIDENCE")

    def test_scan(self):
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            result, data = self.invoke_json("scan", "--instance", "es.json", "--n-max", "20", "--mode", "ideal")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(data["ideal_hits"], [1] + list(range(2, 21, 2)))
        self.assertEqual(data["residue_evidence"], {"0": 1.0, "1": 0.1})
        self.assertEqual(data["torsion_order"], 2)
        self.assertNotIn("support_hits", data)

    def test_scan_support_below_threshold(self):
        """Odd n break the support inclusion for ES, so the overall share is 11/20."""
        with self.runner.isolated_filesystem():
            write_json("es.json", example_es().to_json())
            result, data = self.invoke_json("scan", "--instance", "es.json", "--n-max", "20", "--mode", "both")
        self.assertEqual(result.exit_code, EXIT_NEGATIVE)
        self.assertEqual(data["support_hits"], [1] + list(range(2, 21, 2)))

    def test_counting_integer(self):
        with self.runner.isolated_filesystem():
            result, data = self.invoke_json("counting", "--example", "integer", "--count", "10")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertAlmostEqual(data["fits"][0]["exponent"], 1.0, delta=0.05)

    def test_counting_pair(self):
        with self.runner.isolated_filesystem():
            result, data = self.invoke_json("counting", "--example", "ce", "--r-min", "2", "--r-max", "200")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertTrue(data["germ_inclusion"])
        self.assertFalse(data["same_growth"])
        self.assertEqual([f["order"] for f in data["fits"]], [1, 2])

    def test_counting_degenerate_grid(self):
        with self.runner.isolated_filesystem():
            result = self.invoke("counting", "--example", "integer", "--count", "5")
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_counting_point_budget_option(self):
        """A budget below the estimated point count is an input error, not a long run."""
        with self.runner.isolated_filesystem():
            result = self.invoke("counting", "--example", "gaussian", "--point-budget", "1000")
            self.assertEqual(result.exit_code, EXIT_INPUT)
            self.assertIn("budget is", result.output)
            result = self.invoke("counting", "--example", "gaussian", "--point-budget", "0")
            self.assertEqual(result.exit_code, EXIT_INPUT)
            self.assertIn("point_budget", result.output)

    def test_counting_point_budget_from_config(self):
        with self.runner.isolated_filesystem():
            write_json("run.json", {"point_budget": 5000})
            result = self.invoke("--config", "run.json", "counting", "--example", "integer", "--count", "10")
            self.assertEqual(result.exit_code, EXIT_OK)
            result = self.invoke("--config", "run.json", "counting", "--example", "gaussian")
            self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_counting_zero_set_file(self):
        with self.runner.isolated_filesystem():
            write_json("z.json", {"parts": [{"offset": ["0", "0"], "periods": [["1", "0"], ["0", "1"]]}]})
            result, data = self.invoke_json("counting", "--zero-set", "z.json", "--r-min", "2", "--r-max", "200")
        self.assertEqual(result.exit_code, EXIT_OK)
        self.assertEqual(data["example"], "file")
        self.assertEqual(data["fits"][0]["order"], 2)

    def test_config_file(self):
        """Settings from --config apply when no option overrides them."""
        with self.runner.isolated_filesystem():
            write_json("run.json", {"output": "json", "n_max": 20, "other_tool": True})
            result = self.invoke("--config", "run.json", "erdos", "--x", "3", "--y", "9")
        self.assertEqual(result.exit_code, EXIT_OK)
        data = json.loads(result.stdout)
        self.assertEqual(data["n_max"], 20)


class TestMain(unittest.TestCase):

    def test_main_returns_exit_codes(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = os.path.join(tmp, "config.json")
            self.assertEqual(main(["--config", config, "stabilizer", "--poly", "X1 - 1", "--dim", "1"]), EXIT_OK)
            self.assertEqual(main(["--config", config, "erdos", "--x", "1", "--y", "3"]), EXIT_INPUT)
            self.assertEqual(main(["--config", config, "erdos", "--x", "2", "--y", "3", "--n-max", "5"]),
                             EXIT_NEGATIVE)


if __name__ == "__main__":
    unittest.main(verbosity=2)
