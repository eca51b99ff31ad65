"""End-to-end checks of the derham command-line tool.

Usage: cli_test.py <derham binary> <data dir>
"""

import json
import math
import os
import shutil
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

BINARY = ""
DATA = ""


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("DERHAM_TOL", None)
    full_env.update(env or {})
    return subprocess.run([BINARY, *args], capture_output=True, text=True, env=full_env, timeout=300)


def example(name):
    return os.path.join(DATA, "examples", name)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        schemas = {}
        for name in ("cli.schema.json", "reproduce.schema.json"):
            with open(os.path.join(DATA, "schema", name)) as f:
                schemas[name] = json.load(f)
        registry = Registry().with_resources(
            (name, Resource.from_contents(s)) for name, s in schemas.items()
        )
        cls.validator = jsonschema.Draft202012Validator(schemas["cli.schema.json"], registry=registry)

    def json_of(self, *args, code=0):
        result = run("--json", *args)
        self.assertEqual(result.returncode, code, result.stderr)
        doc = json.loads(result.stdout)
        self.validator.validate(doc)
        return doc

    def text_of(self, *args, code=0):
        result = run(*args)
        self.assertEqual(result.returncode, code, result.stderr)
        return result.stdout.strip()

    def test_forms(self):
        self.assertEqual(self.text_of("forms", "d", "--in", example("xy.json")), "y dx + x dy")
        self.assertEqual(self.text_of("forms", "is-closed", "--in", example("omega0.json")), "closed: yes")
        self.assertEqual(self.text_of("forms", "is-closed", "--in", example("x_dy.json")), "closed: no")
        # Degree 3 on the plane is the zero form.
        self.assertEqual(self.text_of("forms", "wedge", "--a", example("dxdy.json"), "--b", example("dx.json")), "0")
        self.assertEqual(self.text_of("forms", "wedge", "--a", example("dx.json"), "--b", example("dy.json")), "dx∧dy")
        self.assertEqual(
            self.text_of("forms", "pullback", "--map", example("circle_map.json"), "--in", example("omega0.json")), "dt"
        )
        for args in (
            ("forms", "d", "--in", example("omega0.json")),
            ("forms", "wedge", "--a", example("xy.json"), "--b", example("dx.json")),
            ("forms", "pullback", "--map", example("circle_map.json"), "--in", example("x_dy.json")),
            ("forms", "is-closed", "--in", example("dx.json")),
        ):
            self.json_of(*args)

    def test_form_output_round_trips(self):
        doc = self.json_of("forms", "d", "--in", example("xy.json"))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "dxy.json")
            with open(path, "w") as f:
                json.dump(doc["form"], f)
            self.assertEqual(self.text_of("forms", "d", "--in", path), "0")
            self.assertEqual(self.json_of("forms", "d", "--in", path)["form"]["degree"], 2)

    def test_betti_and_kunneth(self):
        self.assertEqual(self.text_of("betti", "--in", example("circle.json")), "[1,1]")
        self.assertEqual(self.json_of("betti", "--in", example("torus.json"))["betti"], [1, 2, 1])
        self.assertEqual(self.json_of("betti", "--in", example("zero_complex.json"))["betti"], [1, 1])
        self.assertEqual(self.text_of("kunneth", "--a", "circle", "--b", "circle"), "[1,2,1]")
        doc = self.json_of("kunneth", "--a", example("circle_profile.json"), "--b", "sphere2")
        self.assertEqual(doc["betti"], [1, 1, 1, 1])

    def test_mv(self):
        self.assertEqual(self.json_of("mv", "--in", example("circle_cover.json"))["betti"], [1, 1])
        self.assertEqual(self.json_of("mv", "--in", example("torus_bands.json"))["betti"], [1, 2, 1])
        self.assertEqual(self.json_of("mv", "--in", example("torus_cover.json"))["betti"], [1, 2, 1])

    def test_mv_underdetermined_is_inconclusive(self):
        with open(example("torus_cover.json")) as f:
            cover = json.load(f)
        cover.pop("j_ranks", None)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cover.json")
            with open(path, "w") as f:
                json.dump(cover, f)
            doc = self.json_of("mv", "--in", path, code=3)
            self.assertFalse(doc["determined"])
            self.assertIn("underdetermined", doc["betti"])

    def test_duality(self):
        self.assertEqual(self.json_of("duality", "--in", "torus")["status"], "pass")
        self.assertEqual(self.json_of("duality", "--in", example("bad_profile.json"))["status"], "fail")
        self.assertEqual(self.json_of("duality", "--in", "line")["status"], "refused")

    def test_zigzag(self):
        doc = self.json_of("zigzag", "--in", example("circle_arcs.json"))
        self.assertTrue(doc["exactness"]["exact"])
        self.assertEqual(doc["betti_a_from_sequence"], [1, 1])
        self.assertTrue(self.json_of("zigzag", "--in", example("ses_example.json"))["exactness"]["exact"])

    def test_integration(self):
        doc = self.json_of("integrate", "--form", example("x_dy.json"), "--chain", example("circle_cycle.json"))
        self.assertAlmostEqual(doc["value"], math.pi, delta=1e-8)
        doc = self.json_of("stokes", "--form", example("x_dy.json"), "--chain", example("triangle_chain.json"))
        self.assertLess(doc["residual"], 1e-8)

    def test_periods(self):
        doc = self.json_of("periods", "--forms", example("omega0.json"), "--cycles", example("unit_circle_simplex.json"))
        self.assertAlmostEqual(doc["matrix"][0][0], 2 * math.pi, delta=1e-8)
        self.assertEqual(doc["rank"], 1)
        doc = self.json_of("periods", "--forms", example("torus_forms.json"), "--cycles", example("torus_cycles.json"))
        self.assertEqual(doc["rank"], 2)

    def test_deterministic(self):
        args = ("--json", "periods", "--forms", example("omega0.json"), "--cycles", example("winding_cycles.json"))
        self.assertEqual(run(*args).stdout, run(*args).stdout)

    def test_tolerance_sources(self):
        args = ("integrate", "--form", example("x_dy.json"), "--chain", example("circle_cycle.json"))
        self.assertEqual(run(*args, env={"DERHAM_TOL": "1e-6"}).returncode, 0)
        self.assertEqual(run(*args, env={"DERHAM_TOL": "abc"}).returncode, 2)
        self.assertEqual(run("--tol", "-1", *args).returncode, 2)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "out.json")
            self.assertEqual(run("--json", "--out", path, "betti", "--in", example("sphere2.json")).returncode, 0)
            with open(path) as f:
                self.assertEqual(json.load(f)["betti"], [1, 0, 1])

    def test_invalid_input(self):
        self.assertEqual(run("betti", "--in", example("missing.json")).returncode, 2)
        self.assertEqual(run("kunneth", "--a", "klein", "--b", "circle").returncode, 2)
        self.assertEqual(run("betti").returncode, 2)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.json")
            with open(path, "w") as f:
                f.write('{"coords": ["x"], "degree": 1, "terms": [{"coeff": "1/0", "dx": [1]}]}')
            result = run("forms", "d", "--in", path)
            self.assertEqual(result.returncode, 2)
            self.assertIn("error", result.stderr)

    def test_reproduce(self):
        doc = self.json_of("reproduce", "--data-dir", DATA)
        self.assertTrue(doc["passed"])
        self.assertEqual([item["id"] for item in doc["items"]], list(range(1, 11)))
        text = self.text_of("reproduce", "--data-dir", DATA)
        self.assertEqual(sum(line.startswith("PASS") for line in text.splitlines()), 10)

    def test_reproduce_with_corrupted_golden(self):
        with tempfile.TemporaryDirectory() as tmp:
            copy = os.path.join(tmp, "data")
            shutil.copytree(DATA, copy)
            golden = os.path.join(copy, "golden", "acceptance.json")
            with open(golden) as f:
                doc = json.load(f)
            doc["torus"]["kunneth"] = [1, 3, 1]
            with open(golden, "w") as f:
                json.dump(doc, f)
            result = run("reproduce", "--data-dir", copy)
            self.assertEqual(result.returncode, 1)
            failing = [line for line in result.stdout.splitlines() if line.startswith("FAIL")]
            self.assertEqual(len(failing), 1)
            self.assertIn("[2]", failing[0])
            self.assertIn("kunneth (1,2,1)", failing[0])

            with open(golden, "w") as f:
                f.write("{ not json")
            result = run("--json", "reproduce", "--data-dir", copy)
            self.assertEqual(result.returncode, 1)
            report = json.loads(result.stdout)
            self.validator.validate(report)
            self.assertFalse(any(item["passed"] for item in report["items"]))


if __name__ == "__main__":
    BINARY, DATA = sys.argv[1], sys.argv[2]
    unittest.main(argv=sys.argv[:1], verbosity=2)
