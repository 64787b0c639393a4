import json
import subprocess
import sys

import pytest

from kmt.cli import DEMOS, fixture_path, main


def run_cli(args):
    from io import StringIO
    import contextlib
    out = StringIO()
    with contextlib.redirect_stdout(out):
        code = main(args)
    return code, out.getvalue()


class TestRoots:
    def test_a1_height_one(self):
        code, out = run_cli(["roots", "--matrix", fixture_path("a1.json"),
                             "--height", "1"])
        assert code == 0
        assert out.strip() == "[1]  mult=1  real"

    def test_a1tilde_json(self):
        code, out = run_cli(["roots", "--matrix",
                             fixture_path("a1tilde.json"),
                             "--height", "5", "--format", "json"])
        assert code == 0
        rows = json.loads(out)
        by_root = {tuple(r["root"]): r for r in rows}
        assert by_root[(1, 1)] == {"root": [1, 1], "mult": 1, "real": False}
        assert by_root[(2, 3)]["real"]

    def test_hyperbolic_includes_imaginary(self):
        code, out = run_cli(["roots", "--matrix", fixture_path("hyp3.json"),
                             "--height", "4", "--format", "json"])
        assert code == 0
        rows = json.loads(out)
        assert {"root": [1, 1], "mult": 1, "real": False} in rows

    def test_toml_document(self):
        code, out = run_cli(["roots", "--matrix",
                             fixture_path("a1tilde.toml"),
                             "--height", "3", "--format", "json"])
        assert code == 0
        assert json.loads(out)

    def test_height_cap(self, monkeypatch):
        monkeypatch.setenv("KMT_MAX_HEIGHT", "4")
        import io, contextlib
        err = io.StringIO()
        with contextlib.redirect_stderr(err):
            code, _ = run_cli(["roots", "--matrix", fixture_path("a1.json"),
                               "--height", "10"])
        assert code == 2


class TestDemos:
    @pytest.mark.parametrize("name", DEMOS)
    def test_every_demo_passes(self, name):
        code, out = run_cli(["demo", name, "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["pass"]
        assert all(c["pass"] for c in payload["checks"])

    def test_text_output_has_pass_lines(self):
        code, out = run_cli(["demo", "mitzman"])
        assert code == 0
        assert out.count("PASS") >= 4 and "FAIL" not in out

    def test_deterministic_bytes(self):
        _, out1 = run_cli(["demo", "enclosure", "--format", "json"])
        _, out2 = run_cli(["demo", "enclosure", "--format", "json"])
        assert out1 == out2

    def test_counterexample_orders(self):
        code, out = run_cli(["demo", "counterexample-6-10",
                             "--format", "json"])
        payload = json.loads(out)
        assert payload["orders"] == [8, 16]


class TestUsage:
    def test_no_command(self):
        import io, contextlib
        with contextlib.redirect_stderr(io.StringIO()):
            assert main([]) == 2

    def test_subprocess_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "kmt.cli", "demo", "mitzman"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "PASS" in proc.stdout
