import io
import json
import subprocess
import sys

import pytest

from qhi import cli

KINDS = ["identity", "elliptic", "hyperbolic", "vertical", "non-vertical", "non-unipotent-2",
         "non-unipotent-3"]


def run(argv, stdin="", monkeypatch=None):
    """Run the CLI in-process; returns (exit code, stdout)."""
    out = io.StringIO()
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    monkeypatch.setattr(sys, "stdout", out)
    code = cli.main(argv)
    return code, out.getvalue()


def shell(cmd):
    return subprocess.run(cmd, shell=True, capture_output=True, text=True)


def test_vertical_witness_pipeline_exits_one():
    r = shell(f"{sys.executable} -m qhi random --kind vertical --n 1 --seed 0 | "
              f"{sys.executable} -m qhi witness --quiet")
    assert r.returncode == 1


def test_elliptic_reverse_verify_pipeline():
    py = f"{sys.executable} -m qhi"
    r = shell(f"{py} random --kind elliptic --n 3 --seed 1 | {py} reverse | {py} verify")
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["passed"] is True


def test_malformed_input_exit_four(tmp_path):
    bad = tmp_path / "malformed.json"
    bad.write_text("{not json")
    r = shell(f"{sys.executable} -m qhi classify --in {bad}")
    assert r.returncode == 4
    assert "malformed" in r.stderr


def test_classify_exit_codes(monkeypatch):
    doc = {"n": 1, "context": "sp_n1", "entries": [[[2, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0.5, 0, 0, 0]]]}
    code, _ = run(["classify"], json.dumps(doc), monkeypatch)
    assert code == 2
    doc["context"] = "sp_n1_hat"
    code, out = run(["classify"], json.dumps(doc), monkeypatch)
    assert code == 0 and json.loads(out)["kind"] == "hyperbolic"


def test_ill_conditioned_exit_three(monkeypatch):
    # null eigenvalues 2 e^{+-1e-4 i} are too close to merge cleanly and too
    # far apart to be treated as one real class
    from qhi.generators import hyperbolic_block
    from qhi.io import element_to_json
    g = hyperbolic_block(2.0, 1e-4)
    for cmd in ("classify", "witness", "reverse"):
        code, _ = run([cmd], json.dumps(element_to_json(g)), monkeypatch)
        assert code == 3


def test_factor_and_odd_dimension(monkeypatch):
    _, elem = run(["random", "--kind", "compact", "--n", "4", "--seed", "3"], "", monkeypatch)
    code, rep = run(["factor"], elem, monkeypatch)
    assert code == 0 and len(json.loads(rep)["factorization"]) == 4
    code, out = run(["verify"], rep, monkeypatch)
    assert code == 0
    _, elem = run(["random", "--kind", "compact", "--n", "3", "--seed", "3"], "", monkeypatch)
    code, _ = run(["factor"], elem, monkeypatch)
    assert code == 5


def test_random_params_and_flags(monkeypatch):
    code, out = run(["random", "--kind", "hyperbolic", "--n", "1", "--params", '{"r": 2, "theta": 0}',
                     "--json-indent", "2"], "", monkeypatch)
    assert code == 0 and "\n  " in out
    doc = json.loads(out)
    assert doc["entries"][0][0] == [2.0, 0.0, 0.0, 0.0]
    code, out = run(["--quiet", "random", "--kind", "elliptic", "--n", "1"], "", monkeypatch)
    assert code == 0 and out == ""
    code, _ = run(["random", "--kind", "elliptic", "--n", "1", "--params", "[1]"], "", monkeypatch)
    assert code == 4


def test_global_tol_before_subcommand(monkeypatch):
    _, elem = run(["random", "--kind", "elliptic", "--n", "2", "--seed", "1"], "", monkeypatch)
    _, rep = run(["reverse"], elem, monkeypatch)
    code, out = run(["--tol", "1e-30", "verify"], rep, monkeypatch)
    assert code == 1 and json.loads(out)["passed"] is False


def test_env_tolerance(monkeypatch):
    _, elem = run(["random", "--kind", "elliptic", "--n", "2", "--seed", "1"], "", monkeypatch)
    _, rep = run(["reverse"], elem, monkeypatch)
    monkeypatch.setenv("QHI_TOL", "1e-30")
    code, _ = run(["verify"], rep, monkeypatch)
    assert code == 1


def test_witness_true_exit_zero(monkeypatch):
    _, elem = run(["random", "--kind", "non-vertical", "--n", "2", "--seed", "5"], "", monkeypatch)
    code, out = run(["witness"], elem, monkeypatch)
    assert code == 0
    assert json.loads(out)["witness"] is not None


def test_verify_rejects_tampering(monkeypatch):
    _, elem = run(["random", "--kind", "hyperbolic", "--n", "2", "--seed", "2"], "", monkeypatch)
    _, rep = run(["reverse"], elem, monkeypatch)
    doc = json.loads(rep)
    doc["reverser"][0][1][2] += 0.5
    code, out = run(["verify"], json.dumps(doc), monkeypatch)
    assert code == 1
    failed = [c["clause"] for c in json.loads(out)["clauses"] if not c["passed"]]
    assert "reversal" in failed


def test_verify_needs_a_report(monkeypatch):
    _, elem = run(["random", "--kind", "elliptic", "--n", "1"], "", monkeypatch)
    code, _ = run(["verify"], elem, monkeypatch)
    assert code == 4


def test_verify_dir(tmp_path, monkeypatch):
    for seed, kind in enumerate(["elliptic", "vertical", "hyperbolic"]):
        _, elem = run(["random", "--kind", kind, "--n", "2", "--seed", str(seed)], "", monkeypatch)
        _, rep = run(["witness"], elem, monkeypatch)
        (tmp_path / f"r{seed}.json").write_text(rep)
    code, out = run(["verify", "--dir", str(tmp_path)], "", monkeypatch)
    assert code == 0
    assert [f["file"] for f in json.loads(out)["files"]] == ["r0.json", "r1.json", "r2.json"]
    (tmp_path / "r9.json").write_text("{}")
    code, _ = run(["verify", "--dir", str(tmp_path)], "", monkeypatch)
    assert code == 1


def test_pipeline_closure(monkeypatch):
    """random -> reverse -> verify passes for 1000 seeded cases."""
    failures = []
    for case in range(1000):
        kind = KINDS[case % len(KINDS)]
        n = 1 + (case // len(KINDS)) % 4
        if n == 1 and kind in ("non-vertical", "non-unipotent-3"):
            n = 2
        _, elem = run(["random", "--kind", kind, "--n", str(n), "--seed", str(case)], "", monkeypatch)
        _, rep = run(["reverse"], elem, monkeypatch)
        code, _ = run(["--quiet", "verify"], rep, monkeypatch)
        if code != 0:
            failures.append((kind, n, case))
    assert not failures
