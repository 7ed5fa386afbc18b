"""Tests for the command-line surface and its exit codes."""

import json
from collections.abc import Callable
from pathlib import Path

import pytest

from fracmatch.main import dispatch


def test_eval_text(capsys: pytest.CaptureFixture[str]):
    """Test the human-readable evaluation of one (n, k)."""
    assert dispatch(["eval", "--n", "10", "--k", "3"]) == 0
    out = capsys.readouterr().out
    assert "p(10,3) = 85" in out
    assert "q(10,3) = 35" in out
    assert "p + q = C(n,k): holds" in out


def test_eval_json(capsys: pytest.CaptureFixture[str]):
    """Test the JSON payload keys and values."""
    assert dispatch(["eval", "--n", "10", "--k", "3", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {
        "summary", "complement", "mms", "divisibility", "periodicity", "periodicityP",
    }
    assert payload["summary"]["p"]["value"] == 85
    assert payload["summary"]["binomial"] == 120
    assert payload["complement"]["holds"] is True


def test_eval_scan(capsys: pytest.CaptureFixture[str]):
    """Test a small identity scan."""
    assert dispatch(["eval", "--scan", "12", "--mms-n-max", "12"]) == 0
    assert "identity scan up to n=12" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [["eval"], ["nope"], ["eval", "--n", "x", "--k", "3"], ["optimize", "--n", "8", "--k", "2"]],
)
def test_usage_errors(argv: list[str]):
    """Test that bad command lines exit with status 1."""
    assert dispatch(argv) == 1


def test_version(capsys: pytest.CaptureFixture[str]):
    """Test that --version exits cleanly with the package version."""
    assert dispatch(["--version"]) == 0
    assert "fracmatch 0.1.0" in capsys.readouterr().out


def test_bad_run_file(run_file: Callable[[dict], str]):
    """Test that unknown run-file keys exit with status 1."""
    path = run_file({"bogus": 1})
    assert dispatch(["eval", "--n", "10", "--k", "3", "--config", path]) == 1


def test_missing_run_file(tmp_path: Path):
    """Test that a missing run file exits with status 1."""
    assert dispatch(["eval", "--n", "10", "--k", "3", "--config", str(tmp_path / "no.yaml")]) == 1


def test_bounds_report(capsys: pytest.CaptureFixture[str]):
    """Test the report with and without --strict."""
    assert dispatch(["bounds"]) == 0
    assert "small_a_threshold" in capsys.readouterr().out
    assert dispatch(["bounds", "--report", "--strict"]) == 2


def test_bounds_gap_and_lower_sums(capsys: pytest.CaptureFixture[str]):
    """Test the exact gap and the lower-sum checks."""
    assert dispatch(["bounds", "--gap", "1000", "240", "500"]) == 0
    assert "below 1/4: True" in capsys.readouterr().out
    assert dispatch(["bounds", "--lower-sums", "--n-list", "100"]) == 0
    assert "failing b = [1]" in capsys.readouterr().out
    assert dispatch(["bounds", "--lower-sums", "--n-list", "100", "--strict"]) == 2


def test_oracle(capsys: pytest.CaptureFixture[str]):
    """Test both brute-force sides against the formulas."""
    assert dispatch(["oracle", "--n", "4", "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert "q(4,2): oracle 3, formula 3" in out
    assert "p(4,2): oracle 3, formula 3" in out
    assert dispatch(["oracle", "--n", "9", "--k", "2", "--q"]) == 1


def test_oracle_pfm(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    """Test certificates for edge-list files."""
    matching = tmp_path / "matching.txt"
    matching.write_text("4 2\n1 2\n3 4\n", encoding="utf-8")
    assert dispatch(["oracle", "--pfm", str(matching)]) == 0
    assert "perfect fractional matching" in capsys.readouterr().out

    star = tmp_path / "star.txt"
    star.write_text("4 2\n1 2\n1 3\n1 4\n", encoding="utf-8")
    assert dispatch(["oracle", "--pfm", str(star), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "omega" in payload

    broken = tmp_path / "broken.txt"
    broken.write_text("4 2\n1 9\n", encoding="utf-8")
    assert dispatch(["oracle", "--pfm", str(broken)]) == 1


def test_sweep_stop_and_resume(tmp_path: Path, capsys: pytest.CaptureFixture[str]):
    """Test a clean sweep, an interrupted one and a refused resume."""
    def argv(name: str, n_max: int, *extra: str) -> list[str]:
        return [
            "sweep", "--n-min", "2", "--n-max", str(n_max), "--jobs", "1",
            "--out", str(tmp_path / f"{name}.jsonl"),
            "--checkpoint", str(tmp_path / f"{name}.json"),
            *extra,
        ]

    assert dispatch(argv("clean", 30)) == 0
    assert "violations 0" in capsys.readouterr().out
    assert dispatch(argv("partial", 30, "--stop-after", "2")) == 3
    assert "interrupted, " in capsys.readouterr().out
    assert dispatch(argv("partial", 31, "--resume")) == 1
    assert dispatch(argv("partial", 30, "--resume")) == 0
    assert (tmp_path / "partial.jsonl").read_bytes() == (tmp_path / "clean.jsonl").read_bytes()


def test_sweep_from_run_file(run_file: Callable[[dict], str], tmp_path: Path):
    """Test that the run file's sweep mapping is used under the CLI flags."""
    path = run_file({
        "sweep": {
            "n_max": 12,
            "out_path": str(tmp_path / "run.jsonl"),
            "checkpoint_path": str(tmp_path / "run.json"),
        },
    })
    assert dispatch(["sweep", "--jobs", "1", "--config", path]) == 0
    checkpoint = json.loads((tmp_path / "run.json").read_text())
    assert checkpoint["completed_n"][-1] == 12


def test_sweep_audit(capsys: pytest.CaptureFixture[str]):
    """Test the filter audit subcommand."""
    assert dispatch(["sweep", "--audit", "50", "--audit-n-max", "200", "--seed", "4"]) == 0
    assert "0 disagreements" in capsys.readouterr().out
    argv = ["sweep", "--audit", "80", "--audit-n-max", "40", "--audit-full-range", "--json"]
    assert dispatch(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["violations"] > 0
    assert payload["disagreements"] == []


def test_optimize(run_file: Callable[[dict], str], capsys: pytest.CaptureFixture[str]):
    """Test a short annealing run configured from a run file."""
    path = run_file({
        "smooth": {"sigma_schedule": [0.2, 0.05, 0.01], "max_iters": 30, "restarts": 2,
                   "workers": 1, "seed": 3},
    })
    assert dispatch(["optimize", "--n", "8", "--k", "2", "--a", "4", "--config", path]) == 0
    out = capsys.readouterr().out
    assert "a=4: N*=" in out
    assert "p_conjectured=" in out
