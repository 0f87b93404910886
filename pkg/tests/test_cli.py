import json
from pathlib import Path

import pytest

from ordlocus.cli import EXIT_COMPUTE, EXIT_OK, EXIT_USAGE, run_cli

GOLDEN = Path(__file__).parent / "golden"

# small builds keep the end-to-end tests quick
FAST = ["--seeds", "40"]


@pytest.fixture
def fig8(tmp_path):
    path = tmp_path / "fig8.pres"
    assert run_cli(["twobridge", "5", "3", "-o", str(path), "--genus", "1"]) == EXIT_OK
    return path


@pytest.mark.parametrize("command", ["", "twobridge", "alex", "locus", "orderable", "plot"])
def test_help_matches_golden(capsys, command):
    argv = [command, "--help"] if command else ["--help"]
    assert run_cli(argv) == EXIT_OK
    name = f"help_{command}.txt" if command else "help.txt"
    assert capsys.readouterr().out == (GOLDEN / name).read_text(encoding="utf-8")


def test_help_lists_defaults():
    text = (GOLDEN / "help_locus.txt").read_text(encoding="utf-8")
    for flag in ("--window", "--seeds", "--el", "--slopes", "--no-alexander-seeding"):
        assert flag in text
    assert "(default: 200)" in text


def test_usage_errors(capsys, tmp_path):
    assert run_cli([]) == EXIT_USAGE
    assert run_cli(["frobnicate"]) == EXIT_USAGE
    assert run_cli(["twobridge", "5"]) == EXIT_USAGE
    assert run_cli(["alex", str(tmp_path / "missing.pres")]) == EXIT_USAGE
    assert "cannot read" in capsys.readouterr().err


def test_invalid_inputs_exit_one(capsys, tmp_path):
    assert run_cli(["twobridge", "4", "1"]) == EXIT_USAGE
    bad = tmp_path / "bad.pres"
    bad.write_text("generators: a b\nrelator: abX\n")
    assert run_cli(["alex", str(bad)]) == EXIT_USAGE
    assert "line 2" in capsys.readouterr().err
    broken = tmp_path / "broken.json"
    broken.write_text('{"version": ')
    assert run_cli(["plot", str(broken), "-o", str(tmp_path / "x.svg")]) == EXIT_USAGE


def test_bad_build_options(fig8, tmp_path):
    out = str(tmp_path / "l.json")
    assert run_cli(["locus", str(fig8), "-o", out, "--seeds", "0"]) == EXIT_USAGE
    assert run_cli(["locus", str(fig8), "-o", out, "--window", "-1", "8"]) == EXIT_USAGE


def test_twobridge_to_stdout(capsys):
    assert run_cli(["twobridge", "7", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "generators: a b" in out
    assert "relator:" in out


def test_alex_text_and_json(capsys, fig8):
    assert run_cli(["alex", str(fig8)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "t^2 - 3t + 1"
    assert "Alexander point x = 0.481211825" in out
    assert run_cli(["alex", str(fig8), "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["coefficients"] == [1, -3, 1]
    assert len(doc["alexander_points"]) == 2


def test_locus_orderable_plot_end_to_end(capsys, fig8, tmp_path):
    out = tmp_path / "fig8.json"
    svg = tmp_path / "fig8.svg"
    table = tmp_path / "fig8.csv"
    code = run_cli(["locus", str(fig8), "-o", str(out), "--svg", str(svg), "--csv", str(table)] + FAST)
    assert code == EXIT_OK
    assert json.loads(out.read_text())["version"] == "ordlocus-locus-v1"
    assert svg.read_text().startswith("<?xml")
    assert table.read_text().startswith("stream,")

    capsys.readouterr()
    assert run_cli(["orderable", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "(-4.0" in text or "(-3.9" in text

    assert run_cli(["orderable", str(out), "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["intervals"]) == 1

    quotient = tmp_path / "q.svg"
    assert run_cli(["plot", str(out), "-o", str(quotient), "--quotient"]) == EXIT_OK
    assert "PL " in quotient.read_text()


def test_orderable_from_presentation_with_el_range(capsys, tmp_path):
    pres = tmp_path / "52.pres"
    assert run_cli(["twobridge", "7", "3", "-o", str(pres), "--genus", "1"]) == EXIT_OK
    assert run_cli(["orderable", str(pres), "--el-range", "-2", "0", "--json"] + FAST) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["intervals"]


def test_outputs_are_deterministic(fig8, tmp_path):
    outputs = []
    for n in range(2):
        out, svg = tmp_path / f"{n}.json", tmp_path / f"{n}.svg"
        assert run_cli(["locus", str(fig8), "-o", str(out), "--svg", str(svg)] + FAST) == EXIT_OK
        outputs.append((out.read_bytes(), svg.read_bytes()))
    assert outputs[0] == outputs[1]


def test_computation_failure_exit_code(monkeypatch, fig8, tmp_path):
    from ordlocus import cli
    from ordlocus.tracer import TraceError

    def boom(*args, **kwargs):
        raise TraceError("no seed converged")

    monkeypatch.setattr(cli, "build_locus", boom)
    assert run_cli(["locus", str(fig8), "-o", str(tmp_path / "l.json")]) == EXIT_COMPUTE
