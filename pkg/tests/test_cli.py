"""Tests for the command-line interface.

The CLI must be a thin adapter: its output is compared against direct
library calls, and identical invocations must produce identical bytes.
"""

import json
import subprocess
import sys

import pytest

from voa import (character, get_preset, heisenberg_npoint, render_state,
                 singular_part)
from voa.cli import parse_state, run
from voa.scalars import ParamPoint


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_state_roundtrip():
    alg = get_preset("virasoro").algebra
    v = parse_state(alg, "L(-2)^2 L(-3) |0>")
    expected = get_preset("virasoro").state(
        [("L", -2), ("L", -2), ("L", -3)])
    assert v == expected


def test_parse_state_errors():
    alg = get_preset("virasoro").algebra
    from voa.cli import CliError
    with pytest.raises(CliError, match="position"):
        parse_state(alg, "L(-2) X(-1) |0>")
    with pytest.raises(CliError, match="missing vacuum"):
        parse_state(alg, "L(-2)")


def test_verify_pass_and_exit_code(capsys):
    code, out, _ = _run(capsys, "verify", "--algebra", "heisenberg",
                        "--degree", "2")
    assert code == 0
    assert "all axioms pass" in out


def test_ope_virasoro_table(capsys):
    code, out, _ = _run(capsys, "ope", "--algebra", "virasoro",
                        "--a", "L(-2) |0>", "--b", "L(-2) |0>")
    assert code == 0
    assert out.strip() == "{4: (c/2) |0>, 2: 2 L(-2) |0>, 1: L(-3) |0>}"


def test_ope_matches_library(capsys):
    inst = get_preset("affine:sl2")
    alg = inst.algebra
    table = singular_part(alg, inst.gen_state("e"), inst.gen_state("f"))
    code, out, _ = _run(capsys, "ope", "--algebra", "affine:sl2",
                        "--a", "e(-1) v_k", "--b", "f(-1) v_k")
    assert code == 0
    body = ", ".join(f"{j}: {render_state(alg, table[j])}"
                     for j in sorted(table, reverse=True))
    assert out.strip() == "{" + body + "}"


def test_bracket_central_term(capsys):
    code, out, _ = _run(capsys, "bracket", "--algebra", "heisenberg",
                        "--a", "b(-1) |0>", "--b", "b(-1) |0>",
                        "--m", "2", "--n", "-2")
    assert code == 0
    assert out.strip() == "(2) * (|0>)_[0]"


def test_character_matches_library(capsys):
    inst = get_preset("heisenberg", lam=0)
    ch = character(inst, cutoff=6)
    code, out, _ = _run(capsys, "character", "--algebra", "heisenberg",
                        "--lambda", "0", "--cutoff", "6")
    assert code == 0
    assert out.strip() == ch.render()


def test_character_parametric_requires_param(capsys):
    code, _, err = _run(capsys, "character", "--algebra", "virasoro")
    assert code == 2
    assert "parametric" in err


def test_character_with_param(capsys):
    inst = get_preset("virasoro")
    ch = character(inst, cutoff=5, point=ParamPoint(c="1/2"))
    code, out, _ = _run(capsys, "character", "--algebra", "virasoro",
                        "--param", "c=1/2", "--cutoff", "5")
    assert code == 0
    assert out.strip() == ch.render()


def test_npoint_matches_library(capsys):
    code, out, _ = _run(capsys, "npoint", "--n", "4")
    assert code == 0
    assert out.strip() == heisenberg_npoint(None, 4).render()


def test_center_sl2_critical(capsys):
    code, out, _ = _run(capsys, "center", "--algebra", "affine:sl2",
                        "--param", "k=-2", "--degree", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["dimension"] == 1


def test_coset_heisenberg(capsys):
    code, out, _ = _run(capsys, "coset", "--algebra", "heisenberg",
                        "--states", "b(-1) |0>", "--degree", "1", "--json")
    assert code == 0
    assert json.loads(out)["dimension"] == 0


def test_coord_check(capsys):
    code, out, _ = _run(capsys, "coord-check", "--algebra", "heisenberg",
                        "--lambda", "0", "--state", "b(-1) |0>",
                        "--rho", "1, eps", "--check", "huang",
                        "--window", "2", "--degree", "2",
                        "--first-order", "eps")
    assert code == 0
    assert "pass" in out


def test_bf_check(capsys):
    code, out, _ = _run(capsys, "bf-check", "--degree", "2")
    assert code == 0
    assert "pass" in out


def test_unknown_algebra_exits_2(capsys):
    code, _, err = _run(capsys, "verify", "--algebra", "nope")
    assert code == 2
    assert "unknown preset" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "out.txt"
    code, out, _ = _run(capsys, "npoint", "--n", "2",
                        "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text() == heisenberg_npoint(None, 2).render() + "\n"


def _subprocess_bytes(argv):
    return subprocess.run(
        [sys.executable, "-m", "voa.cli"] + argv,
        capture_output=True, check=True).stdout


@pytest.mark.parametrize("argv", [
    ["ope", "--algebra", "virasoro", "--a", "L(-2) |0>", "--b", "L(-2) |0>"],
    ["character", "--algebra", "heisenberg", "--lambda", "0",
     "--cutoff", "8", "--json"],
    ["npoint", "--n", "4", "--json"],
    ["verify", "--algebra", "heisenberg", "--degree", "2", "--json"],
])
def test_byte_determinism(argv):
    first = _subprocess_bytes(argv)
    second = _subprocess_bytes(argv)
    assert first == second
    assert first  # nonempty output
