import csv
import io
import json
import math

import numpy as np
import pytest

from dwtunnel import squarewell
from dwtunnel.cli import main
from dwtunnel.core import SquareWell

SQ = "d=2,c=1,a=1,b=2,U0=5,W0=0"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    footer = dict(ln[2:].split(",", 1) for ln in text.splitlines() if ln.startswith("# "))
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    return rows[0], np.array(rows[1:], dtype=float), footer


def test_solve_invsq_harmonic(capsys):
    code, out, _ = run(capsys, "solve", "--potential", "invsq", "--params", "w=1,B=0", "--levels", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert [lv["energy"] for lv in doc["spectrum"]] == pytest.approx([0.5, 1.5, 2.5])
    assert doc["ladder_period"] == pytest.approx(math.pi)
    # both ladders together repeat after 2 pi
    assert doc["commensurability"]["period"] == pytest.approx(2 * math.pi)


def test_solve_square_oracle(capsys):
    code, out, _ = run(capsys, "solve", "--potential", "square", "--params", SQ, "--oracle")
    assert code == 0
    doc = json.loads(out)
    assert {"spectrum", "excluded", "notes", "commensurability", "transmission", "splittings"} <= set(doc)
    assert doc["oracle_max_deviation"] <= 1e-4
    assert all(lv["deviation"] <= 1e-4 for lv in doc["spectrum"])


def test_solve_parabolic(capsys):
    code, out, _ = run(capsys, "solve", "--potential", "parabolic", "--params", "w=1,a=2", "--levels", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["splittings"][0]["delta_E_n"] == pytest.approx(2.07e-2, rel=5e-3)
    assert len(doc["splittings"]) == 3


def test_solve_morse(capsys):
    code, out, _ = run(capsys, "solve", "--potential", "morse", "--params", "A=20,B=20,alpha=2,beta=2,a=2,c=2,d=6,b=6", "--levels", "4")
    assert code == 0
    assert len(json.loads(out)["spectrum"]) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--potential", "square", "--params", "d=2,c=1,a=1"],
        ["solve", "--potential", "square", "--params", SQ + ",zz=3"],
        ["solve", "--potential", "square", "--params", "d=2,c=1,a=1,b=2,U0=x"],
        ["solve", "--potential", "invsq", "--params", "w=-1"],
        ["sweep", "--potential", "square", "--params", SQ, "--vary", "T:1:2", "--emit", "D_of_T"],
        ["validate", "--only", "nonsense"],
        ["solve", "--potential", "square", "--params", SQ, "--levels", "0"],
    ],
)
def test_parameter_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "parameter error" in err


def test_solver_failure_exit_3(capsys):
    # Morse wells too shallow to hold a level
    code, _, err = run(capsys, "solve", "--potential", "morse", "--params", "A=0.01,B=0.01,alpha=5,beta=5,a=0.1,c=0.1,d=0.2,b=0.2")
    assert code == 3
    assert "solver error" in err


def test_sweep_d_of_t_monotone(capsys):
    spec = SquareWell(2, 1, 1, 2, 5)
    T0 = squarewell.limiting_period(spec)
    code, out, _ = run(capsys, "sweep", "--potential", "square", "--params", SQ, "--vary", f"T:{0.3 * T0}:{3 * T0}:40", "--emit", "D_of_T")
    assert code == 0
    header, data, _ = read_csv(out)
    assert header == ["T", "D"]
    d = data[:, 1]
    d = d[np.isfinite(d)]
    assert len(d) > 5
    diffs = np.diff(d)
    assert np.all(diffs <= 0) or np.all(diffs >= 0)


def test_sweep_parabolic_splitting_slope(capsys):
    code, out, _ = run(capsys, "sweep", "--potential", "parabolic", "--params", "w=1,a=2", "--vary", "a:2.5:4:16", "--emit", "splitting")
    assert code == 0
    _, data, _ = read_csv(out)
    a, gap = data[:, 0], data[:, 1]
    slope = np.polyfit(a**2, np.log(gap), 1)[0]
    # alpha = 1: exponential factor exp(-alpha^2 a^2)
    assert slope == pytest.approx(-1.0, abs=0.15)


def test_sweep_residual_brackets_levels(capsys):
    spec = SquareWell(2, 1, 1, 2, 5)
    sp = squarewell.solve_spectrum_symmetric(spec)
    kmax = squarewell.k_max(spec)
    code, out, _ = run(capsys, "sweep", "--potential", "square", "--params", SQ, "--vary", f"k:0.01:{kmax * 0.999}:4001", "--emit", "residual", "--levels", "2")
    assert code == 0
    header, data, _ = read_csv(out)
    assert header == ["k", "f1", "f2_1_even", "f2_1_odd"]
    k = data[:, 0]
    for j, lv in enumerate(sp[:2]):
        g = data[:, 1] - data[:, 2 + j]
        ok = np.isfinite(g[:-1]) & np.isfinite(g[1:]) & (np.sign(g[:-1]) != np.sign(g[1:]))
        crossings = [(k[i], k[i + 1]) for i in np.nonzero(ok)[0] if abs(g[i] - g[i + 1]) < 1.0]
        kn = math.sqrt(2 * lv.energy)
        assert any(lo <= kn <= hi for lo, hi in crossings)


def test_sweep_spectrum_and_bit_stability(capsys):
    argv = ["sweep", "--potential", "square", "--params", SQ, "--vary", "U0:3:8:5", "--emit", "spectrum", "--levels", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    header, data, _ = read_csv(first)
    assert header == ["U0", "E0", "E1", "E2"]
    assert data.shape == (5, 4)


def test_simulate_doublet(capsys):
    code, out, _ = run(capsys, "simulate", "--potential", "square", "--params", SQ, "--packet", "doublet:0", "--steps", "11")
    assert code == 0
    header, data, footer = read_csv(out)
    assert header == ["t", "abs_autocorrelation", "P_left", "P_right"]
    assert data[0, 2] + data[0, 3] == pytest.approx(1.0, abs=1e-9)
    assert float(footer["measured_period"]) == pytest.approx(float(footer["poincare_period"]), rel=1e-6)


def test_simulate_invsq_revival(capsys):
    code, out, _ = run(capsys, "simulate", "--potential", "invsq", "--params", "w=1,B=0.5", "--packet", "all", "--t-max", str(math.pi), "--steps", "3")
    assert code == 0
    _, data, _ = read_csv(out)
    assert data[-1, 0] == pytest.approx(math.pi)
    assert data[-1, 1] >= 1 - 1e-10


def test_validate_filter(capsys):
    code, out, _ = run(capsys, "validate", "--only", "invsq")
    assert code == 0
    assert "InvSquare" in out
    assert "Morse" not in out
