import math

import numpy as np
import pytest
from scipy.integrate import quad

from dwtunnel import invsq, oracle
from dwtunnel.core import InvSquare, PhysConfig
from dwtunnel.dynamics import commensurate_delta, poincare_period
from dwtunnel.oracle import eigenstates, problem_for


def test_b_zero_is_harmonic_oscillator():
    spec = InvSquare(1.3)
    sp = invsq.spectrum_exact(spec, 4)
    assert sp.energies == pytest.approx([1.3 * (n + 0.5) for n in range(10)], rel=1e-14)
    assert [lv.parity for lv in sp][:4] == ["even", "odd", "even", "odd"]


@pytest.mark.parametrize("B", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("phys", [PhysConfig(), PhysConfig(hbar=0.7, mass=1.6)])
def test_plus_ladder_matches_half_line_oracle(B, phys):
    spec = InvSquare(1.7, B, phys=phys)
    sp = invsq.physical_spectrum(spec, 5)
    ref = oracle.solve_spec(spec, 6, n_points=8000).energies
    assert sp.energies == pytest.approx(ref, rel=2e-5)


def test_minus_ladder_not_physical_and_noted():
    spec = InvSquare(1.0, 0.4)
    sp = invsq.spectrum_exact(spec, 3)
    assert any("impenetrable" in n for n in sp.notes)
    ref = oracle.solve_spec(spec, 4).energies
    minus = [lv.energy for lv in sp if lv.parity == "even"]
    assert all(min(abs(E - r) for r in ref) > 1e-2 for E in minus)


def test_full_spectrum_at_b_zero_matches_oracle():
    spec = InvSquare(0.9)
    ref = oracle.solve_spec(spec, 8, n_points=8000).energies
    assert invsq.spectrum_exact(spec, 3).energies == pytest.approx(ref, rel=1e-5)


def test_spacing_period_splitting():
    for w, B in [(1.0, 0.0), (1.7, 0.3), (0.5, 2.0)]:
        spec = InvSquare(w, B)
        E = [invsq.level_energy(spec, n, "+") for n in range(4)]
        assert np.diff(E) == pytest.approx([invsq.ladder_spacing(spec)] * 3, rel=1e-13)
        assert invsq.period(spec) == pytest.approx(2 * math.pi / invsq.ladder_spacing(spec))
        split = invsq.level_energy(spec, 2, "+") - invsq.level_energy(spec, 2, "-")
        assert invsq.splitting(spec) == pytest.approx(split, rel=1e-13)


def test_period_from_commensurability():
    spec = InvSquare(1.7, 0.3)
    rep = commensurate_delta(invsq.physical_spectrum(spec, 6))
    assert poincare_period(rep) == pytest.approx(math.pi / 1.7, rel=1e-10)
    # both ladders at generic B are not commensurate
    assert commensurate_delta(invsq.spectrum_exact(spec, 6)).delta is None


def test_d_dependency_consistent():
    spec = InvSquare(1.4, 0.8, phys=PhysConfig(hbar=1.1, mass=0.9))
    dd = invsq.d_dependency(spec)
    T = invsq.period(spec)
    delta = invsq.ladder_spacing(spec)
    assert dd.of_period(T) == pytest.approx(dd.of_delta(delta), rel=1e-13)
    direct = math.pi**2 * (1 + 4 * (0.9 * 1.4 * 0.8 / 1.1) ** 2)
    assert dd.at_spec(spec) == pytest.approx(direct, rel=1e-13)
    # decreasing in T
    assert np.all(np.diff(dd.of_period(np.linspace(1, 5, 9))) < 0)


@pytest.mark.parametrize("B", [0.0, 0.5])
def test_eigenfunction_matches_oracle(B):
    spec = InvSquare(1.0, B)
    x, _, vecs = eigenstates(problem_for(spec, 6000, half_line=True), 3)
    for n in range(3):
        phi = invsq.eigenfunction(spec, n, "+")
        nrm = math.sqrt(quad(lambda t: phi(t) ** 2, 0, 15, limit=200)[0])
        v = np.array([phi(t) for t in x]) / nrm
        h = x[1] - x[0]
        assert abs(np.dot(v, vecs[:, n]) * h) == pytest.approx(1.0, abs=1e-5)


def test_eigenfunction_solves_equation():
    spec = InvSquare(1.2, 0.7)
    for n, br in [(0, "+"), (2, "+"), (1, "-")]:
        phi = invsq.eigenfunction(spec, n, br)
        E = invsq.level_energy(spec, n, br)
        for x in (0.6, 1.1, 1.9):
            h = 1e-3
            d2 = (phi(x + h) - 2 * phi(x) + phi(x - h)) / h**2
            U = 0.5 * 1.2**2 * (x * x + 0.49 / (x * x))
            assert -0.5 * d2 + U * phi(x) == pytest.approx(E * phi(x), abs=1e-5 * max(1, abs(E * phi(x))))


def test_verify_quantization():
    for spec in (InvSquare(1.0), InvSquare(1.3, 0.6)):
        for chk in invsq.verify_quantization(spec, 5):
            assert chk.a_hyp == pytest.approx(-chk.n, abs=1e-12)
            assert chk.polynomial_error < 1e-12
