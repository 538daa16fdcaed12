import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_hermite

from dwtunnel import morse, oracle, squarewell, wkbpara
from dwtunnel.core import InvSquare, MorsePair, ParabolicPair, PhysConfig, SquareWell, TurningPointError


def _contexts():
    sq = SquareWell(2.0, 1.0, 1.0, 2.0, 20.0)
    yield wkbpara.wkb_action(sq, squarewell.solve_spectrum_symmetric(sq)[0].energy)
    ms = MorsePair(20, 20, 2, 2, 2, 2, 6, 6)
    yield wkbpara.wkb_action(ms, morse.solve_oscillation_spectrum(ms)[2].energy)
    yield wkbpara.parabolic_context(ParabolicPair(1.0, 3.0), 0)
    yield wkbpara.parabolic_context(ParabolicPair(1.0, 2.5, phys=PhysConfig(wkb_prefactor=0.5)), 1)


@pytest.mark.parametrize("ctx", list(_contexts()))
def test_splitting_transmission_identity(ctx):
    D = wkbpara.wkb_transmission(ctx)
    assert wkbpara.splitting_from_transmission(ctx, D) == pytest.approx(wkbpara.wkb_splitting(ctx), rel=1e-14)


@pytest.mark.parametrize("ctx", list(_contexts())[1:3])
def test_wavefunction_form_equals_splitting(ctx):
    # symmetric barrier: 2 S_half = S
    assert 2 * ctx.half_action_right == pytest.approx(ctx.action, rel=1e-10)
    assert wkbpara.wkb_splitting_from_wavefunction(ctx) == pytest.approx(wkbpara.wkb_splitting(ctx), rel=1e-9)


def test_square_action_closed_form():
    spec = SquareWell(2.0, 0.5, 1.0, 2.0, 12.0)
    ctx = wkbpara.wkb_action(spec, 3.0)
    assert ctx.turning_points == (-0.5, 1.0)
    assert ctx.action == pytest.approx(math.sqrt(2 * 9.0) * 1.5, rel=1e-15)
    assert ctx.w_classical == pytest.approx(math.pi * math.sqrt(6.0) / 1.5)


@pytest.mark.parametrize(
    "spec,E0",
    [(ParabolicPair(1.0, 3.0), 0.5), (ParabolicPair(0.8, 2.0, phys=PhysConfig(mass=1.5)), 0.3), (MorsePair(20, 20, 2, 2, 2, 2, 6, 6), -5.0)],
)
def test_action_fixed_grid_agrees(spec, E0):
    adaptive = wkbpara.wkb_action(spec, E0).action
    assert wkbpara.action_fixed_grid(spec, E0) == pytest.approx(adaptive, rel=1e-7)


def test_parabolic_action_and_frequency_closed_form():
    # cusp barrier made of two parabola branches
    spec = ParabolicPair(1.2, 2.5)
    E0 = 0.6
    ctx = wkbpara.wkb_action(spec, E0)
    xt = 2.5 - math.sqrt(2 * E0) / 1.2
    assert ctx.turning_points == pytest.approx((-xt, xt), rel=1e-12)
    ref = quad(lambda x: math.sqrt(max(1.44 * (abs(x) - 2.5) ** 2 - 2 * E0, 0.0)), -xt, xt, points=[0.0])[0]
    assert ctx.action == pytest.approx(ref, rel=1e-10)
    # harmonic well: w_classical = w exactly
    assert ctx.w_classical == pytest.approx(1.2, rel=1e-9)


def test_morse_classical_frequency():
    # Morse orbit frequency alpha sqrt(2 |E| / m) for a well far from the junction
    spec = MorsePair(20, 20, 2, 2, 2, 2, 6, 6)
    E0 = -12.0
    ctx = wkbpara.wkb_action(spec, E0)
    assert ctx.w_classical == pytest.approx(2 * math.sqrt(2 * 12.0), rel=1e-6)


def test_turning_point_errors():
    with pytest.raises(TurningPointError):
        wkbpara.wkb_action(InvSquare(1.0, 0.5), 3.0)
    with pytest.raises(TurningPointError):
        wkbpara.wkb_action(SquareWell(2, 0.5, 0.5, 2, 5.0), 6.0)
    with pytest.raises(TurningPointError):
        wkbpara.wkb_action(SquareWell(2, 0, 0, 2, 5.0), 1.0)
    with pytest.raises(TurningPointError):
        wkbpara.wkb_action(ParabolicPair(1.0, 1.0), 0.6)


def test_square_barrier_ratio_bound():
    for U0 in (5.0, 20.0, 50.0):
        for width in (1.0, 2.0):
            spec = SquareWell(2.0, width / 2, width / 2, 2.0, U0)
            for x in (0.05, 0.25, 0.5, 0.75, 0.95):
                ctx = wkbpara.wkb_action(spec, x * U0)
                if ctx.action < 3:
                    continue
                r = wkbpara.wkb_transmission(ctx) / squarewell.transmission(spec, x * U0).D
                assert 0.25 <= r <= 4


@pytest.mark.parametrize("x", [0.01, 0.2, 0.5, 0.9])
def test_square_barrier_ratio_thick_limit(x):
    # exact D -> 16 x (1 - x) exp(-2 S) for a thick barrier
    spec = SquareWell(4.0, 2.0, 2.0, 4.0, 40.0)
    ctx = wkbpara.wkb_action(spec, x * 40.0)
    r = wkbpara.wkb_transmission(ctx) / squarewell.transmission(spec, x * 40.0).D
    assert r == pytest.approx(1 / (16 * x * (1 - x)), rel=1e-6)


@pytest.mark.parametrize("a", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", range(6))
def test_parabolic_normalization_vs_quadrature(a, n):
    spec = ParabolicPair(1.0, a)
    assert wkbpara.normalization_sq(spec, n) == pytest.approx(wkbpara.normalization_quadrature(spec, n), rel=1e-8)


def test_normalization_independent_quadrature():
    # oracle uses scipy's Hermite rather than the package's
    spec = ParabolicPair(1.4, 1.2, phys=PhysConfig(hbar=0.9, mass=1.1))
    al = math.sqrt(1.1 * 1.4 / 0.9)
    for n in range(4):
        val = quad(lambda x: math.exp(-((al * (x - 1.2)) ** 2)) * eval_hermite(n, al * (x - 1.2)) ** 2, 0, np.inf)[0]
        assert wkbpara.normalization_sq(spec, n) == pytest.approx(1 / val, rel=1e-8)


def test_normalization_without_power_differs():
    spec = ParabolicPair(1.0, 1.0)
    assert wkbpara.normalization_sq_without_power(spec, 0) == wkbpara.normalization_sq(spec, 0)
    for n in (1, 2, 3):
        q = wkbpara.normalization_quadrature(spec, n)
        assert abs(wkbpara.normalization_sq_without_power(spec, n) / q - 1) > 1e-3


@pytest.mark.parametrize("a", [2.5, 3.0, 3.5])
def test_parabolic_gap_vs_oracle(a):
    spec = ParabolicPair(1.0, a)
    lev = wkbpara.parabolic_splitting(spec, 0)
    ref = oracle.solve_spec(spec, 2, n_points=8000).energies
    assert lev.gap == pytest.approx(ref[1] - ref[0], rel=0.02)
    assert lev.gap == pytest.approx(2 * lev.delta_E_n)
    assert 0.5 * (lev.E_plus + lev.E_minus) == pytest.approx(0.5)


def test_parabolic_splitting_shrinks_with_separation():
    gaps = [wkbpara.parabolic_splitting(ParabolicPair(1.0, a), 0).gap for a in (2.0, 2.5, 3.0, 3.5)]
    assert np.all(np.diff(gaps) < 0)
    # log-slope approaches -alpha^2 a^2 behaviour: ratio of successive gaps grows
    logs = np.log(gaps)
    assert np.all(np.diff(np.diff(logs)) < 0)
