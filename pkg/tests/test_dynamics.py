import math

import numpy as np
import pytest

from dwtunnel import morse, squarewell
from dwtunnel.core import DomainError, IncommensurateError, PhysConfig, SquareWell
from dwtunnel.dynamics import (
    autocorrelation,
    commensurate_delta,
    doublet_packet,
    make_packet,
    measured_period,
    occupation_model,
    packet_from_spectrum,
    poincare_period,
    quasi_cycle_search,
    well_occupation,
)


def test_packet_validation():
    with pytest.raises(DomainError):
        make_packet([1.0, 1.0])
    with pytest.raises(DomainError):
        make_packet([1.0, 2.0], [0.0, 0.0])
    p = make_packet([0.0, 1.0, 3.0], [1.0, 2.0, 2.0])
    assert p.weights == pytest.approx([1 / 9, 4 / 9, 4 / 9])
    assert p.energy_range == 3.0


def test_commensurate_examples():
    rep = commensurate_delta([1.0, 2.0, 4.0])
    assert rep.delta == pytest.approx(1.0)
    assert rep.l_values == (0, 1, 3)
    assert rep.period == pytest.approx(2 * math.pi)
    rep = commensurate_delta([0.0, 0.5, 1.25])
    assert rep.delta == pytest.approx(0.25)
    assert rep.l_values == (0, 2, 5)
    for bad in ([0.0, 1.0, 1 + math.sqrt(2)], [0.0, 1.0, math.sqrt(2)], [0.0, 1.0, math.pi]):
        rep = commensurate_delta(bad)
        assert rep.delta is None
        with pytest.raises(IncommensurateError):
            poincare_period(rep)


@pytest.mark.parametrize("scale,shift", [(1.0, 0.0), (3.7, 0.0), (0.01, -5.0), (250.0, 12.0)])
def test_commensurate_scale_equivariance(scale, shift):
    base = np.array([0.0, 2.0, 3.0, 7.0])
    rep = commensurate_delta(base * scale + shift)
    assert rep.delta == pytest.approx(scale, rel=1e-9)
    assert rep.l_values == (0, 2, 3, 7)


def test_period_uses_hbar():
    rep = commensurate_delta([0.0, 1.0, 2.0], hbar=0.5)
    assert rep.period == pytest.approx(math.pi)
    assert poincare_period(rep, hbar=0.5) == pytest.approx(math.pi)


def test_two_level_autocorrelation():
    # |A(t)|^2 = 1 - sin^2(dE t / 2) for an equal-weight pair
    p = make_packet([0.0, 0.7])
    t = np.linspace(0, 20, 101)
    a = autocorrelation(p, t)
    assert np.abs(a) ** 2 == pytest.approx(np.cos(0.35 * t) ** 2, abs=1e-14)
    assert abs(autocorrelation(p, 2 * math.pi / 0.7)) == pytest.approx(1.0, abs=1e-14)


def test_revival_at_poincare_period():
    e = np.array([0.3, 1.3, 2.8, 4.3])
    p = make_packet(e, [1, 0.5j, -0.2, 0.7])
    T = commensurate_delta(e).period
    assert abs(autocorrelation(p, T)) == pytest.approx(1.0, abs=1e-12)
    assert abs(autocorrelation(p, 0.5 * T)) < 0.99


def test_quasi_cycle_search():
    p = make_packet([0.0, 1.0, math.sqrt(2)])
    times = [quasi_cycle_search(p, f, 2000.0) for f in (0.9, 0.99, 0.999)]
    assert all(t is not None for t in times)
    assert times[0] <= times[1] <= times[2]
    for f, t in zip((0.9, 0.99, 0.999), times):
        assert abs(autocorrelation(p, t)) == pytest.approx(f, abs=1e-9)
        # nothing earlier (after the initial decay) reaches the fidelity
        grid = np.linspace(0, t, 20001)[:-5]
        a = np.abs(autocorrelation(p, grid))
        first_below = np.argmax(a < f)
        assert np.all(a[first_below:] < f)


def test_quasi_cycle_commensurate_matches_period():
    p = make_packet([0.0, 1.0, 3.0])
    assert quasi_cycle_search(p, 0.999999, 10.0) == pytest.approx(2 * math.pi, abs=1e-2)
    assert quasi_cycle_search(make_packet([0.0, 1.0]), 0.5, 1.0) is None
    with pytest.raises(DomainError):
        quasi_cycle_search(p, 1.0, 10.0)


def test_doublet_occupation_square(sym_square):
    sp = squarewell.solve_spectrum_symmetric(sym_square)
    pk = doublet_packet(sym_square, sp, 0)
    model = occupation_model(pk)
    t = np.linspace(0, 300, 61)
    pl, pr = model.probability("left", t), model.probability("right", t)
    assert pl + pr == pytest.approx(np.ones_like(t), abs=1e-9)
    assert pl[0] > 0.99
    period = 2 * math.pi / (sp[1].energy - sp[0].energy)
    assert measured_period(model, 1.5 * period) == pytest.approx(period, rel=1e-9)
    # analytic derivative against finite differences
    h = 1e-4
    for tt in (3.0, 40.0, 101.0):
        fd = (model.probability("left", tt + h) - model.probability("left", tt - h)) / (2 * h)
        assert model.derivative("left", tt) == pytest.approx(fd, abs=1e-7)
    assert well_occupation(pk, "right", 0.5 * period) > 0.99


def test_doublet_occupation_morse(deep_morse):
    sp = morse.solve_oscillation_spectrum(deep_morse)
    pk = doublet_packet(deep_morse, sp, 1)
    model = occupation_model(pk)
    assert model.probability("left", 0.0) + model.probability("right", 0.0) == pytest.approx(1.0, abs=1e-8)
    assert model.probability("left", 0.0) > 0.99
    period = 2 * math.pi / (sp[3].energy - sp[2].energy)
    assert measured_period(model, 1.2 * period) == pytest.approx(period, rel=1e-8)


def test_occupation_errors(sym_square):
    with pytest.raises(DomainError):
        occupation_model(make_packet([0.0, 1.0]))
    sp = squarewell.solve_spectrum_symmetric(sym_square)
    with pytest.raises(DomainError):
        doublet_packet(sym_square, sp, 50)
    pk = doublet_packet(sym_square, sp, 0)
    with pytest.raises(DomainError):
        occupation_model(pk, x_split=10.0)
    with pytest.raises(DomainError):
        occupation_model(pk).probability("middle", 0.0)


def test_packet_from_spectrum_phys():
    spec = SquareWell(2, 1, 1, 2, 5, phys=PhysConfig(hbar=0.5))
    sp = squarewell.solve_spectrum_symmetric(spec)
    pk = packet_from_spectrum(sp, [0, 1])
    assert pk.phys.hbar == 0.5
    assert pk.energies == pytest.approx(sp.energies[:2])
