"""Closed-form results for ``U = m w^2 (x^2 + B^2/x^2) / 2``.

With ``xi = alpha x^2`` (``alpha = m w / hbar``) the Schrodinger equation is
Whittaker's equation, and with ``c = 1 + 2 mu`` it becomes Kummer's
equation ``xi y'' + (c - xi) y' - a y = 0``. Bounded solutions need a
terminating series, which gives two ladders

    E_n^(+-) = 2 hbar w (1/2 + n +- sqrt(1 + 4 m^2 w^2 B^2 / hbar^2) / 4)

spaced by ``2 hbar w``.

For ``B = 0`` the ``-`` ladder holds the even and the ``+`` ladder the odd
harmonic-oscillator states. For ``B > 0`` the ``1/x^2`` wall makes ``x = 0``
impenetrable, and only the ``+`` ladder survives as eigenvalues of the
half-line problem with ``phi(0) = 0``. The ``-`` ladder is still reported
(tagged ``even``) together with a note, because it belongs to the
irregular solution ``x^(1/2 - nu)`` at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, poch

from .core import InvSquare, Level, Spectrum
from .numerics import kummer_m


@dataclass(frozen=True)
class InvSqParams:
    """Whittaker and Kummer parameters at energy ``E``."""

    alpha_scale: float
    k_whittaker: float
    mu: float
    a_hyp: float
    c_hyp: float
    G: float
    F: float
    K: float


def _root(spec: InvSquare) -> float:
    """``sqrt(1 + 4 m^2 w^2 B^2 / hbar^2)``."""
    m, w, hb = spec.phys.mass, spec.w, spec.phys.hbar
    return math.sqrt(1.0 + 4.0 * (m * w * spec.B / hb) ** 2)


def invsq_params(spec: InvSquare, E: float) -> InvSqParams:
    m, w, hb = spec.phys.mass, spec.w, spec.phys.hbar
    G = 2 * m * E / hb**2
    F = -((m * w / hb) ** 2)
    K = F * spec.B**2
    alpha = math.sqrt(-F)
    k = G / (4 * alpha)
    mu = math.sqrt(1.0 / 16.0 - K / 4.0)
    return InvSqParams(alpha, k, mu, 0.5 - k + mu, 1 + 2 * mu, G, F, K)


def level_energy(spec: InvSquare, n: int, branch: str) -> float:
    sgn = {"+": 1.0, "-": -1.0}[branch]
    return 2 * spec.phys.hbar * spec.w * (0.5 + n + sgn * 0.25 * _root(spec))


def spectrum_exact(spec: InvSquare, n_max: int) -> Spectrum:
    """Both ladders ``E_n^+`` (tagged odd) and ``E_n^-`` (tagged even) for ``n <= n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    pairs = []
    for n in range(n_max + 1):
        pairs.append((level_energy(spec, n, "-"), "even"))
        pairs.append((level_energy(spec, n, "+"), "odd"))
    pairs.sort(key=lambda p: p[0])
    levels = tuple(Level(E, i, p, "both") for i, (E, p) in enumerate(pairs))
    notes = ()
    if spec.B > 0:
        u_min = spec.phys.mass * spec.w**2 * spec.B
        notes = (
            "for B > 0 the x = 0 barrier is impenetrable; only the E+ ladder is an "
            "eigenvalue set of the half-line problem with phi(0) = 0",
        )
        if level_energy(spec, 0, "-") < u_min:
            notes += (f"E0- = {level_energy(spec, 0, '-'):.6g} lies below min U = {u_min:.6g}",)
    return Spectrum(levels, spec, notes=notes)


def physical_spectrum(spec: InvSquare, n_max: int) -> Spectrum:
    """Levels supported by the hard-wall problem: both ladders at ``B = 0``, ``E+`` otherwise."""
    full = spectrum_exact(spec, n_max)
    if spec.B == 0:
        return full
    keep = [lv for lv in full if lv.parity == "odd"]
    return Spectrum(tuple(Level(lv.energy, i, "odd", "both") for i, lv in enumerate(keep)), spec)


def period(spec: InvSquare) -> float:
    """Common period ``2 pi hbar / (2 hbar w) = pi / w`` of both ladders."""
    return math.pi / spec.w


def ladder_spacing(spec: InvSquare) -> float:
    return 2 * spec.phys.hbar * spec.w


def splitting(spec: InvSquare) -> float:
    """``E_n^+ - E_n^- = hbar w sqrt(1 + 4 m^2 w^2 B^2 / hbar^2)``."""
    return spec.phys.hbar * spec.w * _root(spec)


@dataclass(frozen=True)
class DDependency:
    """Unnormalised shape of the transmission ``D`` against ``T`` and ``Delta``.

    ``D ~ pi^2 (1 + 4 m^2 w^2 B^2 / hbar^2)``. With ``Delta = 2 hbar w`` this is
    ``pi^2 (1 + m^2 B^2 Delta^2 / hbar^4)``, and with ``T = 2 pi hbar / Delta``
    it is ``pi^2 (1 + 4 pi^2 m^2 B^2 / (hbar^2 T^2))``. The value exceeds 1, so
    it is a proportionality only. It is meaningful only in the small-``D``
    regime of the WKB splitting relation.
    """

    constant: float
    t_coefficient: float  # D ~ constant * (1 + t_coefficient / T^2)
    delta_coefficient: float  # D ~ constant * (1 + delta_coefficient * Delta^2)

    def of_period(self, T):
        T = np.asarray(T, dtype=float)
        return self.constant * (1.0 + self.t_coefficient / T**2)

    def of_delta(self, delta):
        delta = np.asarray(delta, dtype=float)
        return self.constant * (1.0 + self.delta_coefficient * delta**2)

    def at_spec(self, spec: InvSquare) -> float:
        return float(self.of_delta(ladder_spacing(spec)))


def d_dependency(spec: InvSquare) -> DDependency:
    m, hb, B = spec.phys.mass, spec.phys.hbar, spec.B
    return DDependency(
        math.pi**2,
        4 * math.pi**2 * m**2 * B**2 / hb**2,
        m**2 * B**2 / hb**4,
    )


# --------------------------------------------------------------------------
# eigenfunctions and the quantization check


def eigenfunction(spec: InvSquare, n: int, branch: str = "+"):
    """Unnormalised ``phi(x)`` on ``x > 0`` for level ``n`` of a ladder.

    ``+``: ``x^(1/2 + 2 mu) exp(-alpha x^2/2) M(-n, 1 + 2 mu; alpha x^2)``;
    ``-``: ``x^(1/2 - 2 mu) exp(-alpha x^2/2) M(-n, 1 - 2 mu; alpha x^2)``.
    The powers follow from ``phi = (xi/alpha)^(-1/4) xi^(c/2) exp(-xi/2) y``;
    at ``B = 0`` they reduce to ``x`` and ``1``.
    """
    p = invsq_params(spec, level_energy(spec, n, branch))
    mu, al = p.mu, p.alpha_scale
    if branch == "+":
        expo, c = 0.5 + 2 * mu, 1 + 2 * mu
    else:
        expo, c = 0.5 - 2 * mu, 1 - 2 * mu

    def phi(x):
        x = float(x)
        xi = al * x * x
        return x**expo * math.exp(-0.5 * xi) * kummer_m(-n, c, xi)

    return phi


@dataclass(frozen=True)
class QuantizationCheck:
    n: int
    branch: str
    energy: float
    a_hyp: float  # Kummer 'a' of the solution used (0, -1, -2, ... when quantized)
    polynomial_error: float  # max |M - Laguerre form| on probe points


def verify_quantization(spec: InvSquare, n_max: int = 5) -> list[QuantizationCheck]:
    """Confirm that terminating Kummer series reproduce the closed-form ladders.

    For the ``+`` ladder ``a = 1/2 - k + mu`` must equal ``-n``; for the ``-``
    ladder ``a - 2 mu`` must. At those energies the series must equal
    ``n! / (c)_n L_n^(c-1)(xi)``.
    """
    out = []
    probes = np.linspace(0.0, 8.0, 17)
    for n in range(n_max + 1):
        for branch in ("+", "-"):
            E = level_energy(spec, n, branch)
            p = invsq_params(spec, E)
            a = p.a_hyp if branch == "+" else p.a_hyp - 2 * p.mu
            c = p.c_hyp if branch == "+" else 1 - 2 * p.mu
            a_int = -round(-a)
            err = 0.0
            if abs(c - round(c)) > 1e-12 or c > 0:
                ref = math.factorial(n) / poch(c, n)
                for xi in probes:
                    m = kummer_m(a_int, c, float(xi))
                    lag = ref * eval_genlaguerre(n, c - 1, float(xi))
                    err = max(err, abs(m - lag) / max(1.0, abs(lag)))
            out.append(QuantizationCheck(n, branch, E, float(a), float(err)))
    return out
