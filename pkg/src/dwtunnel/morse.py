"""Double Morse well: Kummer-function solutions and bound spectra.

Left of the junction ``x = 0`` the potential is ``A (e^2 - 2e)`` with
``e = exp(-alpha (x + c))``; right of it ``B (e^2 - 2e)`` with
``e = exp(beta (x - a))``. Hard walls sit at ``-d`` and ``b``.

In each half the substitution ``xi = 2 lam e`` with
``lam = sqrt(2 m V) / (gamma hbar)`` turns the Schrodinger equation into
Kummer's equation. For ``E < 0`` and ``2 s`` not an integer the general
solution is::

    phi(xi) = exp(-xi/2) [c1 xi^s M(-n, 1+2s; xi) + c2 xi^-s M(-n-2s, 1-2s; xi)]

with ``s = sqrt(-2 m E) / (gamma hbar)`` and ``n = lam - s - 1/2``.

The wall condition fixes ``c1/c2`` in each half. Large ``xi`` near the walls
is handled in log-scaled arithmetic so the series never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .core import (
    DegenerateParameterError,
    DomainError,
    Level,
    MorsePair,
    NoBoundStatesError,
    NotAnEigenvalueError,
    Spectrum,
)
from .numerics import DEFAULT_ROOTS, RootConfig, find_roots, integrate, kummer_m_scaled

GUARD = 1e-6  # half-width of the excluded bands around 2s in Z, in s units
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MorseParams:
    """Dimensionless quantities of both halves at one energy."""

    s_A: float
    s_B: float
    n_A: float
    n_B: float
    xi_A0: float
    xi_B0: float
    c1a_over_c2a: float
    c1b_over_c2b: float


@dataclass(frozen=True)
class _Half:
    lam: float  # sqrt(2 m V) / (gamma hbar)
    gamma: float
    xi0: float  # xi at the junction
    xi_wall: float
    side: str  # "left" | "right"

    def xi(self, x):
        x = np.asarray(x, dtype=float)
        if self.side == "left":
            return self.xi0 * np.exp(-self.gamma * x)
        return self.xi0 * np.exp(self.gamma * x)

    @property
    def dxi_sign(self) -> float:
        return -1.0 if self.side == "left" else 1.0


def _halves(spec: MorsePair) -> tuple[_Half, _Half]:
    hb, m = spec.phys.hbar, spec.phys.mass
    lam_a = math.sqrt(2 * m * spec.A) / (spec.alpha * hb)
    lam_b = math.sqrt(2 * m * spec.B) / (spec.beta * hb)
    xa0 = 2 * lam_a * math.exp(-spec.alpha * spec.c)
    xb0 = 2 * lam_b * math.exp(-spec.beta * spec.a)
    left = _Half(lam_a, spec.alpha, xa0, xa0 * math.exp(spec.alpha * spec.d), "left")
    right = _Half(lam_b, spec.beta, xb0, xb0 * math.exp(spec.beta * spec.b), "right")
    return left, right


def s_of_energy(spec: MorsePair, E: float, side: str = "left") -> float:
    if E >= 0:
        raise DomainError(f"Morse bound states need E < 0, got {E}")
    g = spec.alpha if side == "left" else spec.beta
    return math.sqrt(-2 * spec.phys.mass * E) / (g * spec.phys.hbar)


def energy_of_s(spec: MorsePair, s_A: float) -> float:
    return -((spec.alpha * spec.phys.hbar * s_A) ** 2) / (2 * spec.phys.mass)


def _check_guard(s: float, label: str):
    j = round(2 * s)
    if j >= 1 and abs(s - 0.5 * j) < GUARD:
        raise DegenerateParameterError(f"2 {label} = {2 * s:.9f} is within the guard band of the integer {j}")


# --------------------------------------------------------------------------
# log-scaled basis values


class _LogNum:
    """Signed number ``sign * exp(log)``."""

    __slots__ = ("sign", "log")

    def __init__(self, sign: float, log: float):
        self.sign = sign
        self.log = log

    @classmethod
    def from_kummer(cls, kv, extra_log=0.0):
        if kv.mantissa == 0.0:
            return cls(0.0, -math.inf)
        return cls(math.copysign(1.0, kv.mantissa), math.log(abs(kv.mantissa)) + kv.log_scale + extra_log)

    def times(self, other: "_LogNum") -> "_LogNum":
        return _LogNum(self.sign * other.sign, self.log + other.log)

    def scaled(self, shift: float) -> float:
        if self.sign == 0.0:
            return 0.0
        return self.sign * math.exp(self.log - shift)


def _basis(half: _Half, s: float, xi: float, path: str = "auto"):
    """``u1, u2`` and their ``xi``-derivatives at ``xi`` as :class:`_LogNum`.

    ``u1 = exp(-xi/2) xi^s M(-n, 1+2s; xi)``,
    ``u2 = exp(-xi/2) xi^-s M(-n-2s, 1-2s; xi)``.
    """
    n = half.lam - s - 0.5
    lx = math.log(xi)
    f1 = kummer_m_scaled(-n, 1 + 2 * s, xi, path)
    f2 = kummer_m_scaled(-n - 2 * s, 1 - 2 * s, xi, path)
    # dM(a, c; xi)/dxi = (a/c) M(a+1, c+1; xi)
    g1 = kummer_m_scaled(1 - n, 2 + 2 * s, xi, path)
    g2 = kummer_m_scaled(1 - n - 2 * s, 2 - 2 * s, xi, path)
    base1 = -0.5 * xi + s * lx
    base2 = -0.5 * xi - s * lx
    # u' = exp(-xi/2) xi^(+-s) [(-1/2 +- s/xi) M + M']
    k1 = -0.5 + s / xi
    k2 = -0.5 - s / xi
    d1 = _lin(k1, f1, -n / (1 + 2 * s), g1)
    d2 = _lin(k2, f2, (-n - 2 * s) / (1 - 2 * s), g2)
    u1 = _LogNum.from_kummer(f1, base1)
    u2 = _LogNum.from_kummer(f2, base2)
    du1 = _LogNum(d1.sign, d1.log + base1)
    du2 = _LogNum(d2.sign, d2.log + base2)
    return u1, u2, du1, du2


def _lin(p, fa, q, fb) -> _LogNum:
    """``p * fa + q * fb`` for two scaled Kummer values."""
    shift = max(fa.log_scale, fb.log_scale)
    v = p * fa.mantissa * math.exp(fa.log_scale - shift) + q * fb.mantissa * math.exp(fb.log_scale - shift)
    if v == 0.0:
        return _LogNum(0.0, -math.inf)
    return _LogNum(math.copysign(1.0, v), math.log(abs(v)) + shift)


def _wall_ratio(half: _Half, s: float, path: str = "auto") -> _LogNum:
    """``c1/c2`` that makes ``phi`` vanish at the outer wall."""
    xw = half.xi_wall
    n = half.lam - s - 0.5
    f1 = _LogNum.from_kummer(kummer_m_scaled(-n, 1 + 2 * s, xw, path))
    f2 = _LogNum.from_kummer(kummer_m_scaled(-n - 2 * s, 1 - 2 * s, xw, path))
    if f1.sign == 0.0:
        return _LogNum(-f2.sign, math.inf)
    return _LogNum(-f2.sign * f1.sign, f2.log - f1.log - 2 * s * math.log(xw))


def _wall_coeffs(half: _Half, s: float, path: str = "auto") -> tuple[_LogNum, _LogNum]:
    """``(c1, c2) = (-u2(xi_w), u1(xi_w))``: both entire in ``E``, so no poles."""
    xw = half.xi_wall
    n = half.lam - s - 0.5
    lw = math.log(xw)
    u1 = _LogNum.from_kummer(kummer_m_scaled(-n, 1 + 2 * s, xw, path), -0.5 * xw + s * lw)
    u2 = _LogNum.from_kummer(kummer_m_scaled(-n - 2 * s, 1 - 2 * s, xw, path), -0.5 * xw - s * lw)
    return _LogNum(-u2.sign, u2.log), u1


def _vector_terms(half: _Half, s: float, xi: float, c1: _LogNum, c2: _LogNum, path: str):
    u1, u2, du1, du2 = _basis(half, s, xi, path)
    # d/dx = (dxi/dx) d/dxi with dxi/dx = -+ gamma xi
    dfac = _LogNum(half.dxi_sign, math.log(half.gamma * xi))
    return [c1.times(u1), c2.times(u2)], [c1.times(du1).times(dfac), c2.times(du2).times(dfac)]


def _log_norm(p_terms, d_terms, kappa: float):
    """Log of ``|(phi, phi'/kappa)|`` and whether rounding noise dominates it."""
    shift = max(t.log for t in p_terms + d_terms if t.sign != 0.0)
    p = sum(t.scaled(shift) for t in p_terms)
    d = sum(t.scaled(shift) for t in d_terms) / kappa
    size = sum(abs(t.scaled(shift)) for t in p_terms) + sum(abs(t.scaled(shift)) for t in d_terms) / kappa
    h = math.hypot(p, d)
    noisy = h <= 1e6 * _EPS * size
    return (math.log(h) + shift if h > 0 else -math.inf), noisy


def _junction_vector(half: _Half, s: float, kappa: float, path: str = "auto"):
    """``(phi(0), phi'(0)/kappa)`` of the wall-satisfying solution.

    The solution is scaled to unit ``|(phi, phi'/kappa)|`` at the bottom of
    its own well, where it is oscillatory and O(1), or at the junction if
    it is larger there (a well that is classically forbidden at this
    energy). Matching conditions built from these vectors vary on the
    scale of the level spacing rather than on the far smaller scale of the
    tunnelling splitting. If the well-bottom value is lost in rounding,
    the junction is used as the reference.
    """
    c1, c2 = _wall_coeffs(half, s, path)
    p0, d0 = _vector_terms(half, s, half.xi0, c1, c2, path)
    ref, noisy = _log_norm(*_vector_terms(half, s, 2.0 * half.lam, c1, c2, path), kappa)
    ref0, _ = _log_norm(p0, d0, kappa)
    if noisy or not math.isfinite(ref) or ref0 > ref:
        ref = ref0
    phi = sum(t.scaled(ref) for t in p0)
    dphi = sum(t.scaled(ref) for t in d0) / kappa
    return phi, dphi


def _growing_coefficient(half: _Half, s: float) -> float:
    """Sign-carrying mantissa of ``M(-n, 1+2s; xi_w)``.

    This is the weight of the solution that grows towards the junction.
    Its zeros are the levels of the isolated well; the junction residuals
    only change rapidly close to them.
    """
    n = half.lam - s - 0.5
    return kummer_m_scaled(-n, 1 + 2 * s, half.xi_wall).mantissa


def _kappa(spec: MorsePair) -> float:
    return math.sqrt(2 * spec.phys.mass * max(spec.A, spec.B)) / spec.phys.hbar


def _s_pair(spec: MorsePair, E: float, guard: bool):
    s_a = s_of_energy(spec, E, "left")
    s_b = s_of_energy(spec, E, "right")
    if guard:
        _check_guard(s_a, "s_A")
        _check_guard(s_b, "s_B")
    return s_a, s_b


# --------------------------------------------------------------------------
# residuals


def residual_oscillation(spec: MorsePair, E: float, path: str = "auto", guard: bool = True) -> float:
    """Matching condition of the two wall-satisfying halves at ``x = 0``.

    Returns the Wronskian ``phi_L phi_R' - phi_L' phi_R`` (divided by
    ``kappa``) of the left and right solutions, each scaled to unit size at
    the bottom of its well. It has no poles, is continuous in ``E`` and
    vanishes exactly at the eigenvalues.
    """
    s_a, s_b = _s_pair(spec, E, guard)
    left, right = _halves(spec)
    k = _kappa(spec)
    pl, dl = _junction_vector(left, s_a, k, path)
    pr, dr = _junction_vector(right, s_b, k, path)
    return pl * dr - dl * pr


def morse_params(spec: MorsePair, E: float, path: str = "auto") -> MorseParams:
    s_a, s_b = _s_pair(spec, E, True)
    left, right = _halves(spec)
    ra = _wall_ratio(left, s_a, path)
    rb = _wall_ratio(right, s_b, path)
    return MorseParams(
        s_a, s_b,
        left.lam - s_a - 0.5, right.lam - s_b - 0.5,
        left.xi0, right.xi0,
        ra.sign * math.exp(min(ra.log, 709.0)), rb.sign * math.exp(min(rb.log, 709.0)),
    )


def residual_oscillation_ratio_form(spec: MorsePair, E: float, path: str = "auto") -> tuple[float, float]:
    """Both sides of the matching condition written with ``c1/c2`` ratios.

    This is the textbook arrangement: the product of the right value and
    left slope (times ``-alpha xi_A0 / (beta xi_B0)``) against the product of
    the right slope and left value, each bracket written with explicit
    ``xi^(+-s)`` factors and ``exp(-xi/2)`` dropped. Unlike
    :func:`residual_oscillation` it has poles wherever a wall value
    ``M(-n, 1+2s; xi_wall)`` vanishes. Returns ``(lhs, rhs)``.
    """
    p = morse_params(spec, E, path)

    def parts(s, n, xi0, ratio):
        m1 = kummer_m_scaled(-n, 1 + 2 * s, xi0, path).value
        m2 = kummer_m_scaled(-n - 2 * s, 1 - 2 * s, xi0, path).value
        dm1 = -n / (1 + 2 * s) * kummer_m_scaled(1 - n, 2 + 2 * s, xi0, path).value
        dm2 = (-n - 2 * s) / (1 - 2 * s) * kummer_m_scaled(1 - n - 2 * s, 2 - 2 * s, xi0, path).value
        value = ratio * xi0**s * m1 + xi0 ** (-s) * m2
        slope = ratio * (-0.5 * xi0**s * m1 + s * xi0 ** (s - 1) * m1 + xi0**s * dm1) + (
            -0.5 * xi0 ** (-s) * m2 - s * xi0 ** (-s - 1) * m2 + xi0 ** (-s) * dm2
        )
        return value, slope

    va, sa = parts(p.s_A, p.n_A, p.xi_A0, p.c1a_over_c2a)
    vb, sb = parts(p.s_B, p.n_B, p.xi_B0, p.c1b_over_c2b)
    lhs = -(spec.alpha * p.xi_A0) / (spec.beta * p.xi_B0) * vb * sa
    rhs = sb * va
    return lhs, rhs


def residual_single_well(spec: MorsePair, E: float, side: str = "left", path: str = "auto", guard: bool = True) -> float:
    """``phi(0)`` of the wall-satisfying solution in one half, scaled as in :func:`residual_oscillation`.

    Its zeros are the levels of a single well closed by a hard wall at the
    junction.
    """
    s_a, s_b = _s_pair(spec, E, guard)
    left, right = _halves(spec)
    half, s = (left, s_a) if side == "left" else (right, s_b)
    p, _ = _junction_vector(half, s, _kappa(spec), path)
    return p


def residual_single_well_ratio_form(spec: MorsePair, E: float, side: str = "left") -> tuple[float, float]:
    """Both sides of ``exp(2 s gamma L) M2(xi0) M1(xi_w) = M2(xi_w) M1(xi0)``.

    ``L`` is ``d`` (left) or ``b`` (right); ``M1 = M(-n, 1+2s)``,
    ``M2 = M(-n-2s, 1-2s)``. Values are returned as logs-free floats, so
    this is only usable while ``exp(xi_w)`` fits in a double.
    """
    s_a, s_b = _s_pair(spec, E, True)
    left, right = _halves(spec)
    half, s, L = (left, s_a, spec.d) if side == "left" else (right, s_b, spec.b)
    n = half.lam - s - 0.5
    m1 = lambda x: kummer_m_scaled(-n, 1 + 2 * s, x).value
    m2 = lambda x: kummer_m_scaled(-n - 2 * s, 1 - 2 * s, x).value
    lhs = math.exp(2 * s * half.gamma * L) * m2(half.xi0) * m1(half.xi_wall)
    rhs = m2(half.xi_wall) * m1(half.xi0)
    return lhs, rhs


def residual_junction_slope(spec: MorsePair, E: float, side: str = "left", path: str = "auto", guard: bool = True) -> float:
    """``phi'(0) / kappa`` of the wall-satisfying solution, scaled as in :func:`residual_oscillation`."""
    s_a, s_b = _s_pair(spec, E, guard)
    left, right = _halves(spec)
    half, s = (left, s_a) if side == "left" else (right, s_b)
    _, dp = _junction_vector(half, s, _kappa(spec), path)
    return dp


# --------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class _Scan:
    segments: tuple[tuple[float, float], ...]  # in s_A
    bands: tuple[float, ...]  # band centres in s_A


def _scan_plan(spec: MorsePair, depth: float) -> _Scan:
    hb, m = spec.phys.hbar, spec.phys.mass
    ref = min(spec.A, spec.B)
    s_lo = math.sqrt(2 * m * 1e-9 * ref) / (spec.alpha * hb)
    s_hi = math.sqrt(2 * m * 0.999 * depth) / (spec.alpha * hb)
    ratio = spec.beta / spec.alpha  # s_A = ratio * s_B
    centres = []
    widths = {}
    j = 1
    while 0.5 * j <= s_hi + GUARD:
        centres.append(0.5 * j)
        widths[0.5 * j] = GUARD
        j += 1
    j = 1
    while 0.5 * j * ratio <= s_hi + GUARD:
        c = 0.5 * j * ratio
        centres.append(c)
        widths[c] = max(widths.get(c, 0.0), GUARD * ratio)
        j += 1
    centres = sorted(set(centres))
    segs = []
    lo = s_lo
    for c in centres:
        w = 2.0 * widths[c]  # stay clear of the band edge itself
        if c - w > lo:
            segs.append((lo, c - w))
        lo = max(lo, c + w)
    if s_hi > lo:
        segs.append((lo, s_hi))
    return _Scan(tuple(segs), tuple(centres))


def _sweep_centres(spec: MorsePair, lo: float, hi: float, npts: int) -> list[float]:
    """``s_A`` values where either half's growing coefficient vanishes."""
    left, right = _halves(spec)
    ratio = spec.alpha / spec.beta  # s_B = ratio * s_A
    out = []
    for half, k in ((left, 1.0), (right, ratio)):
        g = lambda sa, half=half, k=k: _growing_coefficient(half, k * sa)
        grid = np.linspace(lo, hi, npts)
        cfg = RootConfig(1e-15, 1e-14, 200, npts)
        out.extend(find_roots(g, lo, hi, cfg, grid=grid, refine_extrema=False))
    return out


def _clustered(grid: np.ndarray, centres, lo: float, hi: float, per_decade: int = 10) -> np.ndarray:
    if not centres:
        return grid
    h = (hi - lo) / max(len(grid) - 1, 1)
    offs = h * 10.0 ** (-np.arange(0, 14 * per_decade + 1) / per_decade)
    extra = [c + sgn * offs for c in centres for sgn in (-1.0, 1.0)]
    pts = np.concatenate([grid, np.asarray(centres, dtype=float), *extra])
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(pts)


def _roots_in_s(spec, f_of_E, depth, cfg, points_per_unit, touch_tol):
    """Roots of ``f_of_E`` scanned in ``s_A`` over all segments.

    The base grid is uniform; it is refined with points clustered
    logarithmically around the isolated-well levels, where the junction
    residuals rotate through a full turn over a tiny energy window.
    """
    plan = _scan_plan(spec, depth)
    g = lambda s: f_of_E(energy_of_s(spec, s))
    found, notes = [], []
    for lo, hi in plan.segments:
        npts = max(8, int(math.ceil((hi - lo) * points_per_unit)) + 1)
        base = np.linspace(lo, hi, npts)
        grid = _clustered(base, _sweep_centres(spec, lo, hi, npts), lo, hi)
        sub = RootConfig(cfg.abs_tol, cfg.rel_tol, cfg.max_iter, len(grid))
        found.extend(find_roots(g, lo, hi, sub, grid=grid, touch_tol=touch_tol))
    # a sign change across a band means a root sits inside it
    for c in plan.bands:
        w = 3.0 * GUARD * max(1.0, spec.beta / spec.alpha)
        if c - w <= plan.segments[0][0] or c + w >= plan.segments[-1][1]:
            continue
        try:
            if g(c - w) * g(c + w) < 0:
                notes.append(f"a level lies within the 2s-integer guard band near s_A={c:.9g}; not reported")
        except DegenerateParameterError:
            pass
    energies = sorted(energy_of_s(spec, s) for s in found)
    return energies, notes


def _spectrum(spec, energies, parity, well, notes=(), excluded=()) -> Spectrum:
    levels = tuple(Level(float(E), i, p, well) for i, (E, p) in enumerate(zip(energies, parity)))
    return Spectrum(levels, spec, excluded=tuple(excluded), notes=tuple(notes))


def solve_oscillation_spectrum(
    spec: MorsePair,
    cfg: RootConfig = DEFAULT_ROOTS,
    points_per_unit: int = 120,
    touch_tol: float = 1e-13,
) -> Spectrum:
    """Levels shared by both wells: roots of :func:`residual_oscillation`.

    The scan is uniform in ``s_A`` (Morse levels are nearly equally spaced
    in ``s``), runs from just below ``E = 0`` down to ``0.999`` of the
    deeper well floor, and skips guard bands around ``2 s in Z``.
    """
    depth = max(spec.A, spec.B)
    energies, notes = _roots_in_s(spec, lambda E: residual_oscillation(spec, E), depth, cfg, points_per_unit, touch_tol)
    if not energies:
        raise NoBoundStatesError("no Morse levels found below E = 0")
    return _spectrum(spec, energies, ["none"] * len(energies), "both", notes)


def _single_well_energies(spec, side, cfg, points_per_unit):
    depth = spec.A if side == "left" else spec.B
    return _roots_in_s(spec, lambda E: residual_single_well(spec, E, side), depth, cfg, points_per_unit, None)


def _solve_one_side(spec, side, cfg, points_per_unit, shared_tol):
    mine, notes = _single_well_energies(spec, side, cfg, points_per_unit)
    other, _ = _single_well_energies(spec, "right" if side == "left" else "left", cfg, points_per_unit)
    if not mine:
        raise NoBoundStatesError(f"no levels in the {side} well")
    tol = shared_tol * max(spec.A, spec.B)
    keep, dropped = [], []
    for E in mine:
        (dropped if any(abs(E - o) <= tol for o in other) else keep).append(E)
    excluded = tuple(Level(float(E), i, "none", side) for i, E in enumerate(dropped))
    if dropped:
        notes.append(f"{len(dropped)} level(s) shared with the other well excluded")
    return _spectrum(spec, keep, ["none"] * len(keep), side, notes, excluded)


def solve_left_well(spec: MorsePair, cfg: RootConfig = DEFAULT_ROOTS, points_per_unit: int = 120, shared_tol: float = 1e-9) -> Spectrum:
    """Levels of the left well reflected at ``x = 0`` (``phi(-d) = phi(0) = 0``).

    Levels that also solve the right-well problem within
    ``shared_tol * max(A, B)`` belong to motion between the wells and are
    moved to ``excluded``.
    """
    return _solve_one_side(spec, "left", cfg, points_per_unit, shared_tol)


def solve_right_well(spec: MorsePair, cfg: RootConfig = DEFAULT_ROOTS, points_per_unit: int = 120, shared_tol: float = 1e-9) -> Spectrum:
    """Right-well counterpart of :func:`solve_left_well`."""
    return _solve_one_side(spec, "right", cfg, points_per_unit, shared_tol)


def solve_symmetric_parity(spec: MorsePair, cfg: RootConfig = DEFAULT_ROOTS, points_per_unit: int = 120) -> Spectrum:
    """Symmetric pair: ``phi'(0) = 0`` levels (even) merged with ``phi(0) = 0`` levels (odd)."""
    if not spec.is_symmetric:
        raise DomainError("solve_symmetric_parity needs A=B, alpha=beta, c=a, d=b")
    even, n1 = _roots_in_s(spec, lambda E: residual_junction_slope(spec, E, "left"), spec.A, cfg, points_per_unit, None)
    odd, n2 = _roots_in_s(spec, lambda E: residual_single_well(spec, E, "left"), spec.A, cfg, points_per_unit, None)
    if not (even or odd):
        raise NoBoundStatesError("no Morse levels found below E = 0")
    pairs = sorted([(E, "even") for E in even] + [(E, "odd") for E in odd])
    return _spectrum(spec, [p[0] for p in pairs], [p[1] for p in pairs], "both", n1 + n2)


# --------------------------------------------------------------------------
# wavefunctions


@dataclass(frozen=True)
class MorseWavefunction:
    """Normalised eigenfunction on ``[-d, b]``.

    ``c1A, c2A, c1B, c2B`` multiply the basis functions of each half as in the
    module docstring. Deep in the forbidden regions next to the walls the
    two basis terms cancel to below their rounding error; there ``phi`` is
    set to zero. ``x_cut_left`` and ``x_cut_right`` mark where that starts.
    """

    spec: MorsePair
    level: Level
    c1A: float
    c2A: float
    c1B: float
    c2B: float
    x_cut_left: float
    x_cut_right: float

    def _half_value(self, x: float, deriv: bool = False) -> float:
        spec = self.spec
        left, right = _halves(spec)
        if x <= 0:
            half, s, c1, c2 = left, s_of_energy(spec, self.level.energy, "left"), self.c1A, self.c2A
        else:
            half, s, c1, c2 = right, s_of_energy(spec, self.level.energy, "right"), self.c1B, self.c2B
        xi = float(half.xi(x))
        u1, u2, du1, du2 = _basis(half, s, xi)
        if not deriv:
            return _combine(c1, u1, c2, u2)
        return _combine(c1, du1, c2, du2) * half.dxi_sign * half.gamma * xi

    def __call__(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([
            0.0 if (v < self.x_cut_left or v > self.x_cut_right) else self._half_value(float(v)) for v in xs
        ])
        return out if np.ndim(x) else float(out[0])

    def derivative(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([
            0.0 if (v < self.x_cut_left or v > self.x_cut_right) else self._half_value(float(v), True) for v in xs
        ])
        return out if np.ndim(x) else float(out[0])

    def norm(self, rel_tol: float = 1e-11) -> float:
        f = lambda x: self(x) ** 2
        return integrate(f, self.x_cut_left, 0.0, 0.0, rel_tol=rel_tol) + integrate(
            f, 0.0, self.x_cut_right, 0.0, rel_tol=rel_tol
        )


def _combine(c1: float, t1: _LogNum, c2: float, t2: _LogNum) -> float:
    out = 0.0
    for c, t in ((c1, t1), (c2, t2)):
        if c != 0.0 and t.sign != 0.0:
            lg = math.log(abs(c)) + t.log
            if lg > 700:
                return math.nan
            out += math.copysign(1.0, c) * t.sign * math.exp(lg)
    return out


def _combine_err(c1: float, t1: _LogNum, c2: float, t2: _LogNum) -> float:
    tot = 0.0
    for c, t in ((c1, t1), (c2, t2)):
        if c != 0.0 and t.sign != 0.0:
            lg = math.log(abs(c)) + t.log
            if lg > 700:
                return math.inf
            tot += math.exp(lg)
    return 64 * _EPS * tot


def _turning_point(spec: MorsePair, E: float, side: str) -> float:
    V, g, x0 = (spec.A, spec.alpha, spec.c) if side == "left" else (spec.B, spec.beta, spec.a)
    e_out = 1.0 + math.sqrt(max(0.0, 1.0 + E / V))
    return -x0 - math.log(e_out) / g if side == "left" else x0 + math.log(e_out) / g


def _cut_point(spec, half, s, c1, c2, E, n_probe=2000):
    """Outermost point before rounding noise swamps the decaying solution."""
    side = half.side
    wall = -spec.d if side == "left" else spec.b
    start = _turning_point(spec, E, side)
    start = min(max(start, -spec.d), 0.0) if side == "left" else max(min(start, spec.b), 0.0)
    last = start
    for x in np.linspace(start, wall, n_probe):
        xi = float(half.xi(x))
        u1, u2, _, _ = _basis(half, s, xi)
        v = _combine(c1, u1, c2, u2)
        err = _combine_err(c1, u1, c2, u2)
        if not math.isfinite(v) or abs(v) <= 1e3 * err:
            return last
        last = float(x)
    return wall


def _half_coeffs(half: _Half, s: float):
    """``(c1, c2)`` satisfying the wall condition, scaled so ``|(phi, phi')|`` is O(1) at 0."""
    ratio = _wall_ratio(half, s)
    u1, u2, du1, du2 = _basis(half, s, half.xi0)
    if math.isinf(ratio.log):
        c1, c2 = 1.0, 0.0
        ref = max(u1.log, du1.log)
        return c1 * math.exp(-ref), 0.0
    # c2 = 1, c1 = ratio; rescale by the junction magnitude
    ref = max(ratio.log + u1.log, u2.log, ratio.log + du1.log, du2.log)
    c2 = math.exp(-ref)
    lg = ratio.log - ref
    c1 = ratio.sign * math.exp(lg) if lg < 700 else math.copysign(math.inf, ratio.sign)
    return c1, c2


def wavefunction(spec: MorsePair, level, tol: float = 1e-7) -> MorseWavefunction:
    """Normalised eigenfunction for a solved level (a :class:`Level` or an energy)."""
    if not isinstance(level, Level):
        level = Level(float(level), 0)
    E = level.energy
    res = residual_oscillation(spec, E)
    if abs(res) > tol:
        raise NotAnEigenvalueError(f"E={E} is not an eigenvalue (matching residual {res:.2e})")
    s_a, s_b = s_of_energy(spec, E, "left"), s_of_energy(spec, E, "right")
    left, right = _halves(spec)
    c1a, c2a = _half_coeffs(left, s_a)
    c1b, c2b = _half_coeffs(right, s_b)
    # match the right half to the left one at x = 0
    u1, u2, du1, du2 = _basis(left, s_a, left.xi0)
    pl = _combine(c1a, u1, c2a, u2)
    dl = _combine(c1a, du1, c2a, du2) * left.dxi_sign * left.gamma * left.xi0
    u1, u2, du1, du2 = _basis(right, s_b, right.xi0)
    pr = _combine(c1b, u1, c2b, u2)
    dr = _combine(c1b, du1, c2b, du2) * right.dxi_sign * right.gamma * right.xi0
    k = _kappa(spec)
    scale = pl / pr if abs(pr) * k >= abs(dr) else dl / dr
    c1b, c2b = c1b * scale, c2b * scale
    xl = _cut_point(spec, left, s_a, c1a, c2a, E)
    xr = _cut_point(spec, right, s_b, c1b, c2b, E)
    psi = MorseWavefunction(spec, level, c1a, c2a, c1b, c2b, xl, xr)
    big = math.sqrt(psi.norm())
    return MorseWavefunction(spec, level, c1a / big, c2a / big, c1b / big, c2b / big, xl, xr)


def oscillation_levels_of(spec: MorsePair, index: Optional[int] = None, **kw):
    """Convenience: the oscillation spectrum, or one level of it."""
    sp = solve_oscillation_spectrum(spec, **kw)
    return sp if index is None else sp[index]


@dataclass(frozen=True)
class RootComparison:
    energy: float  # root of the Wronskian residual
    ratio_root: Optional[float]  # nearby root of the ratio form, if one exists
    note: str = ""

    @property
    def shift(self) -> float:
        return math.nan if self.ratio_root is None else self.ratio_root - self.energy


def compare_root_sets(spec: MorsePair, spectrum: Optional[Spectrum] = None, window: float = 1e-8) -> list[RootComparison]:
    """Look for a root of the ratio-form condition next to every solved level.

    A root is matched when ``lhs - rhs`` changes sign within
    ``window * max(1, |E|)``. Where it does not, the ratio form usually has a
    pole at the level (``M(-n, 1+2s; xi)`` with ``n`` close to an integer):
    ``lhs`` and ``rhs`` both flip sign and their difference stays finite.
    Such levels are reported with a note instead of a match.
    """
    if spectrum is None:
        spectrum = solve_oscillation_spectrum(spec)

    def g(e):
        lhs, rhs = residual_oscillation_ratio_form(spec, e)
        return lhs - rhs

    out = []
    for lv in spectrum:
        E = lv.energy
        out_root, note = None, ""
        for frac in (1e-12, 1e-11, 1e-10, 1e-9, window):
            h = frac * max(1.0, abs(E))
            lo, hi = E - h, E + h
            try:
                g_lo, g_hi = g(lo), g(hi)
            except (ArithmeticError, ValueError) as exc:
                note = f"ratio form not evaluable: {exc}"
                break
            if g_lo == 0.0 or g_hi == 0.0:
                out_root = lo if g_lo == 0.0 else hi
                break
            if (g_lo < 0) != (g_hi < 0):
                r = float(brentq(g, lo, hi, xtol=1e-15 * max(1.0, abs(E)), rtol=1e-15))
                # a sign change across a pole converges onto the pole, where |g| is huge
                if abs(g(r)) <= min(abs(g_lo), abs(g_hi)):
                    out_root = r
                break
        if out_root is None and not note:
            l_lo, _ = residual_oscillation_ratio_form(spec, E - window * max(1.0, abs(E)))
            l_hi, _ = residual_oscillation_ratio_form(spec, E + window * max(1.0, abs(E)))
            p = morse_params(spec, E)
            if (l_lo < 0) != (l_hi < 0):
                note = (
                    f"ratio form has a pole at this level (n_A={p.n_A:.3g}, n_B={p.n_B:.3g}); "
                    "the root cancels against it"
                )
            else:
                note = "no ratio-form root within the window"
        out.append(RootComparison(E, out_root, note))
    return out
