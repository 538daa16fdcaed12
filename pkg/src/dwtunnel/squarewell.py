"""Infinite-walled square double well: spectra, wavefunctions, scattering.

Geometry (see :class:`~dwtunnel.core.SquareWell`)::

    -d ......... -c ======== a ......... b
       left well    barrier    right well
       U = 0        U = U0     U = -W0

Bound levels inside ``0 < E < U0`` solve the matching condition between
``sin(k (x + d))`` on the left, ``exp(+-chi x)`` in the barrier and
``sin(k3 (x - b))`` on the right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    DomainError,
    Level,
    NoBoundStatesError,
    NotAnEigenvalueError,
    Spectrum,
    SquareWell,
)
from .numerics import DEFAULT_ROOTS, RootConfig, find_roots, integrate

_EDGE = 1e-12


@dataclass(frozen=True)
class SquareWavenumbers:
    k: float
    k3: float
    chi: float


def wavenumbers(spec: SquareWell, E: float) -> SquareWavenumbers:
    """Wavenumbers in the left well, right well and barrier at energy ``E``."""
    if not (-spec.W0 < E < spec.U0) or E <= 0:
        raise DomainError(f"E={E} outside (max(0, -W0), U0)")
    two_m = 2.0 * spec.phys.mass
    hb = spec.phys.hbar
    return SquareWavenumbers(
        math.sqrt(two_m * E) / hb,
        math.sqrt(two_m * (E + spec.W0)) / hb,
        math.sqrt(two_m * (spec.U0 - E)) / hb,
    )


def k_max(spec: SquareWell) -> float:
    return math.sqrt(2.0 * spec.phys.mass * spec.U0) / spec.phys.hbar


def _energy(spec: SquareWell, k: float) -> float:
    return (spec.phys.hbar * k) ** 2 / (2.0 * spec.phys.mass)


def _factors(spec: SquareWell, E: float):
    w = wavenumbers(spec, E)
    s1, c1 = math.sin(w.k * spec.left_width), math.cos(w.k * spec.left_width)
    s2, c2 = math.sin(w.k3 * spec.right_width), math.cos(w.k3 * spec.right_width)
    if w.chi == 0.0:
        raise DomainError("E = U0 is the barrier top")
    r1, r3 = w.k / w.chi, w.k3 / w.chi
    return w, (s1 - r1 * c1, s1 + r1 * c1), (s2 - r3 * c2, s2 + r3 * c2), (r1, r3)


def residual_asymmetric(spec: SquareWell, E: float) -> float:
    """Relative residual of the transcendental level condition.

    ``[(s2 - r3 c2)/(s2 + r3 c2)] * [(s1 - r1 c1)/(s1 + r1 c1)] * exp(-2 chi w) - 1``
    with ``s1 = sin(k (d - c))``, ``r1 = k/chi``, ``s2 = sin(k3 (b - a))``,
    ``r3 = k3/chi`` and ``w = a + c``. Diverges where a denominator vanishes.
    """
    w, (m1, p1), (m2, p2), _ = _factors(spec, E)
    return (m2 / p2) * (m1 / p1) * math.exp(-2.0 * w.chi * spec.barrier_width) - 1.0


def matching_determinant(spec: SquareWell, E: float) -> float:
    """Pole-free, O(1)-scaled form of :func:`residual_asymmetric`.

    Cleared of denominators and multiplied by ``exp(-chi w)``; zero exactly
    at the eigenvalues.
    """
    w, (m1, p1), (m2, p2), (r1, r3) = _factors(spec, E)
    g = math.exp(-2.0 * w.chi * spec.barrier_width) * m2 * m1 - p2 * p1
    return g / math.sqrt((1.0 + r1 * r1) * (1.0 + r3 * r3))


def _energy_grid(spec: SquareWell, cfg: RootConfig) -> np.ndarray:
    # uniform in k: level spacing is roughly uniform in wavenumber
    ks = np.linspace(0.0, k_max(spec), cfg.scan_points)
    E = (spec.phys.hbar * ks) ** 2 / (2.0 * spec.phys.mass)
    E[0] = _EDGE * spec.U0
    E[-1] = spec.U0 * (1.0 - _EDGE)
    return E


def solve_spectrum_asymmetric(spec: SquareWell, cfg: RootConfig = DEFAULT_ROOTS, touch_tol: float = 1e-12) -> Spectrum:
    """All levels in ``(0, U0)`` from the general matching condition.

    Doublets too close to resolve in double precision show up as a touching
    zero of the determinant; they are reported once, with a note.
    """
    grid = _energy_grid(spec, cfg)
    f = lambda E: matching_determinant(spec, E)
    roots = find_roots(f, grid[0], grid[-1], cfg, grid=grid, touch_tol=touch_tol)
    if not roots:
        raise NoBoundStatesError("no square-well levels below U0")
    notes = []
    for r in roots:
        if not _has_sign_change(f, r):
            notes.append(f"unresolved degenerate doublet at E={r:.12g}")
    if spec.W0 > 0:
        e_box = (math.pi * spec.phys.hbar / spec.right_width) ** 2 / (2 * spec.phys.mass) - spec.W0
        if e_box < 0:
            notes.append("levels in (-W0, 0) confined to the right well are outside the scanned range")
    levels = tuple(Level(float(E), i, "none", "both") for i, E in enumerate(roots))
    return Spectrum(levels, spec, notes=tuple(notes))


def _has_sign_change(f, x, rel=1e-9):
    h = rel * max(1.0, abs(x))
    try:
        return f(x - h) * f(x + h) < 0
    except DomainError:
        return True


# --------------------------------------------------------------------------
# symmetric well


def symmetric_angle(spec: SquareWell, k: float, parity: str) -> float:
    """``arcsin(1/sqrt(1 + (chi/k)^2 q^2))`` with ``q = (s - e)/(s + e)``.

    ``s = +1`` for even and ``-1`` for odd states, ``e = exp(2 chi a)``. The
    expression is evaluated in a form that stays finite at ``a = 0``.
    """
    chi2 = 2.0 * spec.phys.mass * spec.U0 / spec.phys.hbar**2 - k * k
    chi = math.sqrt(max(chi2, 0.0))
    sgn = 1.0 if parity == "even" else -1.0
    em = math.exp(-2.0 * chi * spec.a)  # 1/e, underflows harmlessly
    num = abs(k * (sgn * em + 1.0))
    den = math.hypot(k * (sgn * em + 1.0), chi * (sgn * em - 1.0))
    return math.asin(min(1.0, num / den))


def f1(spec: SquareWell, k: float) -> float:
    return k * spec.right_width


def f2(spec: SquareWell, k: float, branch: int, parity: str) -> float:
    """Right-hand side of the symmetric level condition ``k (b - a) = f2(k)``."""
    return -symmetric_angle(spec, k, parity) + math.pi * branch


def level_branch(index: int) -> tuple[int, str]:
    """Map a level index to its ``(branch, parity)``: 0 -> (1, even), 1 -> (1, odd), ..."""
    return index // 2 + 1, ("even" if index % 2 == 0 else "odd")


def solve_spectrum_symmetric(
    spec: SquareWell,
    cfg: RootConfig = DEFAULT_ROOTS,
    check_tol: float = 1e-8,
) -> Spectrum:
    """Symmetric-well levels, one bracketed root per ``(branch, parity)``.

    Each root is re-checked against :func:`matching_determinant`.
    """
    if not spec.is_symmetric:
        raise DomainError("solve_spectrum_symmetric needs d == b, c == a, W0 == 0")
    from scipy.optimize import brentq

    L = spec.right_width
    kmax = k_max(spec) * (1.0 - _EDGE)
    levels, notes = [], []
    idx = 0
    while True:
        branch, parity = level_branch(idx)
        lo = (branch - 0.5) * math.pi / L
        hi = min(branch * math.pi / L, kmax)
        if lo >= kmax:
            break
        h = lambda k: f1(spec, k) - f2(spec, k, branch, parity)
        lo = max(lo, 1e-15 * kmax)
        h_lo, h_hi = h(lo), h(hi)
        if h_lo > 0 or h_hi < 0:
            if h_lo == 0:
                k = lo
            elif h_hi == 0:
                k = hi
            else:
                break  # level sits above the barrier top
        else:
            k = brentq(h, lo, hi, xtol=cfg.abs_tol, rtol=4 * np.finfo(float).eps, maxiter=cfg.max_iter)
        E = _energy(spec, k)
        if E < spec.U0 * (1.0 - _EDGE):
            det = matching_determinant(spec, E)
            if abs(det) > check_tol:
                raise NotAnEigenvalueError(f"symmetric root E={E} fails the matching condition ({det:.2e})")
        if parity == "odd" and E < levels[-1].energy:
            # the odd member never lies below the even one; a few ulps of inversion is rounding
            if levels[-1].energy - E > 8 * np.finfo(float).eps * levels[-1].energy:
                raise NotAnEigenvalueError(f"odd level {E} lies below its even partner {levels[-1].energy}")
            E = levels[-1].energy
            notes.append(f"doublet {branch - 1} is degenerate to machine precision")
        levels.append(Level(E, idx, parity, "both"))
        idx += 1
    if not levels:
        raise NoBoundStatesError("no symmetric square-well levels below U0")
    return Spectrum(tuple(levels), spec, notes=tuple(notes))


# --------------------------------------------------------------------------
# wavefunctions


@dataclass(frozen=True)
class SquareWavefunction:
    """Piecewise closed-form eigenfunction.

    ``a1 sin(k (x + d))`` on the left, ``a2 e^{chi x} + b2 e^{-chi x}`` in the
    barrier, ``a3 sin(k3 (x - b))`` on the right. ``a1`` is fixed by
    quadrature; ``a1_closed_form`` is the analytic normalisation, kept for
    cross-checking.
    """

    spec: SquareWell
    level: Level
    k: float
    k3: float
    chi: float
    a1: float
    a2: float
    b2: float
    a3: float
    a1_closed_form: float
    parity_sign: Optional[int] = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = self.spec
        out = np.zeros_like(x)
        left = (x >= -s.d) & (x < -s.c)
        mid = (x >= -s.c) & (x <= s.a)
        right = (x > s.a) & (x <= s.b)
        out[left] = self.a1 * np.sin(self.k * (x[left] + s.d))
        xm = x[mid]
        out[mid] = self.a2 * np.exp(self.chi * xm) + self.b2 * np.exp(-self.chi * xm)
        out[right] = self.a3 * np.sin(self.k3 * (x[right] - s.b))
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        s = self.spec
        out = np.zeros_like(x)
        left = (x >= -s.d) & (x < -s.c)
        mid = (x >= -s.c) & (x <= s.a)
        right = (x > s.a) & (x <= s.b)
        out[left] = self.a1 * self.k * np.cos(self.k * (x[left] + s.d))
        xm = x[mid]
        out[mid] = self.chi * (self.a2 * np.exp(self.chi * xm) - self.b2 * np.exp(-self.chi * xm))
        out[right] = self.a3 * self.k3 * np.cos(self.k3 * (x[right] - s.b))
        return out if out.ndim else float(out)

    @property
    def closed_form_discrepancy(self) -> float:
        return abs(self.a1_closed_form - self.a1) / abs(self.a1)

    def norm(self) -> float:
        """Exact integral of ``psi**2`` over the domain."""
        s = self.spec
        L1, L2, wb = s.left_width, s.right_width, s.barrier_width
        left = self.a1**2 * (0.5 * L1 - math.sin(2 * self.k * L1) / (4 * self.k))
        right = self.a3**2 * (0.5 * L2 - math.sin(2 * self.k3 * L2) / (4 * self.k3))
        g = -math.expm1(-2 * self.chi * wb) / (2 * self.chi)
        mid = (
            self.a2**2 * math.exp(2 * self.chi * s.a) * g
            + self.b2**2 * math.exp(2 * self.chi * s.c) * g
            + 2 * self.a2 * self.b2 * wb
        )
        return left + mid + right

    def norm_quadrature(self, tol: float = 1e-10) -> float:
        s = self.spec
        f = lambda x: float(self(x)) ** 2
        return integrate(f, -s.d, -s.c, tol) + integrate(f, -s.c, s.a, tol) + integrate(f, s.a, s.b, tol)


def _a1_closed_form(spec: SquareWell, w: SquareWavenumbers) -> float:
    L1, L2, wb = spec.left_width, spec.right_width, spec.barrier_width
    k, k3, chi = w.k, w.k3, w.chi
    s1, c1 = math.sin(k * L1), math.cos(k * L1)
    s2, c2 = math.sin(k3 * L2), math.cos(k3 * L2)
    ratio = (s1 - k / chi * c1) / (s2 + k3 / chi * c2)
    total = (
        L1 / 2
        + wb / 2 * (s1**2 - (k / chi) ** 2 * c1**2)
        + ratio**2 * math.exp(-2 * chi * wb) * (L2 / 2 + math.sin(2 * k3 * (spec.a - spec.b)) / (4 * k3))
        - math.sin(2 * k * L1) / (4 * k)
        + (s1 + k / chi * c1) ** 2 / (8 * chi) * math.expm1(2 * chi * wb)
        + (s1 - k / chi * c1) ** 2 / (8 * chi) * (-math.expm1(-2 * chi * wb))
    )
    return total**-0.5


def wavefunction(spec: SquareWell, level, tol: float = 1e-7) -> SquareWavefunction:
    """Normalised eigenfunction for a solved level (a :class:`Level` or an energy)."""
    if not isinstance(level, Level):
        level = Level(float(level), 0)
    E = level.energy
    det = matching_determinant(spec, E)
    if abs(det) > tol:
        raise NotAnEigenvalueError(f"E={E} is not an eigenvalue (matching residual {det:.2e})")
    w = wavenumbers(spec, E)
    s1, c1 = math.sin(w.k * spec.left_width), math.cos(w.k * spec.left_width)
    s2, c2 = math.sin(w.k3 * spec.right_width), math.cos(w.k3 * spec.right_width)
    r1, r3 = w.k / w.chi, w.k3 / w.chi
    a2 = 0.5 * math.exp(w.chi * spec.c) * (s1 + r1 * c1)
    b2 = 0.5 * math.exp(-w.chi * spec.c) * (s1 - r1 * c1)
    # two equivalent expressions for a3; use the better-conditioned one
    den_b, den_a = s2 + r3 * c2, r3 * c2 - s2
    if abs(den_b) * math.exp(w.chi * spec.barrier_width) >= abs(den_a):
        a3 = math.exp(-w.chi * spec.barrier_width) * (r1 * c1 - s1) / den_b
    else:
        a3 = 2.0 * a2 * math.exp(w.chi * spec.a) / den_a
    psi = SquareWavefunction(spec, level, w.k, w.k3, w.chi, 1.0, a2, b2, a3, math.nan)
    n2 = psi.norm()
    scale = 1.0 / math.sqrt(n2)
    a1_cf = _a1_closed_form(spec, w)
    parity_sign = None
    if spec.is_symmetric:
        # even: a2 == b2 (zero slope at 0); odd: a2 == -b2 (node at 0)
        parity_sign = 1 if abs(a2 + b2) >= abs(a2 - b2) else -1
    return SquareWavefunction(
        spec, level, w.k, w.k3, w.chi,
        scale, scale * a2, scale * b2, scale * a3, a1_cf, parity_sign,
    )


# --------------------------------------------------------------------------
# scattering


@dataclass(frozen=True)
class ScatteringSolution:
    energy: float
    D: float
    R: float


def transmission(spec: SquareWell, energy: float) -> ScatteringSolution:
    """Flux transmission and reflection through the barrier at ``0 < E < U0``.

    Evaluated with ``sinh^2`` and ``cosh^2`` divided out so large barriers do
    not overflow.
    """
    if not 0 < energy < spec.U0:
        raise DomainError(f"E={energy} outside (0, U0)")
    w = wavenumbers(spec, energy)
    k, k3, chi = w.k, w.k3, w.chi
    x = chi * spec.barrier_width
    tanh2 = math.tanh(x) ** 2
    sech2 = 1.0 / math.cosh(x) ** 2 if x < 350 else 4.0 * math.exp(-2.0 * x)
    kk = 4.0 * k * k3 * chi * chi
    refl = (k * k3 + chi * chi) ** 2 * tanh2 + chi * chi * (k - k3) ** 2
    den = refl + kk * sech2
    return ScatteringSolution(energy, kk * sech2 / den, refl / den)


# --------------------------------------------------------------------------
# linearised spectrum and period formulas


@dataclass(frozen=True)
class LinearizedSpectrum:
    k0: float
    delta: float
    period: float
    n_max: int
    k_values: tuple[float, ...]
    energies: tuple[float, ...]

    @property
    def E0(self) -> float:
        return self.energies[0]


def linearized_spectrum(spec: SquareWell) -> LinearizedSpectrum:
    """Equally spaced-in-``k`` approximation ``k_n = k0 (2n + 1)``.

    ``k0`` solves ``f1(k) = chord(k)`` where ``chord`` is the straight line
    through ``f2`` of the ground branch at ``k = 0+`` and at the barrier top.
    """
    if not spec.is_symmetric:
        raise DomainError("linearized_spectrum needs a symmetric well")
    kmax = k_max(spec)
    L = spec.right_width
    branch, parity = level_branch(0)
    y0 = f2(spec, 1e-12 * kmax, branch, parity)
    y1 = f2(spec, kmax, branch, parity)
    slope = (y1 - y0) / kmax
    k0 = y0 / (L - slope)
    hb, m = spec.phys.hbar, spec.phys.mass
    E0 = (hb * k0) ** 2 / (2 * m)
    delta = 4.0 * E0
    n_max = max(0, math.ceil((kmax - k0) / (2.0 * k0)) - 1)
    ks = tuple(k0 * (2 * n + 1) for n in range(n_max + 1))
    Es = tuple(E0 * (2 * n + 1) ** 2 for n in range(n_max + 1))
    return LinearizedSpectrum(k0, delta, 2.0 * math.pi * hb / delta, n_max, ks, Es)


def limiting_period(spec: SquareWell) -> float:
    """``4 m (b - a)^2 / (pi hbar)``."""
    return 4.0 * spec.phys.mass * spec.right_width**2 / (math.pi * spec.phys.hbar)


def _d_from_k2(spec: SquareWell, k2: float) -> float:
    hb, m = spec.phys.hbar, spec.phys.mass
    q2 = 2.0 * m * spec.U0 / hb**2
    chi2 = q2 - k2
    if k2 <= 0 or chi2 < 0:
        raise DomainError("level would lie outside (0, U0)")
    chi = math.sqrt(chi2)
    wb = spec.barrier_width
    # sinh^2(chi w) / (1 - k^2 hbar^2 / 2 m U0) written without the 0/0 at chi = 0
    sh_over = (math.sinh(chi * wb) / chi) ** 2 if chi > 0 else wb * wb
    ratio = q2 * q2 * sh_over / (4.0 * k2)
    return 1.0 / (1.0 + ratio)


def d_of_period(spec: SquareWell, n: int, T: float) -> float:
    """Transmission of level ``n`` implied by an oscillation period ``T``."""
    if T <= 0:
        raise DomainError("period must be positive")
    k2 = (2 * n + 1) ** 2 * math.pi * spec.phys.mass / (spec.phys.hbar * T)
    return _d_from_k2(spec, k2)


def d_of_delta(spec: SquareWell, n: int, delta: float) -> float:
    """Transmission of level ``n`` implied by a level divisor ``delta``."""
    if delta < 0:
        raise DomainError("delta must be non-negative")
    if delta == 0:
        return 0.0
    k2 = delta * spec.phys.mass * (2 * n + 1) ** 2 / (2.0 * spec.phys.hbar**2)
    return _d_from_k2(spec, k2)


def period_of_level(spec: SquareWell, n: int, k: float) -> float:
    """Period implied by a wavenumber of level ``n`` in the linearised picture."""
    return math.pi * spec.phys.mass * (2 * n + 1) ** 2 / (spec.phys.hbar * k * k)


# --------------------------------------------------------------------------
# level coincidence classification


@dataclass(frozen=True)
class LevelClass:
    energy: float
    case: int
    side: str
    left_candidate: Optional[float]
    right_candidate: Optional[float]


@dataclass(frozen=True)
class ClassificationReport:
    left_box: tuple[float, ...]
    right_box: tuple[float, ...]
    left_barrier: tuple[float, ...]
    right_barrier: tuple[float, ...]
    full: tuple[float, ...]
    classes: tuple[LevelClass, ...]
    match_tol: float = field(default=0.0)


def box_levels(width: float, floor: float, top: float, phys) -> list[float]:
    """Hard-wall box levels ``hbar^2 pi^2 n^2 / (2 m width^2) + floor`` below ``top``."""
    out = []
    n = 1
    while True:
        E = (phys.hbar * math.pi * n / width) ** 2 / (2 * phys.mass) + floor
        if E >= top:
            return out
        out.append(E)
        n += 1


def _left_barrier_residual(spec: SquareWell, E: float) -> float:
    w = wavenumbers(spec, E)
    L1, wb = spec.left_width, spec.barrier_width
    # left sine matched to sinh(chi (a - x)), which vanishes at x = a
    return (w.k * math.cos(w.k * L1) * math.tanh(w.chi * wb) + w.chi * math.sin(w.k * L1)) / math.hypot(w.k, w.chi)


def _right_barrier_residual(spec: SquareWell, E: float) -> float:
    w = wavenumbers(spec, E)
    L2, wb = spec.right_width, spec.barrier_width
    return (w.k3 * math.cos(w.k3 * L2) * math.tanh(w.chi * wb) + w.chi * math.sin(w.k3 * L2)) / math.hypot(w.k3, w.chi)


def classify_levels(spec: SquareWell, cfg: RootConfig = DEFAULT_ROOTS, match_tol: Optional[float] = None) -> ClassificationReport:
    """Label every full-domain level by how the per-region levels line up.

    Case 1: the left-plus-barrier and right-plus-barrier subsystems share the
    level (tunnelling along one level). Case 2: only one side has it, and that
    side's level penetrates the barrier. Case 3: only one side has it and it
    coincides with the closed box level of that well (no barrier penetration).
    """
    tol = 1e-6 * spec.U0 if match_tol is None else match_tol
    grid = _energy_grid(spec, cfg)
    lb = find_roots(lambda E: _left_barrier_residual(spec, E), grid[0], grid[-1], cfg, grid=grid)
    rb = find_roots(lambda E: _right_barrier_residual(spec, E), grid[0], grid[-1], cfg, grid=grid)
    lbox = box_levels(spec.left_width, 0.0, spec.U0, spec.phys)
    rbox = box_levels(spec.right_width, -spec.W0, spec.U0, spec.phys)
    full = solve_spectrum_asymmetric(spec, cfg).energies

    def nearest(xs, E):
        return min(xs, key=lambda v: abs(v - E)) if xs else None

    classes = []
    for E in full:
        el, er = nearest(lb, E), nearest(rb, E)
        if el is not None and er is not None and abs(el - er) <= tol:
            classes.append(LevelClass(E, 1, "both", el, er))
            continue
        dl = abs(el - E) if el is not None else math.inf
        dr = abs(er - E) if er is not None else math.inf
        side, cand, boxes = ("left", el, lbox) if dl <= dr else ("right", er, rbox)
        box = nearest(boxes, cand)
        case = 3 if box is not None and abs(box - cand) <= tol else 2
        classes.append(LevelClass(E, case, side, el, er))
    return ClassificationReport(
        tuple(lbox), tuple(rbox), tuple(lb), tuple(rb), tuple(full), tuple(classes), tol
    )
