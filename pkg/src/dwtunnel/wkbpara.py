"""WKB tunnelling quantities and the parabolic double well.

For a symmetric barrier with inner turning points ``x_l < x_r`` at energy
``E0`` the level splitting and barrier transmission are::

    dE = (w hbar / pi) exp(-S),   D = exp(-2 S),   S = (1/hbar) int |p| dx

so that ``dE = (w hbar / pi) sqrt(D)``. ``w`` is the angular frequency of
classical motion in one well at ``E0``. Both carry the configurable
``PhysConfig.wkb_prefactor``.

The parabolic pair ``U = m w^2 (|x| - a)^2 / 2`` is treated by perturbing
the harmonic level ``hbar w (n + 1/2)`` of one well:
``E_n^(-+) = hbar w (n + 1/2) -+ dE_n`` with
``dE_n = (hbar^2 / m) phi_n(0) phi_n'(0)`` and ``phi_n`` the right-well
Hermite function normalised on ``x > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _spi

from .core import (
    InvSquare,
    MorsePair,
    NormalizationError,
    ParabolicPair,
    SquareWell,
    TurningPointError,
    evaluate_potential,
)
from .numerics import RootConfig, erf, find_roots, hermite, integrate


@dataclass(frozen=True)
class WkbContext:
    """Everything the WKB formulas need at one energy."""

    energy: float
    turning_points: tuple[float, float]
    action: float
    w_classical: float
    v0: float
    half_action_right: float  # (1/hbar) int_0^{x_r} |p| dx
    hbar: float
    mass: float
    prefactor: float = 1.0

    def __post_init__(self):
        if self.action < 0:
            raise ValueError("action must be non-negative")


# --------------------------------------------------------------------------
# turning points and integrals


def _barrier_centre(spec) -> float:
    if isinstance(spec, SquareWell):
        return 0.5 * (spec.a - spec.c)
    return 0.0


def _domain(spec) -> tuple[float, float]:
    if isinstance(spec, (SquareWell, MorsePair)):
        return spec.domain
    length = math.sqrt(spec.phys.hbar / (spec.phys.mass * spec.w))
    reach = (spec.a if isinstance(spec, ParabolicPair) else 0.0) + 50 * length
    return (-reach, reach)


def _inner_turning_points(spec, E0: float) -> tuple[float, float]:
    if isinstance(spec, InvSquare):
        raise TurningPointError("the x^2 + B^2/x^2 barrier is impenetrable (B > 0) or absent (B = 0)")
    if isinstance(spec, SquareWell):
        if not 0 < E0 < spec.U0:
            raise TurningPointError(f"E0={E0} is not below the square barrier top {spec.U0}")
        if spec.barrier_width <= 0:
            raise TurningPointError("zero-width barrier has no inner turning points")
        return (-spec.c, spec.a)
    x0 = _barrier_centre(spec)
    if evaluate_potential(spec, x0) <= E0:
        raise TurningPointError(f"E0={E0} is above the barrier at x={x0}")
    lo, hi = _domain(spec)
    g = lambda x: evaluate_potential(spec, x) - E0
    cfg = RootConfig(1e-14, 1e-14, 200, 4000)
    left = find_roots(g, lo, x0, cfg, refine_extrema=False)
    right = find_roots(g, x0, hi, cfg, refine_extrema=False)
    if not left or not right:
        raise TurningPointError(f"no inner turning points at E0={E0}")
    return (max(left), min(right))


def _outer_turning_point(spec, E0: float, x_inner: float, side: str) -> tuple[float, bool]:
    """Outer end of the classically allowed region next to ``x_inner``.

    Returns ``(x, soft)``; ``soft`` is False when the region ends on a hard wall.
    """
    lo, hi = _domain(spec)
    g = lambda x: evaluate_potential(spec, x) - E0
    cfg = RootConfig(1e-14, 1e-14, 200, 4000)
    if side == "left":
        roots = find_roots(g, lo, x_inner - 1e-12 * max(1.0, abs(x_inner)), cfg, refine_extrema=False)
        return (max(roots), True) if roots else (lo, False)
    roots = find_roots(g, x_inner + 1e-12 * max(1.0, abs(x_inner)), hi, cfg, refine_extrema=False)
    return (min(roots), True) if roots else (hi, False)


def _classical_frequency(spec, E0: float, x_l: float, x_r: float, side: str = "left") -> float:
    """``2 pi / T`` for the classical orbit in one well at ``E0``."""
    m = spec.phys.mass
    if isinstance(spec, SquareWell):
        if side == "left":
            v, L = math.sqrt(2 * E0 / m), spec.left_width
        else:
            v, L = math.sqrt(2 * (E0 + spec.W0) / m), spec.right_width
        return math.pi * v / L
    inner = x_l if side == "left" else x_r
    outer, soft = _outer_turning_point(spec, E0, inner, side)
    lo, hi = (outer, inner) if side == "left" else (inner, outer)

    # dt = dx / v with v = sqrt(2 (E0 - U) / m); the inverse-square-root
    # singularities at soft turning points go into the quadrature weight
    a_exp = -0.5 if (soft or side == "right") else 0.0
    b_exp = -0.5 if (soft or side == "left") else 0.0
    span = hi - lo
    h = 1e-7 * span
    slope_lo = (evaluate_potential(spec, lo + h) - evaluate_potential(spec, lo)) / h
    slope_hi = (evaluate_potential(spec, hi) - evaluate_potential(spec, hi - h)) / h

    def smooth(x):
        # (x - lo)^(-a_exp) (hi - x)^(-b_exp) / v, linearised next to soft ends
        # where E0 - U loses all significant digits
        dl, dh = x - lo, hi - x
        if a_exp and dl < 1e-8 * span and slope_lo < 0:
            return math.sqrt(m * (dh if b_exp else 1.0) / (-2 * slope_lo)) * (1.0 if b_exp else 1.0 / math.sqrt(dl))
        if b_exp and dh < 1e-8 * span and slope_hi > 0:
            return math.sqrt(m * (dl if a_exp else 1.0) / (2 * slope_hi)) * (1.0 if a_exp else 1.0 / math.sqrt(dh))
        ke = 2.0 * (E0 - evaluate_potential(spec, x)) / m
        return (dl ** (-a_exp)) * (dh ** (-b_exp)) / math.sqrt(ke)

    half, err = _spi.quad(smooth, lo, hi, weight="alg", wvar=(a_exp, b_exp), limit=200, epsabs=0.0, epsrel=1e-12)
    return 2 * math.pi / (2 * half)


def wkb_action(spec, E0: float, side: str = "left") -> WkbContext:
    """Barrier action, turning points and classical frequency at ``E0``.

    ``side`` selects the well whose classical period defines ``w`` (they
    coincide for symmetric potentials).
    """
    hb, m = spec.phys.hbar, spec.phys.mass
    x_l, x_r = _inner_turning_points(spec, E0)
    p = lambda x: math.sqrt(max(2 * m * (evaluate_potential(spec, x) - E0), 0.0)) / hb
    if isinstance(spec, SquareWell):
        chi = math.sqrt(2 * m * (spec.U0 - E0)) / hb
        S = chi * (x_r - x_l)
        half = chi * max(x_r - max(0.0, x_l), 0.0)
    else:
        kinks = [0.0] if x_l < 0.0 < x_r else None
        S = integrate(p, x_l, x_r, 1e-300, points=kinks, rel_tol=1e-12) if x_r > x_l else 0.0
        half = integrate(p, max(0.0, x_l), x_r, 1e-300, rel_tol=1e-12) if x_r > 0 else 0.0
    mid = 0.0 if x_l <= 0.0 <= x_r else 0.5 * (x_l + x_r)
    v0 = math.sqrt(max(2 * (evaluate_potential(spec, mid) - E0) / m, 0.0))
    w = _classical_frequency(spec, E0, x_l, x_r, side)
    return WkbContext(E0, (x_l, x_r), S, w, v0, half, hb, m, spec.phys.wkb_prefactor)


def action_fixed_grid(spec, E0: float, n_points: int = 1_000_001) -> float:
    """Barrier action by the composite trapezoid rule on a uniform grid.

    An independent check on the adaptive quadrature in :func:`wkb_action`.
    """
    x_l, x_r = _inner_turning_points(spec, E0)
    m, hb = spec.phys.mass, spec.phys.hbar
    x = np.linspace(x_l, x_r, n_points)
    u = np.array([evaluate_potential(spec, float(t)) for t in x]) if n_points <= 20001 else _vector_potential(spec, x)
    p = np.sqrt(np.clip(2 * m * (u - E0), 0.0, None)) / hb
    return float(np.trapezoid(p, x)) if hasattr(np, "trapezoid") else float(np.trapz(p, x))


def _vector_potential(spec, x: np.ndarray) -> np.ndarray:
    if isinstance(spec, ParabolicPair):
        shift = np.where(x > 0, spec.a, -spec.a)
        return 0.5 * spec.phys.mass * spec.w**2 * (x - shift) ** 2
    return np.array([evaluate_potential(spec, float(t)) for t in x])


# --------------------------------------------------------------------------
# splitting and transmission


def wkb_splitting(ctx: WkbContext) -> float:
    """``prefactor * (w hbar / pi) * exp(-S)``."""
    if ctx.action <= 0:
        raise ValueError("WKB splitting needs a positive barrier action")
    return ctx.prefactor * ctx.w_classical * ctx.hbar / math.pi * math.exp(-ctx.action)


def wkb_splitting_from_wavefunction(ctx: WkbContext) -> float:
    """``(2 hbar^2 / m) phi0(0) phi0'(0)`` with the WKB tail of the one-well state.

    ``phi0(0) = sqrt(w / (2 pi v0)) exp(-S_half)`` and
    ``phi0'(0) = (m v0 / hbar) phi0(0)``, where ``S_half`` is the action from
    the barrier centre to the right turning point. For a symmetric barrier
    ``2 S_half = S`` and this equals :func:`wkb_splitting`.
    """
    if ctx.v0 <= 0:
        raise ValueError("v0 must be positive")
    phi0 = math.sqrt(ctx.w_classical / (2 * math.pi * ctx.v0)) * math.exp(-ctx.half_action_right)
    dphi0 = ctx.mass * ctx.v0 / ctx.hbar * phi0
    return ctx.prefactor * 2 * ctx.hbar**2 / ctx.mass * phi0 * dphi0


def wkb_transmission(ctx: WkbContext) -> float:
    """``prefactor * exp(-2 S)``."""
    if ctx.action <= 0:
        raise ValueError("WKB transmission needs a positive barrier action")
    return ctx.prefactor * math.exp(-2 * ctx.action)


def splitting_from_transmission(ctx: WkbContext, D: float) -> float:
    """``prefactor * (w hbar / pi) * sqrt(D / prefactor)``.

    With ``D`` from :func:`wkb_transmission` this reproduces
    :func:`wkb_splitting` exactly.
    """
    return ctx.prefactor * ctx.w_classical * ctx.hbar / math.pi * math.sqrt(D / ctx.prefactor)


# --------------------------------------------------------------------------
# parabolic pair


@dataclass(frozen=True)
class ParabolicLevel:
    n: int
    E_minus: float
    E_plus: float
    delta_E_n: float
    A_n_sq: float
    alpha: float

    @property
    def gap(self) -> float:
        """``E_plus - E_minus = 2 delta_E_n``."""
        return self.E_plus - self.E_minus


def _alpha(spec: ParabolicPair) -> float:
    return math.sqrt(spec.phys.mass * spec.w / spec.phys.hbar)


def normalization_sq(spec: ParabolicPair, n: int) -> float:
    """``A_n^2`` so that the right-well Hermite function has unit norm on ``x > 0``.

    ``A_n^2 = alpha / (2^n n!) / {(sqrt(pi)/2)(1 + erf(y))
    - exp(-y^2) sum_{k<n} H_{n-k}(y) H_{n-k-1}(y) / (2^(n-k) (n-k)!)}``
    with ``y = alpha a``.
    """
    return _normalization_sq(spec, n, power_of_two=True)


def normalization_sq_without_power(spec: ParabolicPair, n: int) -> float:
    """The same bracket with the ``2^(n-k)`` factor of each sum term left out.

    This variant is not a normalisation for ``n >= 1``; it exists so the
    discrepancy can be measured against quadrature.
    """
    return _normalization_sq(spec, n, power_of_two=False)


def _normalization_sq(spec: ParabolicPair, n: int, power_of_two: bool) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    al = _alpha(spec)
    y = al * spec.a
    tail = 0.0
    for k in range(n):
        j = n - k
        term = hermite(j, y) * hermite(j - 1, y) / math.factorial(j)
        tail += term / 2**j if power_of_two else term
    bracket = 0.5 * math.sqrt(math.pi) * (1 + erf(y)) - math.exp(-y * y) * tail
    if bracket <= 0:
        raise NormalizationError(f"normalisation bracket {bracket:.3e} <= 0 (wells overlap too strongly)")
    return al / (2**n * math.factorial(n)) / bracket


def normalization_quadrature(spec: ParabolicPair, n: int) -> float:
    """``1 / int_0^inf exp(-alpha^2 (x-a)^2) H_n(alpha (x-a))^2 dx`` by quadrature."""
    al = _alpha(spec)
    f = lambda x: math.exp(-((al * (x - spec.a)) ** 2)) * hermite(n, al * (x - spec.a)) ** 2
    upper = spec.a + (12.0 + 2 * math.sqrt(n + 1)) / al
    val = integrate(f, 0.0, upper, 0.0, rel_tol=1e-13, points=[spec.a])
    return 1.0 / val


def parabolic_splitting(spec: ParabolicPair, n: int) -> ParabolicLevel:
    """Level shift ``dE_n = (hbar^2/m) A_n^2 exp(-y^2) H_n(y) (alpha y H_n(y) - 2 n alpha H_{n-1}(y))``.

    ``y = alpha a``. The ``n = 0`` term with ``H_{-1}`` is absent.
    """
    al = _alpha(spec)
    y = al * spec.a
    A2 = normalization_sq(spec, n)
    hn = hermite(n, y)
    lower = 2 * n * al * hermite(n - 1, y) if n > 0 else 0.0
    dE = spec.phys.hbar**2 / spec.phys.mass * A2 * math.exp(-y * y) * hn * (al * al * spec.a * hn - lower)
    E0 = spec.phys.hbar * spec.w * (n + 0.5)
    return ParabolicLevel(n, E0 - dE, E0 + dE, dE, A2, al)


def parabolic_context(spec: ParabolicPair, n: int) -> WkbContext:
    """WKB context at the unperturbed level ``hbar w (n + 1/2)``."""
    return wkb_action(spec, spec.phys.hbar * spec.w * (n + 0.5))
