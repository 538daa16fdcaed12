"""Special functions, bracketed root finding and quadrature.

The Kummer series and Hermite recurrence run in the compiled
:mod:`dwtunnel._kernels` extension when it is importable; otherwise the
pure-Python :mod:`dwtunnel._kernels_py` is used. ``BACKEND`` names the one
that was selected.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo

from .core import ConvergenceError, DwTunnelError, PoleError

if os.environ.get("DWTUNNEL_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _kern

    BACKEND = "python"
else:
    try:
        from . import _kernels as _kern

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build
        from . import _kernels_py as _kern

        BACKEND = "python"

_EPS = np.finfo(float).eps


class NoBracketError(DwTunnelError, ValueError):
    pass


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("bracket requires lo < hi")
        if not self.f_lo * self.f_hi < 0:
            raise ValueError("bracket requires a sign change")


@dataclass(frozen=True)
class RootConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 200
    scan_points: int = 2000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.scan_points < 2:
            raise ValueError("scan_points must be >= 2")


DEFAULT_ROOTS = RootConfig()


# --------------------------------------------------------------------------
# confluent hypergeometric function


class KummerValue(NamedTuple):
    """``M = mantissa * exp(log_scale)``; ``abs_error`` shares the scale."""

    mantissa: float
    log_scale: float
    abs_error: float

    @property
    def value(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        try:
            return self.mantissa * math.exp(self.log_scale)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    @property
    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale


def _is_nonpositive_int(c: float) -> bool:
    return c <= 0 and c == math.floor(c)


def _series(a: float, c: float, x: float, max_terms: int) -> KummerValue:
    total, scale, max_term, n = _kern.kummer_series(float(a), float(c), float(x), max_terms)
    if n < 0:
        raise ConvergenceError(f"Kummer series M({a}, {c}; {x}) did not converge in {max_terms} terms")
    err = 4.0 * _EPS * max_term * math.sqrt(abs(n) + 1.0)
    return KummerValue(total, scale, err)


def kummer_m_scaled(a: float, c: float, xi: float, path: str = "auto", max_terms: int = 2_000_000) -> KummerValue:
    """M(a, c; xi) in overflow-safe scaled form.

    ``path`` is ``"direct"`` (Taylor series at ``xi``), ``"reflected"``
    (``exp(xi) * M(c - a, c; -xi)``) or ``"auto"``, which reflects negative
    arguments so the summed series has a positive argument.
    """
    if _is_nonpositive_int(c):
        raise PoleError(f"M(a, c; xi) has a pole at c = {c}")
    if a == 0.0:
        return KummerValue(1.0, 0.0, 0.0)
    if path == "auto":
        polynomial = _is_nonpositive_int(a)
        path = "reflected" if (xi < 0 and not polynomial) else "direct"
    if path == "direct":
        return _series(a, c, xi, max_terms)
    if path == "reflected":
        v = _series(c - a, c, -xi, max_terms)
        return KummerValue(v.mantissa, v.log_scale + xi, v.abs_error)
    raise ValueError(f"unknown path {path!r}")


def kummer_m(a: float, c: float, xi: float, path: str = "auto") -> float:
    """Confluent hypergeometric function M(a, c; xi) = 1F1(a; c; xi).

    Examples
    --------
    >>> kummer_m(-1, 2, 1)
    0.5
    """
    return kummer_m_scaled(a, c, xi, path).value


def kummer_m_dxi(a: float, c: float, xi: float, path: str = "auto") -> float:
    """Derivative ``dM/dxi = (a/c) M(a + 1, c + 1; xi)``."""
    if _is_nonpositive_int(c):
        raise PoleError(f"M(a, c; xi) has a pole at c = {c}")
    if a == 0.0:
        return 0.0
    return a / c * kummer_m(a + 1.0, c + 1.0, xi, path)


def kummer_m_dxi_scaled(a: float, c: float, xi: float, path: str = "auto") -> KummerValue:
    if _is_nonpositive_int(c):
        raise PoleError(f"M(a, c; xi) has a pole at c = {c}")
    if a == 0.0:
        return KummerValue(0.0, 0.0, 0.0)
    v = kummer_m_scaled(a + 1.0, c + 1.0, xi, path)
    f = a / c
    return KummerValue(v.mantissa * f, v.log_scale, v.abs_error * abs(f))


# --------------------------------------------------------------------------
# elementary special functions


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial ``H_n(x)``."""
    if n < 0:
        raise ValueError("Hermite degree must be non-negative")
    return _kern.hermite(int(n), float(x))


def erf(x: float) -> float:
    return math.erf(x)


# --------------------------------------------------------------------------
# root finding


def _safe_eval(f, x):
    try:
        v = float(f(x))
    except (DwTunnelError, ZeroDivisionError, OverflowError, ValueError):
        return math.nan
    return v


def _opposite(u: float, v: float) -> bool:
    # sign test without forming u * v, which can overflow for scaled values
    return (u < 0 < v) or (v < 0 < u)


def _refine(f, lo, hi, cfg):
    return _spo.brentq(f, lo, hi, xtol=cfg.abs_tol, rtol=4 * _EPS, maxiter=cfg.max_iter)


def _extremum_pair(f, x0, x2, sign, cfg):
    """Look for two close roots hidden inside ``[x0, x2]`` without a sign change."""
    res = _spo.minimize_scalar(
        lambda x: sign * _safe_eval(f, x),
        bounds=(x0, x2),
        method="bounded",
        options={"xatol": max(cfg.abs_tol, 1e-15 * max(abs(x0), abs(x2))), "maxiter": 500},
    )
    xm = float(res.x)
    return xm, _safe_eval(f, xm)


def find_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: RootConfig = DEFAULT_ROOTS,
    *,
    require: bool = False,
    refine_extrema: bool = True,
    grid: Optional[np.ndarray] = None,
    touch_tol: Optional[float] = None,
) -> list[float]:
    """All sign-change roots of ``f`` on ``[lo, hi]``, ascending.

    The interval is scanned on ``cfg.scan_points`` uniform points (or on
    ``grid``). Each sign change is refined by Brent's method; brackets whose
    refined point still has ``|f|`` at least as large as the smaller endpoint
    value are poles and are dropped. With ``refine_extrema`` a local minimum
    of ``|f|`` between same-sign neighbours is probed for a hidden pair of
    close roots. If the probed extremum does not cross zero but
    ``|f| <= touch_tol`` there, it is reported as a single (double) root.
    """
    xs = np.linspace(lo, hi, cfg.scan_points) if grid is None else np.asarray(grid, dtype=float)
    fs = np.array([_safe_eval(f, x) for x in xs])
    brackets: list[tuple[float, float, float, float]] = []
    n = len(xs)
    for i in range(n - 1):
        f0, f1 = fs[i], fs[i + 1]
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if f0 == 0.0:
            brackets.append((xs[i], xs[i], 0.0, 0.0))
            continue
        if _opposite(f0, f1):
            brackets.append((xs[i], xs[i + 1], f0, f1))
    if n and fs[-1] == 0.0:
        brackets.append((xs[-1], xs[-1], 0.0, 0.0))
    if refine_extrema:
        for i in range(1, n - 1):
            f0, f1, f2 = fs[i - 1], fs[i], fs[i + 1]
            if not (math.isfinite(f0) and math.isfinite(f1) and math.isfinite(f2)):
                continue
            if f0 == 0.0 or f1 == 0.0 or f2 == 0.0 or _opposite(f0, f1) or _opposite(f1, f2):
                continue
            if abs(f1) < abs(f0) and abs(f1) <= abs(f2):
                sign = 1.0 if f1 > 0 else -1.0
                xm, fm = _extremum_pair(f, xs[i - 1], xs[i + 1], sign, cfg)
                if not math.isfinite(fm):
                    continue
                if sign * fm < 0:
                    brackets.append((xs[i - 1], xm, f0, fm))
                    brackets.append((xm, xs[i + 1], fm, f2))
                elif touch_tol is not None and abs(fm) <= touch_tol:
                    brackets.append((xm, xm, 0.0, 0.0))
    roots = []
    for x0, x1, f0, f1 in brackets:
        if x0 == x1:
            roots.append(float(x0))
            continue
        try:
            r = _refine(f, x0, x1, cfg)
        except (ValueError, RuntimeError):
            continue
        fr = _safe_eval(f, r)
        if not math.isfinite(fr) or abs(fr) >= min(abs(f0), abs(f1)):
            continue  # pole: the bracket collapses onto a divergence
        roots.append(float(r))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= 2 * cfg.abs_tol + 4 * _EPS * abs(r):
            continue
        merged.append(r)
    if require and not merged:
        raise NoBracketError(f"no sign change of f on [{lo}, {hi}]")
    return merged


# --------------------------------------------------------------------------
# quadrature


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    points=None,
    limit: int = 500,
    rel_tol: float = 0.0,
) -> float:
    """Adaptive Gauss-Kronrod quadrature.

    Succeeds when the error estimate is at most ``max(tol, rel_tol * |I|)``.

    Integrable endpoint singularities (square-root type) are handled by the
    extrapolation in QUADPACK's ``qags``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        val, err = _spi.quad(f, lo, hi, epsabs=tol, epsrel=rel_tol, limit=limit, points=points)
    if not (math.isfinite(val) and err <= max(tol, rel_tol * abs(val))):
        raise ConvergenceError(f"quadrature on [{lo}, {hi}] reached error {err:g} > {tol:g}")
    return float(val)
