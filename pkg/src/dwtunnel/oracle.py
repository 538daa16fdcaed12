"""Finite-difference reference solver for the 1-D stationary Schrodinger equation.

Second-order central differences on a uniform grid with Dirichlet ends,
solved as a symmetric tridiagonal eigenproblem. Every level carries a
Richardson error estimate from a second solve at half the grid step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import (
    DEFAULT_PHYS,
    AmbiguousParityError,
    GridError,
    InvSquare,
    Level,
    MorsePair,
    ParabolicPair,
    PhysConfig,
    Spectrum,
    SquareWell,
    evaluate_potential,
)


@dataclass(frozen=True)
class GridProblem:
    """Dirichlet problem on ``[x_lo, x_hi]``.

    ``potential`` maps an array of grid points to potential values.
    ``cell_average``, when given, maps ``(left_edges, right_edges)`` to the
    exact mean of the potential over each cell; it is used instead of point
    sampling so that step potentials converge at second order.
    ``hard_walls`` are interior points where the wavefunction is forced to
    vanish; the problem then splits into independent segments.
    """

    x_lo: float
    x_hi: float
    potential: Callable[[np.ndarray], np.ndarray]
    n_points: int = 4000
    hard_walls: tuple[float, ...] = ()
    cell_average: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    phys: PhysConfig = DEFAULT_PHYS

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise ValueError("GridProblem requires x_lo < x_hi")
        if self.n_points < 3:
            raise ValueError("GridProblem requires n_points >= 3")

    def segments(self) -> list[tuple[float, float]]:
        cuts = [self.x_lo] + sorted(w for w in self.hard_walls if self.x_lo < w < self.x_hi) + [self.x_hi]
        return list(zip(cuts[:-1], cuts[1:]))


@dataclass(frozen=True)
class OracleResult:
    spectrum: Spectrum
    raw_coarse: tuple[float, ...]
    raw_fine: tuple[float, ...]
    segment_of_level: tuple[int, ...] = field(default=())

    @property
    def energies(self) -> list[float]:
        return self.spectrum.energies

    @property
    def errors(self) -> tuple[float, ...]:
        return self.spectrum.errors or ()


def _segment_points(problem: GridProblem, lo: float, hi: float) -> int:
    frac = (hi - lo) / (problem.x_hi - problem.x_lo)
    return max(3, int(round(problem.n_points * frac)))


def _assemble(problem: GridProblem, lo: float, hi: float, n_points: int):
    h = (hi - lo) / (n_points - 1)
    x = lo + h * np.arange(1, n_points - 1)
    if problem.cell_average is not None:
        u = np.asarray(problem.cell_average(x - 0.5 * h, x + 0.5 * h), dtype=float)
    else:
        u = np.asarray(problem.potential(x), dtype=float)
    kin = problem.phys.hbar**2 / (2.0 * problem.phys.mass * h * h)
    diag = 2.0 * kin + u
    off = np.full(len(x) - 1, -kin)
    return x, h, diag, off


def _lowest(problem, lo, hi, n_points, n_levels, vectors=False):
    x, h, diag, off = _assemble(problem, lo, hi, n_points)
    k = min(n_levels, len(diag))
    if vectors:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
        return x, h, w, v
    w = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, k - 1))
    return x, h, w, None


def solve_grid(problem: GridProblem, n_levels: int, error_bound: Optional[float] = None) -> OracleResult:
    """Lowest ``n_levels`` eigenvalues with Richardson error estimates.

    Energies are Richardson-extrapolated from grids with ``n`` and ``2n - 1``
    points; the reported error is ``|E_fine - E_coarse| / 3``. Raises
    :class:`GridError` if any estimate exceeds ``error_bound``.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    found = []
    for seg, (lo, hi) in enumerate(problem.segments()):
        n = _segment_points(problem, lo, hi)
        _, _, coarse, _ = _lowest(problem, lo, hi, n, n_levels)
        _, _, fine, _ = _lowest(problem, lo, hi, 2 * n - 1, n_levels)
        for ec, ef in zip(coarse, fine):
            found.append((ef + (ef - ec) / 3.0, abs(ef - ec) / 3.0, ec, ef, seg))
    found.sort(key=lambda t: t[0])
    found = found[:n_levels]
    levels = tuple(Level(float(e), i) for i, (e, *_rest) in enumerate(found))
    errs = tuple(float(t[1]) for t in found)
    if error_bound is not None and errs and max(errs) > error_bound:
        raise GridError(f"oracle error estimate {max(errs):.3g} exceeds bound {error_bound:.3g}")
    return OracleResult(
        Spectrum(levels, None, errors=errs),
        tuple(float(t[2]) for t in found),
        tuple(float(t[3]) for t in found),
        tuple(t[4] for t in found),
    )


def eigenstates(problem: GridProblem, n_levels: int):
    """Grid, energies and unit-L2-normalised eigenvectors for a single-segment problem."""
    if problem.segments() != [(problem.x_lo, problem.x_hi)]:
        raise ValueError("eigenstates needs a problem without interior hard walls")
    x, h, w, v = _lowest(problem, problem.x_lo, problem.x_hi, problem.n_points, n_levels, vectors=True)
    v = v / math.sqrt(h)
    # fix sign: first significant lobe positive
    for j in range(v.shape[1]):
        col = v[:, j]
        idx = np.argmax(np.abs(col) > 1e-3 * np.abs(col).max())
        if col[idx] < 0:
            v[:, j] = -col
    return x, w, v


def parity_of_state(problem: GridProblem, index: int) -> str:
    """``"even"`` or ``"odd"`` from the reflection correlation about the midpoint."""
    _, _, v = eigenstates(problem, index + 1)
    col = v[:, index]
    corr = float(np.dot(col, col[::-1]) / np.dot(col, col))
    if corr >= 0.9:
        return "even"
    if corr <= -0.9:
        return "odd"
    raise AmbiguousParityError(f"reflection correlation {corr:.3f} for level {index}")


def count_nodes(values: np.ndarray, rel_floor: float = 1e-8) -> int:
    """Interior sign changes, ignoring samples below ``rel_floor * max|values|``."""
    vals = np.asarray(values, dtype=float)
    floor = rel_floor * np.abs(vals).max()
    sig = vals[np.abs(vals) > floor]
    return int(np.count_nonzero(np.signbit(sig[1:]) != np.signbit(sig[:-1])))


# --------------------------------------------------------------------------
# problem builders for the potential families


def _square_cell_average(spec: SquareWell):
    def avg(left, right):
        def overlap(lo, hi):
            return np.clip(np.minimum(right, hi) - np.maximum(left, lo), 0.0, None)

        width = right - left
        barrier = overlap(-spec.c, spec.a)
        right_well = overlap(spec.a, spec.b)
        return (spec.U0 * barrier - spec.W0 * right_well) / width

    return avg


def _morse_cell_average(spec: MorsePair):
    A, B, al, be, c, a = spec.A, spec.B, spec.alpha, spec.beta, spec.c, spec.a

    def prim_left(x):
        e = np.exp(-al * (x + c))
        return A * (-e * e / (2 * al) + 2 * e / al)

    def prim_right(x):
        e = np.exp(be * (x - a))
        return B * (e * e / (2 * be) - 2 * e / be)

    def avg(left, right):
        lm = np.minimum(right, 0.0)
        rm = np.maximum(left, 0.0)
        total = np.where(lm > left, prim_left(lm) - prim_left(left), 0.0)
        total = total + np.where(right > rm, prim_right(right) - prim_right(rm), 0.0)
        return total / (right - left)

    return avg


def problem_for(spec, n_points: int = 4000, x_max: Optional[float] = None, half_line: bool = False) -> GridProblem:
    """Build the reference :class:`GridProblem` for a potential family.

    ``x_max`` bounds the unbounded families (InvSquare, ParabolicPair); by
    default it is placed where the potential exceeds the lowest levels by a
    wide margin. ``half_line`` restricts InvSquare to ``(0, x_max]``.
    """
    vec = np.vectorize(lambda x: evaluate_potential(spec, float(x)), otypes=[float])
    if isinstance(spec, SquareWell):
        return GridProblem(-spec.d, spec.b, vec, n_points, cell_average=_square_cell_average(spec), phys=spec.phys)
    if isinstance(spec, MorsePair):
        return GridProblem(-spec.d, spec.b, vec, n_points, cell_average=_morse_cell_average(spec), phys=spec.phys)
    if isinstance(spec, InvSquare):
        length = math.sqrt(spec.phys.hbar / (spec.phys.mass * spec.w))
        xm = x_max if x_max is not None else 12.0 * length + math.sqrt(spec.B)
        if half_line or spec.B > 0:
            return GridProblem(0.0, xm, vec, n_points, phys=spec.phys)
        return GridProblem(-xm, xm, vec, n_points, phys=spec.phys)
    if isinstance(spec, ParabolicPair):
        length = math.sqrt(spec.phys.hbar / (spec.phys.mass * spec.w))
        xm = x_max if x_max is not None else spec.a + 12.0 * length
        return GridProblem(-xm, xm, vec, n_points, phys=spec.phys)
    raise TypeError(f"no oracle builder for {type(spec).__name__}")


def solve_spec(spec, n_levels: int, **kw) -> OracleResult:
    n_points = kw.pop("n_points", 4000)
    error_bound = kw.pop("error_bound", None)
    return solve_grid(problem_for(spec, n_points, **kw), n_levels, error_bound)


def half_domain_problem(spec: MorsePair, side: str, n_points: int = 4000) -> GridProblem:
    """Single Morse well with a Dirichlet wall at the junction ``x = 0``."""
    vec = np.vectorize(lambda x: evaluate_potential(spec, float(x)), otypes=[float])
    if side == "left":
        return GridProblem(-spec.d, 0.0, vec, n_points, phys=spec.phys)
    return GridProblem(0.0, spec.b, vec, n_points, phys=spec.phys)


def level_energies(result_or_spectrum) -> list[float]:
    if isinstance(result_or_spectrum, OracleResult):
        return result_or_spectrum.energies
    return [lv.energy for lv in result_or_spectrum]


def within(a: Sequence[float], b: Sequence[float], tol: float) -> bool:
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))
