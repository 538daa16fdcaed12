"""Shared value types and potential families for the double-well solvers.

All quantities are in units where the reduced Planck constant and the
particle mass are set by :class:`PhysConfig` (both default to 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union


class DwTunnelError(Exception):
    """Base class for all solver errors."""


class DomainError(DwTunnelError, ValueError):
    pass


class PoleError(DwTunnelError, ValueError):
    pass


class ConvergenceError(DwTunnelError, RuntimeError):
    pass


class NoBoundStatesError(DwTunnelError, RuntimeError):
    pass


class NotAnEigenvalueError(DwTunnelError, ValueError):
    pass


class DegenerateParameterError(DwTunnelError, ValueError):
    pass


class TurningPointError(DwTunnelError, ValueError):
    pass


class NormalizationError(DwTunnelError, ValueError):
    pass


class IncommensurateError(DwTunnelError, ValueError):
    pass


class GridError(DwTunnelError, RuntimeError):
    pass


class AmbiguousParityError(DwTunnelError, RuntimeError):
    pass


class QuadratureError(ConvergenceError):
    pass


@dataclass(frozen=True)
class PhysConfig:
    hbar: float = 1.0
    mass: float = 1.0
    wkb_prefactor: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0 and self.wkb_prefactor > 0):
            raise DomainError("hbar, mass and wkb_prefactor must be positive")


DEFAULT_PHYS = PhysConfig()


@dataclass(frozen=True)
class SquareWell:
    """Infinite-walled square double well.

    Hard walls at ``-d`` and ``b``; left well floor 0 on ``(-d, -c)``, barrier
    of height ``U0`` on ``(-c, a)``, right well floor ``-W0`` on ``(a, b)``.
    """

    d: float
    c: float
    a: float
    b: float
    U0: float
    W0: float = 0.0
    phys: PhysConfig = DEFAULT_PHYS

    def __post_init__(self):
        if not (-self.d < -self.c <= self.a < self.b):
            raise DomainError("SquareWell requires -d < -c <= a < b")
        if self.U0 <= 0 or self.W0 < 0:
            raise DomainError("SquareWell requires U0 > 0 and W0 >= 0")

    @property
    def left_width(self) -> float:
        return self.d - self.c

    @property
    def right_width(self) -> float:
        return self.b - self.a

    @property
    def barrier_width(self) -> float:
        return self.a + self.c

    @property
    def is_symmetric(self) -> bool:
        return (
            math.isclose(self.d, self.b, rel_tol=1e-14, abs_tol=1e-14)
            and math.isclose(self.c, self.a, rel_tol=1e-14, abs_tol=1e-14)
            and self.W0 == 0.0
        )

    @property
    def domain(self) -> tuple[float, float]:
        return (-self.d, self.b)

    def region(self, x: float) -> str:
        if x < -self.c:
            return "left"
        if x <= self.a:
            return "barrier"
        return "right"


@dataclass(frozen=True)
class MorsePair:
    """Two Morse wells joined at ``x = 0``, minima at ``-c`` and ``a``."""

    A: float
    B: float
    alpha: float
    beta: float
    c: float
    a: float
    d: float
    b: float
    phys: PhysConfig = DEFAULT_PHYS

    def __post_init__(self):
        if min(self.A, self.B, self.alpha, self.beta) <= 0:
            raise DomainError("MorsePair requires A, B, alpha, beta > 0")
        if not (-self.d < 0 < self.b):
            raise DomainError("MorsePair requires -d < 0 < b")
        if not (-self.d < -self.c < 0 < self.a < self.b):
            raise DomainError("Morse minima at -c and a must lie inside the domain")

    @property
    def is_symmetric(self) -> bool:
        return (self.A, self.alpha, self.c, self.d) == (self.B, self.beta, self.a, self.b)

    @property
    def domain(self) -> tuple[float, float]:
        return (-self.d, self.b)


@dataclass(frozen=True)
class InvSquare:
    """``U = m w^2 (x^2 + B^2/x^2) / 2`` on the whole line."""

    w: float
    B: float = 0.0
    phys: PhysConfig = DEFAULT_PHYS

    def __post_init__(self):
        if self.w <= 0 or self.B < 0:
            raise DomainError("InvSquare requires w > 0 and B >= 0")

    is_symmetric = True


@dataclass(frozen=True)
class ParabolicPair:
    """Two harmonic wells centred at ``-a`` and ``a`` meeting in a cusp at 0."""

    w: float
    a: float
    phys: PhysConfig = DEFAULT_PHYS

    def __post_init__(self):
        if self.w <= 0 or self.a <= 0:
            raise DomainError("ParabolicPair requires w > 0 and a > 0")

    is_symmetric = True


PotentialSpec = Union[SquareWell, MorsePair, InvSquare, ParabolicPair]


def evaluate_potential(spec: PotentialSpec, x: float) -> float:
    """Return ``U(x)`` for any potential family.

    Raises :class:`DomainError` outside the hard-wall domain or at the
    ``1/x^2`` singularity.
    """
    if isinstance(spec, SquareWell):
        if x < -spec.d or x > spec.b:
            raise DomainError(f"x={x} outside [-d, b]")
        region = spec.region(x)
        if region == "left":
            return 0.0
        if region == "barrier":
            return spec.U0
        return -spec.W0
    if isinstance(spec, MorsePair):
        if x < -spec.d or x > spec.b:
            raise DomainError(f"x={x} outside [-d, b]")
        if x <= 0:
            e = math.exp(-spec.alpha * (x + spec.c))
            return spec.A * (e * e - 2.0 * e)
        e = math.exp(spec.beta * (x - spec.a))
        return spec.B * (e * e - 2.0 * e)
    if isinstance(spec, InvSquare):
        k = 0.5 * spec.phys.mass * spec.w**2
        if spec.B == 0:
            return k * x * x
        if x == 0:
            raise DomainError("InvSquare potential is singular at x = 0")
        return k * (x * x + spec.B**2 / (x * x))
    if isinstance(spec, ParabolicPair):
        shift = spec.a if x > 0 else -spec.a
        return 0.5 * spec.phys.mass * spec.w**2 * (x - shift) ** 2
    raise TypeError(f"unknown potential family {type(spec).__name__}")


@dataclass(frozen=True)
class Level:
    energy: float
    index: int
    parity: str = "none"  # even | odd | none
    well: str = "both"  # left | right | both

    def __post_init__(self):
        if self.parity not in ("even", "odd", "none"):
            raise ValueError(f"bad parity {self.parity!r}")
        if self.well not in ("left", "right", "both"):
            raise ValueError(f"bad well label {self.well!r}")


@dataclass(frozen=True)
class Spectrum:
    levels: tuple[Level, ...]
    family: Optional[PotentialSpec] = None
    errors: Optional[tuple[float, ...]] = None
    excluded: tuple[Level, ...] = field(default=())
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        # equal neighbours are allowed: doublets can be degenerate to machine precision
        e = [lv.energy for lv in self.levels]
        if any(b < a for a, b in zip(e, e[1:])):
            raise ValueError("Spectrum levels must be ascending")

    @property
    def count_bound(self) -> int:
        return len(self.levels)

    @property
    def energies(self) -> list[float]:
        return [lv.energy for lv in self.levels]

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __getitem__(self, i):
        return self.levels[i]


def make_spectrum(energies, family=None, parity=None, well="both", **kw) -> Spectrum:
    """Build a :class:`Spectrum` from raw energies, sorting and labelling."""
    order = sorted(range(len(energies)), key=lambda i: energies[i])
    levels = []
    for idx, i in enumerate(order):
        p = parity[i] if parity is not None else "none"
        levels.append(Level(float(energies[i]), idx, p, well))
    return Spectrum(tuple(levels), family, **kw)
