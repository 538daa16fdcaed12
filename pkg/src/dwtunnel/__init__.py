"""Bound states, tunnelling splittings and wave-packet dynamics in 1-D double wells.

Solvers for the square, Morse, ``x^2 + B^2/x^2`` and parabolic double wells,
WKB estimates, a finite-difference reference solver and wave-packet
evolution on the resulting spectra.
"""

from . import dynamics, invsq, morse, numerics, oracle, squarewell, validation, wkbpara
from .core import (
    DEFAULT_PHYS,
    AmbiguousParityError,
    ConvergenceError,
    DegenerateParameterError,
    DomainError,
    DwTunnelError,
    GridError,
    IncommensurateError,
    InvSquare,
    Level,
    MorsePair,
    NoBoundStatesError,
    NormalizationError,
    NotAnEigenvalueError,
    ParabolicPair,
    PhysConfig,
    PoleError,
    QuadratureError,
    Spectrum,
    SquareWell,
    TurningPointError,
    evaluate_potential,
    make_spectrum,
)
from .numerics import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DEFAULT_PHYS",
    "AmbiguousParityError",
    "ConvergenceError",
    "DegenerateParameterError",
    "DomainError",
    "DwTunnelError",
    "GridError",
    "IncommensurateError",
    "InvSquare",
    "Level",
    "MorsePair",
    "NoBoundStatesError",
    "NormalizationError",
    "NotAnEigenvalueError",
    "ParabolicPair",
    "PhysConfig",
    "PoleError",
    "QuadratureError",
    "Spectrum",
    "SquareWell",
    "TurningPointError",
    "dynamics",
    "evaluate_potential",
    "invsq",
    "make_spectrum",
    "morse",
    "numerics",
    "oracle",
    "squarewell",
    "validation",
    "wkbpara",
]
