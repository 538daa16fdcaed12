"""Wave-packet evolution on a discrete spectrum.

A packet ``psi(t) = sum g_n phi_n exp(-i (E_n - E_0) t / hbar)`` returns to
itself after ``T = 2 pi hbar / Delta`` when every spacing ``E_n - E_0`` is an
integer multiple of ``Delta``. For spectra without such a divisor the
module looks for quasi-cycles, the first times at which the autocorrelation
climbs back above a chosen fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize as _spo

from .core import (
    DEFAULT_PHYS,
    ConvergenceError,
    DomainError,
    IncommensurateError,
    Level,
    MorsePair,
    PhysConfig,
    QuadratureError,
    Spectrum,
    SquareWell,
)
from .numerics import integrate

L_MAX = 10_000


@dataclass(frozen=True)
class PacketComponent:
    amplitude: complex
    energy: float
    level: Optional[Level] = None
    wavefunction: Optional[Callable[[float], float]] = None


@dataclass(frozen=True)
class WavePacket:
    """Normalised superposition of stationary states.

    ``base_energy`` is the reference ``E_0`` of the phases; it defaults to
    the lowest component energy.
    """

    components: tuple[PacketComponent, ...]
    base_energy: float
    phys: PhysConfig = DEFAULT_PHYS

    def __post_init__(self):
        if not self.components:
            raise DomainError("a packet needs at least one component")
        w = sum(abs(c.amplitude) ** 2 for c in self.components)
        if abs(w - 1.0) > 1e-12:
            raise DomainError(f"amplitudes must satisfy sum |g|^2 = 1 (got {w!r})")
        e = self.energies
        if np.any(np.diff(e) <= 0):
            raise DomainError("packet energies must be strictly ascending")

    @property
    def energies(self) -> np.ndarray:
        return np.array([c.energy for c in self.components])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([complex(c.amplitude) for c in self.components])

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def energy_range(self) -> float:
        e = self.energies
        return float(e[-1] - e[0])

    @property
    def has_wavefunctions(self) -> bool:
        return all(c.wavefunction is not None for c in self.components)


def make_packet(
    energies: Sequence[float],
    amplitudes: Optional[Sequence[complex]] = None,
    wavefunctions: Optional[Sequence[Callable]] = None,
    levels: Optional[Sequence[Level]] = None,
    phys: PhysConfig = DEFAULT_PHYS,
    base_energy: Optional[float] = None,
) -> WavePacket:
    """Build a packet, normalising the amplitudes (equal weights by default)."""
    n = len(energies)
    g = np.ones(n, dtype=complex) if amplitudes is None else np.asarray(amplitudes, dtype=complex)
    if g.shape != (n,):
        raise DomainError("one amplitude per energy is required")
    norm = math.sqrt(float(np.sum(np.abs(g) ** 2)))
    if norm == 0:
        raise DomainError("amplitudes are all zero")
    g = g / norm
    wfs = list(wavefunctions) if wavefunctions is not None else [None] * n
    lvs = list(levels) if levels is not None else [None] * n
    comps = tuple(
        PacketComponent(complex(g[i]), float(energies[i]), lvs[i], wfs[i]) for i in range(n)
    )
    e0 = float(min(energies)) if base_energy is None else float(base_energy)
    return WavePacket(comps, e0, phys)


def packet_from_spectrum(spectrum: Spectrum, indices=None, amplitudes=None, phys=None) -> WavePacket:
    """Packet over selected levels of a spectrum (all of them by default)."""
    idx = list(range(len(spectrum))) if indices is None else list(indices)
    levels = [spectrum[i] for i in idx]
    if phys is None:
        phys = getattr(spectrum.family, "phys", DEFAULT_PHYS)
    return make_packet([lv.energy for lv in levels], amplitudes, levels=levels, phys=phys)


# --------------------------------------------------------------------------
# commensurability


@dataclass(frozen=True)
class CommensurabilityReport:
    delta: Optional[float]
    l_values: Optional[tuple[int, ...]]
    period: Optional[float]
    residual: float


def _best_rational(r: float, tol: float, q_max: int) -> Optional[Fraction]:
    """First continued-fraction convergent ``p/q`` with ``|r - p/q| <= tol``."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    x = r
    for _ in range(64):
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > q_max:
            return None
        if abs(r - h1 / k1) <= tol:
            return Fraction(h1, k1)
        frac = x - a
        if frac <= 0:
            return None
        x = 1.0 / frac
    return None


def commensurate_delta(
    spectrum,
    tol: Optional[float] = None,
    l_max: int = L_MAX,
    hbar: Optional[float] = None,
) -> CommensurabilityReport:
    """Largest common divisor ``Delta`` of the spacings ``E_n - E_0``.

    Each spacing is compared with the smallest non-zero spacing ``s`` through
    the continued-fraction expansion of their ratio. The first convergent
    ``p/q`` that reproduces the spacing within ``tol`` fixes how finely ``s``
    has to be divided; ``Delta = s / lcm(q)``. The divisor is rejected if any
    ``l_n`` exceeds ``l_max`` or ``Delta < 10 tol``.

    ``spectrum`` may be a :class:`Spectrum` or a sequence of energies.
    ``tol`` defaults to ``1e-9`` times the energy range.
    """
    if isinstance(spectrum, Spectrum):
        energies = np.array(spectrum.energies, dtype=float)
        if hbar is None:
            hbar = getattr(spectrum.family, "phys", DEFAULT_PHYS).hbar
    else:
        energies = np.sort(np.asarray(spectrum, dtype=float))
    hbar = 1.0 if hbar is None else hbar
    if energies.size < 2:
        raise DomainError("commensurate_delta needs at least two levels")
    spacings = energies - energies[0]
    e_range = float(spacings[-1])
    if tol is None:
        tol = 1e-9 * e_range
    if tol <= 0:
        raise DomainError("tol must be positive")
    positive = spacings[spacings > tol]
    if positive.size == 0:
        return CommensurabilityReport(None, None, None, e_range)
    s = float(positive.min())
    q_lcm = 1
    for sp in positive:
        frac = _best_rational(sp / s, tol / s, l_max)
        if frac is None:
            return CommensurabilityReport(None, None, None, math.nan)
        q_lcm = q_lcm * frac.denominator // math.gcd(q_lcm, frac.denominator)
        if q_lcm > l_max:
            return CommensurabilityReport(None, None, None, math.nan)
    delta = s / q_lcm
    ls = np.rint(spacings / delta).astype(int)
    residual = float(np.max(np.abs(spacings - ls * delta)))
    if delta < 10 * tol or int(ls.max()) > l_max or residual > tol:
        return CommensurabilityReport(None, None, None, residual)
    return CommensurabilityReport(delta, tuple(int(v) for v in ls), 2 * math.pi * hbar / delta, residual)


def poincare_period(report: CommensurabilityReport, hbar: float = 1.0) -> float:
    """``T = 2 pi hbar / Delta``."""
    if report.delta is None:
        raise IncommensurateError("spectrum has no common divisor; use quasi_cycle_search")
    return 2 * math.pi * hbar / report.delta


# --------------------------------------------------------------------------
# autocorrelation and quasi-cycles


def autocorrelation(packet: WavePacket, t):
    """``<psi(0)|psi(t)> = sum |g_n|^2 exp(-i (E_n - E_0) t / hbar)``; vectorised in ``t``."""
    t_arr = np.asarray(t, dtype=float)
    w = (packet.energies - packet.base_energy) / packet.phys.hbar
    out = np.exp(-1j * np.multiply.outer(t_arr, w)) @ packet.weights
    return complex(out) if out.ndim == 0 else out


def _scan_step(packet: WavePacket) -> float:
    # the fastest relative phase advances pi/10 per step
    rng = packet.energy_range
    if rng <= 0:
        raise DomainError("packet has a single energy; it never leaves its initial state")
    return math.pi * packet.phys.hbar / (10.0 * rng)


def quasi_cycle_search(packet: WavePacket, fidelity: float, t_max: float) -> Optional[float]:
    """First return of ``|A(t)|`` to at least ``fidelity``.

    ``|A|`` starts at 1, so the initial stretch with ``|A| >= fidelity`` is
    skipped; the result is the first up-crossing after ``|A|`` has dropped
    below ``fidelity``. Peaks that fall between grid samples are caught by
    maximising around each sampled local maximum.
    """
    if not 0 < fidelity < 1:
        raise DomainError("fidelity must lie in (0, 1)")
    if t_max <= 0:
        raise DomainError("t_max must be positive")
    h = _scan_step(packet)
    n = max(2, int(math.ceil(t_max / h)) + 1)
    t = np.linspace(0.0, t_max, n)
    a = np.abs(autocorrelation(packet, t))

    def g(x):
        return abs(autocorrelation(packet, x)) - fidelity

    below = np.nonzero(a < fidelity)[0]
    if below.size == 0:
        return None
    i = int(below[0])
    # a sampled peak can miss the fidelity by roughly the curvature over one step
    margin = 0.1 * (1.0 - fidelity) + 0.02
    while i < n - 1:
        if a[i + 1] >= fidelity:
            return float(_spo.brentq(g, t[i], t[i + 1], xtol=1e-14 * max(1.0, t[i + 1]), rtol=1e-15))
        if i + 2 < n and a[i + 1] >= a[i] and a[i + 1] >= a[i + 2] and a[i + 1] > fidelity - margin:
            res = _spo.minimize_scalar(
                lambda x: -abs(autocorrelation(packet, x)),
                bounds=(t[i], t[i + 2]),
                method="bounded",
                options={"xatol": 1e-13 * max(1.0, t[i + 2])},
            )
            if -res.fun >= fidelity:
                return float(_spo.brentq(g, t[i], res.x, xtol=1e-14 * max(1.0, res.x), rtol=1e-15))
        i += 1
    return None


# --------------------------------------------------------------------------
# well occupation


@dataclass(frozen=True)
class OccupationModel:
    """Overlap matrices ``O_nm = int phi_n phi_m dx`` on each side of ``x_split``."""

    packet: WavePacket
    x_split: float
    left: np.ndarray
    right: np.ndarray

    def _side(self, side: str) -> np.ndarray:
        if side == "left":
            return self.left
        if side == "right":
            return self.right
        raise DomainError(f"side must be 'left' or 'right', not {side!r}")

    def probability(self, side: str, t):
        """``int_side |psi(x, t)|^2 dx``; vectorised in ``t``."""
        O = self._side(side)
        t_arr = np.asarray(t, dtype=float)
        p = self.packet
        c = p.amplitudes[None, :] * np.exp(
            -1j * np.multiply.outer(t_arr.ravel(), p.energies - p.base_energy) / p.phys.hbar
        )
        val = np.einsum("tn,nm,tm->t", c.conj(), O, c).real.reshape(t_arr.shape)
        return float(val) if val.ndim == 0 else val

    def derivative(self, side: str, t):
        """``d/dt`` of :meth:`probability`, from the closed form."""
        O = self._side(side)
        t_arr = np.asarray(t, dtype=float)
        p = self.packet
        w = (p.energies - p.base_energy) / p.phys.hbar
        c = p.amplitudes[None, :] * np.exp(-1j * np.multiply.outer(t_arr.ravel(), w))
        dc = -1j * w[None, :] * c
        val = 2.0 * np.einsum("tn,nm,tm->t", c.conj(), O, dc).real.reshape(t_arr.shape)
        return float(val) if val.ndim == 0 else val


def _breakpoints(spec) -> list[float]:
    if isinstance(spec, SquareWell):
        return [-spec.c, spec.a]
    if isinstance(spec, MorsePair):
        return [-spec.c, 0.0, spec.a]
    return []


def occupation_model(
    packet: WavePacket,
    x_split: float = 0.0,
    domain: Optional[tuple[float, float]] = None,
    points: Optional[Sequence[float]] = None,
    tol: float = 1e-11,
) -> OccupationModel:
    """Compute the overlap matrices by quadrature.

    ``domain`` and the quadrature breakpoints default to those of the
    potential family the first component's level belongs to.
    """
    if not packet.has_wavefunctions:
        raise DomainError("well occupation needs a spatial wavefunction for every component")
    spec = None
    for c in packet.components:
        s = getattr(c.wavefunction, "spec", None)
        if s is not None:
            spec = s
            break
    if domain is None:
        domain = getattr(spec, "domain", None)
        if domain is None:
            raise DomainError("a finite domain is required")
    lo, hi = domain
    if not lo < x_split < hi:
        raise DomainError("x_split must lie inside the domain")
    brk = list(points) if points is not None else _breakpoints(spec)
    phis = [c.wavefunction for c in packet.components]
    n = len(phis)
    out = {}
    for side, (a, b) in (("left", (lo, x_split)), ("right", (x_split, hi))):
        pts = [p for p in brk if a < p < b] or None
        O = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                try:
                    v = integrate(
                        lambda x: float(phis[i](x)) * float(phis[j](x)), a, b,
                        tol=tol, points=pts, limit=1000, rel_tol=1e-12,
                    )
                except ConvergenceError as exc:
                    raise QuadratureError(str(exc)) from exc
                O[i, j] = O[j, i] = v
        out[side] = O
    return OccupationModel(packet, float(x_split), out["left"], out["right"])


def well_occupation(packet: WavePacket, side: str, t, x_split: float = 0.0, **kw):
    """Probability of finding the particle on ``side`` of ``x_split`` at time ``t``."""
    return occupation_model(packet, x_split, **kw).probability(side, t)


def measured_period(
    model: OccupationModel,
    t_max: float,
    side: str = "left",
    band: float = 1e-3,
) -> Optional[float]:
    """First return of the occupation to within ``band`` of its initial value.

    The return is located at an extremum (a root of the analytic ``dP/dt``)
    so the reading is not biased by the width of the band.
    """
    p0 = model.probability(side, 0.0)
    h = _scan_step(model.packet)
    n = max(3, int(math.ceil(t_max / h)) + 1)
    t = np.linspace(0.0, t_max, n)
    p = model.probability(side, t)
    dp = model.derivative(side, t)
    left_band = np.nonzero(np.abs(p - p0) > band)[0]
    if left_band.size == 0:
        return None
    start = int(left_band[0])

    def f(x):
        return model.derivative(side, x)

    for i in range(start, n - 1):
        if dp[i] == 0.0:
            root = t[i]
        elif dp[i] * dp[i + 1] < 0:
            root = _spo.brentq(f, t[i], t[i + 1], xtol=1e-15 * max(1.0, t[i + 1]), rtol=1e-15)
        else:
            continue
        if abs(model.probability(side, root) - p0) <= band:
            return float(root)
    return None


# --------------------------------------------------------------------------
# doublet packets


def _wavefunction_for(spec, level: Level):
    if isinstance(spec, SquareWell):
        from .squarewell import wavefunction

        return wavefunction(spec, level)
    if isinstance(spec, MorsePair):
        from .morse import wavefunction

        return wavefunction(spec, level)
    raise DomainError(f"no spatial wavefunctions for {type(spec).__name__}")


def doublet_packet(spec, spectrum: Spectrum, index: int = 0, x_split: float = 0.0) -> WavePacket:
    """``(phi_a + s phi_b) / sqrt 2`` for levels ``2 index`` and ``2 index + 1``.

    The relative sign ``s`` is chosen so the packet starts in the left well.
    """
    i, j = 2 * index, 2 * index + 1
    if j >= len(spectrum):
        raise DomainError(f"spectrum has no doublet {index}")
    la, lb = spectrum[i], spectrum[j]
    fa, fb = _wavefunction_for(spec, la), _wavefunction_for(spec, lb)
    lo = spec.domain[0]
    brk = [p for p in _breakpoints(spec) if lo < p < x_split] or None
    cross = integrate(lambda x: float(fa(x)) * float(fb(x)), lo, x_split, tol=1e-12, points=brk, limit=1000)
    sign = 1.0 if cross >= 0 else -1.0
    return make_packet(
        [la.energy, lb.energy], [1.0, sign], wavefunctions=[fa, fb], levels=[la, lb], phys=spec.phys
    )
