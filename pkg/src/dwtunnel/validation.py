"""End-to-end cross-validation of every solver.

Each check compares an analytic result with an independent route: the
finite-difference oracle, a quadrature, a closed-form identity or a
simulated time series. :func:`run_validation` runs them all and returns one
:class:`CheckResult` per row; the ``validate`` command prints the table.

``perturb_u0`` shifts the barrier height handed to the oracle in the
square-well rows. Any non-trivial shift must make those rows fail, which
shows the comparison is sensitive (a negative control).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional

import numpy as np

from . import dynamics, invsq, morse, oracle, squarewell, wkbpara
from .core import InvSquare, MorsePair, ParabolicPair, PhysConfig, SquareWell
from .numerics import erf, hermite, integrate, kummer_m_scaled

FAMILIES = ("square", "morse", "invsq", "parabolic", "wkb", "dynamics", "special")


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    tags: tuple[str, ...]
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass(frozen=True)
class Settings:
    seed: int = 0
    perturb_u0: float = 0.0


def _oracle_spec(spec: SquareWell, s: Settings) -> SquareWell:
    return replace(spec, U0=spec.U0 + s.perturb_u0) if s.perturb_u0 else spec


# --------------------------------------------------------------------------
# 1: flux conservation


def check_flux(s: Settings):
    rng = np.random.default_rng(s.seed)
    worst = 0.0
    for _ in range(1000):
        d, c = rng.uniform(1.0, 3.0), rng.uniform(0.0, 1.0)
        a = rng.uniform(0.0, 1.0)
        b = a + rng.uniform(0.5, 2.0)
        if c + a == 0:
            a = 0.1
        U0 = rng.uniform(0.5, 50.0)
        W0 = rng.uniform(0.0, 5.0) if rng.random() < 0.5 else 0.0
        spec = SquareWell(d, c, a, b, U0, W0)
        E = rng.uniform(1e-3, 1 - 1e-3) * U0
        sol = squarewell.transmission(spec, E)
        worst = max(worst, abs(sol.D + sol.R - 1.0))
    return worst <= 1e-12, f"max |D + R - 1| = {worst:.2e} over 1000 configurations"


# --------------------------------------------------------------------------
# 2: square well against the oracle

SQUARE_SETS = (
    SquareWell(2.0, 1.0, 1.0, 2.0, 5.0),
    SquareWell(1.5, 0.5, 0.5, 1.5, 20.0),
    SquareWell(2.5, 1.0, 1.0, 2.0, 8.0),
    SquareWell(2.0, 1.0, 0.5, 2.0, 5.0, 0.5),
)


def _oracle_in_window(spec: SquareWell, n: int, s: Settings):
    ospec = _oracle_spec(spec, s)
    res = oracle.solve_spec(ospec, n + 6)
    return [e for e in res.energies if 0.0 < e < spec.U0]


def check_square_oracle(s: Settings):
    worst, lines = 0.0, []
    ok = True
    for spec in SQUARE_SETS:
        spectra = [squarewell.solve_spectrum_asymmetric(spec)]
        if spec.is_symmetric:
            spectra.append(squarewell.solve_spectrum_symmetric(spec))
        ref = _oracle_in_window(spec, len(spectra[0]), s)
        for sp in spectra:
            e = sp.energies
            if len(ref) < len(e):
                ok = False
                lines.append(f"oracle found {len(ref)} levels, solver {len(e)}")
                continue
            dev = max(abs(x - y) for x, y in zip(e, ref))
            worst = max(worst, dev)
    ok = ok and worst <= 1e-4
    return ok, f"max |E - E_oracle| = {worst:.2e} over {len(SQUARE_SETS)} sets" + ("; " + "; ".join(lines) if lines else "")


# --------------------------------------------------------------------------
# 3: limits


def check_zero_width(s: Settings):
    b = 2.0
    spec = SquareWell(b, 0.0, 0.0, b, 60.0)
    sp = squarewell.solve_spectrum_symmetric(spec)
    k = np.sqrt(2 * spec.phys.mass * np.array(sp.energies)) / spec.phys.hbar
    ref = math.pi * np.arange(1, len(k) + 1) / (2 * b)
    dev = float(np.max(np.abs(k - ref)))
    return dev <= 1e-6, f"max |k_n - pi n / (2 b)| = {dev:.2e} for {len(k)} levels"


def check_high_barrier(s: Settings):
    spec = SquareWell(2.0, 1.0, 1.0, 2.0, 1e4)
    sp = squarewell.solve_spectrum_symmetric(spec)
    L = spec.right_width
    worst_k, worst_e, split = 0.0, 0.0, 0.0
    for j in range(2):
        e1, e2 = sp[2 * j].energy, sp[2 * j + 1].energy
        box = (math.pi * (j + 1) * spec.phys.hbar / L) ** 2 / (2 * spec.phys.mass)
        for e in (e1, e2):
            worst_k = max(worst_k, abs(math.sqrt(e / box) - 1))
            worst_e = max(worst_e, abs(e / box - 1))
        split = max(split, (e2 - e1) / e1)
    ok = worst_k <= 0.01 and split <= 1e-12
    return ok, (
        f"wavenumbers within {worst_k:.2%} of the isolated box (energies {worst_e:.2%}); "
        f"relative splitting {split:.1e}"
    )


def check_invsq_harmonic(s: Settings):
    worst = 0.0
    for w in (1.0, 0.7, 2.5):
        spec = InvSquare(w, 0.0)
        e = np.array(invsq.spectrum_exact(spec, 10).energies)
        ref = spec.phys.hbar * w * (np.arange(len(e)) + 0.5)
        worst = max(worst, float(np.max(np.abs(e - ref) / ref)))
    return worst <= 4 * np.finfo(float).eps, f"max relative deviation from hbar w (n + 1/2) = {worst:.1e}"


# --------------------------------------------------------------------------
# 4: period identities


def check_t_delta(s: Settings):
    worst = 0.0
    cases = []
    for hb in (1.0, 0.5):
        phys = PhysConfig(hbar=hb)
        cases.append((dynamics.commensurate_delta([1.0, 2.0, 4.0], hbar=hb), hb))
        for B in (0.0, 0.8):
            sp = invsq.physical_spectrum(InvSquare(1.3, B, phys), 6)
            cases.append((dynamics.commensurate_delta(sp), hb))
        lin = squarewell.linearized_spectrum(SquareWell(2.0, 1.0, 1.0, 2.0, 50.0, phys=phys))
        worst = max(worst, abs(lin.period * lin.delta / (2 * math.pi * hb) - 1))
    for rep, hb in cases:
        if rep.delta is None:
            return False, "a commensurate spectrum was reported incommensurate"
        worst = max(worst, abs(rep.period * rep.delta / (2 * math.pi * hb) - 1))
    return worst <= 1e-12, f"max |T Delta / (2 pi hbar) - 1| = {worst:.1e} over {len(cases) + 2} spectra"


def check_invsq_period(s: Settings):
    # one ladder (the physical spectrum for B > 0, one parity sector at B = 0)
    w = 1.7
    worst = 0.0
    for B in (0.0, 0.3, 1.0, 2.5):
        ladder = [invsq.level_energy(InvSquare(w, B), n, "+") for n in range(9)]
        rep = dynamics.commensurate_delta(ladder)
        if rep.period is None:
            return False, f"no common divisor found at B = {B}"
        worst = max(worst, abs(rep.period / (math.pi / w) - 1))
    return worst <= 1e-12, f"max |T w / pi - 1| = {worst:.1e} over B in {{0, 0.3, 1, 2.5}}"


def check_limiting_period(s: Settings):
    spec = SquareWell(2.0, 1.0, 1.0, 2.0, 5.0)
    T = squarewell.limiting_period(spec)
    dev = abs(T - 4 / math.pi)
    return dev <= 1e-12, f"T = {T!r}, |T - 4/pi| = {dev:.1e}"


# --------------------------------------------------------------------------
# 5: dynamics


def check_doublet_period(s: Settings):
    worst = 0.0
    for spec in (SquareWell(2.0, 1.0, 1.0, 2.0, 5.0), SquareWell(1.5, 0.5, 0.5, 1.5, 20.0)):
        sp = squarewell.solve_spectrum_symmetric(spec)
        pk = dynamics.doublet_packet(spec, sp, 0)
        model = dynamics.occupation_model(pk)
        T = 2 * math.pi * spec.phys.hbar / (sp[1].energy - sp[0].energy)
        got = dynamics.measured_period(model, 1.5 * T)
        if got is None:
            return False, "no return of the left-well occupation found"
        worst = max(worst, abs(got / T - 1))
    return worst <= 1e-6, f"max |T_measured / (2 pi hbar / dE) - 1| = {worst:.1e}"


def check_revival(s: Settings):
    worst = 0.0
    packets = [dynamics.make_packet([1.0, 2.0, 4.0])]
    for B in (0.0, 0.6):
        spec = InvSquare(1.3, B)
        packets.append(dynamics.packet_from_spectrum(invsq.physical_spectrum(spec, 8)))
    for pk in packets:
        rep = dynamics.commensurate_delta(pk.energies, hbar=pk.phys.hbar)
        a = abs(dynamics.autocorrelation(pk, rep.period))
        worst = max(worst, 1 - a)
    return worst <= 1e-10, f"min |A(T)| = 1 - {worst:.1e}"


# --------------------------------------------------------------------------
# 6: WKB


def check_wkb_identity(s: Settings):
    ctxs = []
    sq = SquareWell(2.0, 1.0, 1.0, 2.0, 20.0)
    ctxs.append(wkbpara.wkb_action(sq, squarewell.solve_spectrum_symmetric(sq)[0].energy))
    ms = MorsePair(20, 20, 2, 2, 2, 2, 6, 6)
    ctxs.append(wkbpara.wkb_action(ms, morse.solve_oscillation_spectrum(ms)[2].energy))
    for a in (2.5, 3.0):
        ctxs.append(wkbpara.parabolic_context(ParabolicPair(1.0, a), 0))
    worst = 0.0
    for c in ctxs:
        D = wkbpara.wkb_transmission(c)
        ref = c.w_classical * c.hbar / math.pi * math.sqrt(D)
        worst = max(worst, abs(wkbpara.wkb_splitting(c) / ref - 1))
    return worst <= 1e-14, f"max |dE / ((w hbar / pi) sqrt D) - 1| = {worst:.1e} over {len(ctxs)} contexts"


def check_square_barrier_wkb(s: Settings):
    # thick-barrier limit of the exact D is 16 x (1 - x) exp(-2 S), x = E / U0;
    # the WKB ratio stays inside [1/4, 4] for 0.016 < x < 0.984
    lo, hi, n = math.inf, 0.0, 0
    for U0 in (5.0, 20.0, 50.0):
        for width in (1.0, 2.0):
            spec = SquareWell(2.0, width / 2, width / 2, 2.0, U0)
            for x in (0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95):
                ctx = wkbpara.wkb_action(spec, x * U0)
                if ctx.action < 3:
                    continue
                r = wkbpara.wkb_transmission(ctx) / squarewell.transmission(spec, x * U0).D
                lo, hi, n = min(lo, r), max(hi, r), n + 1
    return 0.25 <= lo and hi <= 4, f"D_WKB / D_exact in [{lo:.3f}, {hi:.3f}] over {n} barriers with action >= 3, 0.05 <= E/U0 <= 0.95"


def check_parabolic_oracle(s: Settings):
    lo, hi = math.inf, 0.0
    for a in (2.5, 3.0, 3.5):
        spec = ParabolicPair(1.0, a)
        lev = wkbpara.parabolic_splitting(spec, 0)
        ref = oracle.solve_spec(spec, 2, n_points=8000).energies
        r = lev.gap / (ref[1] - ref[0])
        lo, hi = min(lo, r), max(hi, r)
    return 0.7 <= lo and hi <= 1.4, f"(E+ - E-) / oracle gap in [{lo:.4f}, {hi:.4f}] for alpha a in {{2.5, 3, 3.5}}"


# --------------------------------------------------------------------------
# 7: Morse


def check_morse_oracle(s: Settings):
    spec = MorsePair(20, 20, 2, 2, 2, 2, 6, 6)
    sp = morse.solve_oscillation_spectrum(spec)
    ref = oracle.solve_spec(spec, len(sp)).energies
    worst = max(abs(e / r - 1) for e, r in zip(sp.energies, ref))
    return worst <= 1e-3, f"{len(sp)} levels, max relative deviation {worst:.1e}"


def check_morse_root_sets(s: Settings):
    matched, reported, worst = 0, [], 0.0
    for spec in (MorsePair(20, 20, 2, 2, 2, 2, 6, 6), MorsePair(30, 5, 2, 2, 2, 2, 6, 6)):
        for r in morse.compare_root_sets(spec):
            if r.ratio_root is not None and abs(r.shift) <= 1e-8 * max(1.0, abs(r.energy)):
                matched += 1
                worst = max(worst, abs(r.shift))
            else:
                reported.append(f"E={r.energy:.10g}: {r.note or 'shift %.1e' % r.shift}")
    # discrepancies pass only when explained by a ratio-form pole
    ok = all("pole" in line for line in reported)
    detail = f"{matched} roots agree within {worst:.1e}"
    if reported:
        detail += "; reported: " + "; ".join(reported)
    return ok, detail


# --------------------------------------------------------------------------
# 8: special functions


def check_kummer_reflection(s: Settings):
    rng = np.random.default_rng(s.seed + 1)
    worst = 0.0
    for _ in range(1000):
        a, c, xi = rng.uniform(-5, 5), rng.uniform(0.5, 6), rng.uniform(-5, 5)
        d = kummer_m_scaled(a, c, xi, "direct").value
        r = kummer_m_scaled(a, c, xi, "reflected").value
        worst = max(worst, abs(d - r) / max(1.0, abs(d)))
    return worst <= 1e-9, f"max |M(a,c;x) - e^x M(c-a,c;-x)| / max(1, |M|) = {worst:.1e}"


def check_m121(s: Settings):
    v = kummer_m_scaled(1.0, 2.0, 1.0).value
    dev = abs(v - (math.e - 1))
    return dev <= 1e-12, f"|M(1,2,1) - (e - 1)| = {dev:.1e}"


def check_erf(s: Settings):
    q = 2 / math.sqrt(math.pi) * integrate(lambda t: math.exp(-t * t), 0.0, 1.0, 1e-14, rel_tol=1e-15)
    dev = abs(erf(1.0) - q)
    return dev <= 1e-12, f"|erf(1) - quadrature| = {dev:.1e}"


def check_hermite_parity(s: Settings):
    worst = 0.0
    for n in range(21):
        for x in (0.3, 1.1, 2.7, 4.0):
            h = hermite(n, x)
            worst = max(worst, abs(hermite(n, -x) - (-1) ** n * h) / max(1.0, abs(h)))
    return worst <= 1e-12, f"max |H_n(-x) - (-1)^n H_n(x)| (relative) = {worst:.1e} for n <= 20"


# --------------------------------------------------------------------------
# 9: parabolic normalisation


def check_parabolic_norm(s: Settings):
    worst = 0.0
    for a in (1.5, 2.0, 3.0):
        spec = ParabolicPair(1.0, a)
        for n in range(6):
            worst = max(worst, abs(wkbpara.normalization_sq(spec, n) / wkbpara.normalization_quadrature(spec, n) - 1))
    return worst <= 1e-8, f"max |A_n^2 / quadrature - 1| = {worst:.1e} for n <= 5, a in {{1.5, 2, 3}}"


# --------------------------------------------------------------------------

CHECKS: tuple[tuple[int, str, tuple[str, ...], Callable[[Settings], tuple[bool, str]]], ...] = (
    (1, "flux conservation D + R = 1", ("square",), check_flux),
    (2, "square-well spectra vs oracle", ("square",), check_square_oracle),
    (3, "zero-width barrier -> single box", ("square",), check_zero_width),
    (3, "U0 = 1e4 -> isolated boxes", ("square",), check_high_barrier),
    (3, "InvSquare B = 0 -> harmonic ladder", ("invsq",), check_invsq_harmonic),
    (4, "T Delta = 2 pi hbar", ("dynamics", "invsq", "square"), check_t_delta),
    (4, "InvSquare T = pi / w for any B", ("invsq",), check_invsq_period),
    (4, "square-well limiting period 4/pi", ("square",), check_limiting_period),
    (5, "doublet occupation period", ("dynamics", "square"), check_doublet_period),
    (5, "commensurate revival at T", ("dynamics", "invsq"), check_revival),
    (6, "WKB splitting vs transmission identity", ("wkb",), check_wkb_identity),
    (6, "WKB vs exact square-barrier D", ("wkb", "square"), check_square_barrier_wkb),
    (6, "parabolic splitting vs oracle", ("wkb", "parabolic"), check_parabolic_oracle),
    (7, "Morse spectrum vs oracle", ("morse",), check_morse_oracle),
    (7, "Morse determinant vs ratio-form roots", ("morse",), check_morse_root_sets),
    (8, "Kummer reflection identity", ("special",), check_kummer_reflection),
    (8, "M(1, 2, 1) = e - 1", ("special",), check_m121),
    (8, "erf(1) vs quadrature", ("special",), check_erf),
    (8, "Hermite parity", ("special",), check_hermite_parity),
    (9, "parabolic A_n^2 vs quadrature", ("parabolic",), check_parabolic_norm),
)


def _selected(criterion: int, tags: tuple[str, ...], only: Optional[set[str]]) -> bool:
    if not only:
        return True
    return str(criterion) in only or any(t in only for t in tags)


def run_validation(
    only: Optional[Iterable[str]] = None,
    seed: int = 0,
    perturb_u0: float = 0.0,
) -> list[CheckResult]:
    """Run the selected checks; ``only`` holds family names or criterion numbers."""
    sel = {str(o).strip() for o in only} if only else None
    if sel:
        unknown = {o for o in sel if o not in FAMILIES and not o.isdigit()}
        if unknown:
            raise ValueError(f"unknown validation filter(s): {', '.join(sorted(unknown))}")
    settings = Settings(seed, perturb_u0)
    out = []
    for crit, name, tags, fn in CHECKS:
        if not _selected(crit, tags, sel):
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn(settings)
        except Exception as exc:  # a crash is a failed row, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(crit, name, tags, bool(ok), detail, time.perf_counter() - t0))
    return out


def format_table(results: list[CheckResult]) -> str:
    width = max((len(r.name) for r in results), default=10)
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.criterion:>2}  {r.name:<{width}}  {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
