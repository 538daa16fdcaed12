"""Command-line front end: ``solve``, ``sweep``, ``simulate`` and ``validate``.

``solve`` prints a JSON document (``schema_version`` 1), ``sweep`` and
``simulate`` print CSV with a header row, numbers at 17 significant digits.
Exit codes: 0 success, 1 validation failure, 2 bad parameters, 3 solver
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import fields
from typing import Optional

import numpy as np

from . import dynamics, invsq, morse, oracle, squarewell, wkbpara
from .core import (
    DomainError,
    DwTunnelError,
    InvSquare,
    MorsePair,
    ParabolicPair,
    PhysConfig,
    SquareWell,
)

SCHEMA_VERSION = 1

FAMILY_TYPES = {
    "square": SquareWell,
    "morse": MorsePair,
    "invsq": InvSquare,
    "parabolic": ParabolicPair,
}
PHYS_KEYS = ("hbar", "mass", "wkb_prefactor")
EMIT_CHOICES = ("D_of_T", "D_of_delta", "splitting", "spectrum", "residual")


class ParameterError(Exception):
    """Bad command-line input; maps to exit code 2."""


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _json_float(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


# --------------------------------------------------------------------------
# parameter parsing


def parse_params(text: str) -> dict[str, float]:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ParameterError(f"parameter {item!r} is not of the form key=value")
        key, val = (s.strip() for s in item.split("=", 1))
        try:
            out[key] = float(val)
        except ValueError:
            raise ParameterError(f"parameter {key} has non-numeric value {val!r}") from None
    return out


def build_spec(family: str, params: dict[str, float]):
    if family not in FAMILY_TYPES:
        raise ParameterError(f"unknown potential {family!r}; choose from {', '.join(FAMILY_TYPES)}")
    cls = FAMILY_TYPES[family]
    phys_kw = {k: params[k] for k in PHYS_KEYS if k in params}
    names = [f.name for f in fields(cls) if f.name != "phys"]
    required = [f.name for f in fields(cls) if f.name != "phys" and f.default is f.default_factory]
    unknown = set(params) - set(names) - set(PHYS_KEYS)
    if unknown:
        raise ParameterError(f"unknown parameter(s) for {family}: {', '.join(sorted(unknown))}")
    missing = [n for n in required if n not in params]
    if missing:
        raise ParameterError(f"missing parameter(s) for {family}: {', '.join(missing)}")
    try:
        phys = PhysConfig(**phys_kw)
        return cls(**{k: params[k] for k in names if k in params}, phys=phys)
    except DomainError as exc:
        raise ParameterError(str(exc)) from None


def _spec_params(spec) -> dict:
    d = {f.name: getattr(spec, f.name) for f in fields(spec) if f.name != "phys"}
    d.update({k: getattr(spec.phys, k) for k in PHYS_KEYS})
    return d


# --------------------------------------------------------------------------
# solving


def solve_levels(spec, levels: Optional[int] = None):
    """Spectrum for any family; ``levels`` caps the count (or sets ``n_max``)."""
    if isinstance(spec, SquareWell):
        sp = squarewell.solve_spectrum_symmetric(spec) if spec.is_symmetric else squarewell.solve_spectrum_asymmetric(spec)
    elif isinstance(spec, MorsePair):
        sp = morse.solve_symmetric_parity(spec) if spec.is_symmetric else morse.solve_oscillation_spectrum(spec)
    elif isinstance(spec, InvSquare):
        n = 6 if levels is None else levels
        sp = invsq.physical_spectrum(spec, max(n - 1, 0))
    else:
        from .core import Level, Spectrum

        n = 3 if levels is None else levels
        lv = []
        for k in range(n):
            p = wkbpara.parabolic_splitting(spec, k)
            lv += [(p.E_minus, "even"), (p.E_plus, "odd")]
        lv.sort(key=lambda t: t[0])
        sp = Spectrum(tuple(Level(e, i, par, "both") for i, (e, par) in enumerate(lv)), spec)
    if levels is not None and len(sp) > levels and not isinstance(spec, ParabolicPair):
        from .core import Spectrum

        sp = Spectrum(sp.levels[:levels], sp.family, excluded=sp.excluded, notes=sp.notes)
    return sp


def _splittings(spec, sp) -> list[dict]:
    rows = []
    if isinstance(spec, ParabolicPair):
        for k in range(len(sp) // 2):
            p = wkbpara.parabolic_splitting(spec, k)
            row = {
                "n": k, "E_minus": p.E_minus, "E_plus": p.E_plus,
                "delta_E_n": p.delta_E_n, "gap": p.gap, "A_n_sq": p.A_n_sq,
            }
            try:
                row["wkb_gap"] = wkbpara.wkb_splitting(wkbpara.parabolic_context(spec, k))
            except DwTunnelError:
                row["wkb_gap"] = None
            rows.append(row)
        return rows
    if isinstance(spec, InvSquare):
        return [{"n": k, "E_minus": invsq.level_energy(spec, k, "-"), "E_plus": invsq.level_energy(spec, k, "+"),
                 "gap": invsq.splitting(spec)} for k in range(len(sp))]
    for j in range(len(sp) // 2):
        lo, hi = sp[2 * j].energy, sp[2 * j + 1].energy
        row = {"n": j, "E_minus": lo, "E_plus": hi, "gap": hi - lo}
        try:
            row["wkb_gap"] = wkbpara.wkb_splitting(wkbpara.wkb_action(spec, 0.5 * (lo + hi)))
        except (DwTunnelError, ValueError):
            row["wkb_gap"] = None
        rows.append(row)
    return rows


def _oracle_levels(spec, sp):
    if isinstance(spec, ParabolicPair):
        return oracle.solve_spec(spec, len(sp), n_points=8000).energies
    if isinstance(spec, SquareWell):
        ref = oracle.solve_spec(spec, len(sp) + 6).energies
        return [e for e in ref if 0.0 < e < spec.U0][: len(sp)]
    return oracle.solve_spec(spec, len(sp)).energies


def solve_document(spec, family: str, levels: Optional[int] = None, with_oracle: bool = False) -> dict:
    sp = solve_levels(spec, levels)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "potential": family,
        "params": _spec_params(spec),
        "spectrum": [
            {"index": lv.index, "energy": lv.energy, "parity": lv.parity, "well": lv.well} for lv in sp
        ],
        "excluded": [{"energy": lv.energy, "well": lv.well} for lv in sp.excluded],
        "notes": list(sp.notes),
    }
    if len(sp) >= 2:
        rep = dynamics.commensurate_delta(sp, hbar=spec.phys.hbar)
        doc["commensurability"] = {
            "delta": rep.delta, "l_values": list(rep.l_values) if rep.l_values else None,
            "period": rep.period, "residual": _json_float(rep.residual),
        }
    else:
        doc["commensurability"] = None
    if isinstance(spec, InvSquare):
        doc["ladder_period"] = invsq.period(spec)
    if isinstance(spec, SquareWell):
        table = []
        for lv in sp:
            if 0.0 < lv.energy < spec.U0:
                t = squarewell.transmission(spec, lv.energy)
                table.append({"energy": lv.energy, "D": t.D, "R": t.R})
        doc["transmission"] = table
    doc["splittings"] = _splittings(spec, sp)
    if with_oracle:
        ref = _oracle_levels(spec, sp)
        dev = [abs(a - b) for a, b in zip(sp.energies, ref)]
        for row, e, d in zip(doc["spectrum"], ref, dev):
            row["oracle_energy"] = e
            row["deviation"] = d
        doc["oracle_max_deviation"] = max(dev) if dev else None
    return doc


# --------------------------------------------------------------------------
# sweeps


def parse_vary(text: str) -> tuple[str, float, float, int]:
    parts = text.split(":")
    if len(parts) != 4:
        raise ParameterError("--vary must be name:lo:hi:steps")
    name = parts[0].strip()
    try:
        lo, hi, steps = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise ParameterError(f"bad --vary value {text!r}") from None
    if steps < 1:
        raise ParameterError("--vary steps must be >= 1")
    return name, lo, hi, steps


def _safe(f):
    try:
        return f()
    except (DwTunnelError, ValueError, ArithmeticError):
        return math.nan


def sweep_rows(family: str, params: dict, vary: str, emit: str, level: int = 0, levels: int = 4):
    name, lo, hi, steps = parse_vary(vary)
    grid = np.linspace(lo, hi, steps)
    if emit not in EMIT_CHOICES:
        raise ParameterError(f"unknown quantity {emit!r}")
    if emit in ("D_of_T", "D_of_delta"):
        spec = build_spec(family, params)
        expected = "T" if emit == "D_of_T" else "delta"
        if name != expected:
            raise ParameterError(f"{emit} sweeps vary {expected}")
        if isinstance(spec, SquareWell):
            fn = squarewell.d_of_period if emit == "D_of_T" else squarewell.d_of_delta
            return [name, "D"], [[x, _safe(lambda: fn(spec, level, x))] for x in grid]
        if isinstance(spec, InvSquare):
            dep = invsq.d_dependency(spec)
            fn = dep.of_period if emit == "D_of_T" else dep.of_delta
            return [name, "D_shape"], [[x, float(fn(x))] for x in grid]
        raise ParameterError(f"{emit} is available for square and invsq only")
    if emit == "residual":
        spec = build_spec(family, params)
        if isinstance(spec, SquareWell):
            if not spec.is_symmetric:
                raise ParameterError("residual curves need a symmetric square well")
            if name != "k":
                raise ParameterError("square-well residual sweeps vary k")
            header = ["k", "f1"]
            combos = [squarewell.level_branch(i) for i in range(levels)]
            header += [f"f2_{br}_{par}" for br, par in combos]
            rows = []
            for k in grid:
                row = [k, _safe(lambda: squarewell.f1(spec, k))]
                row += [_safe(lambda: squarewell.f2(spec, k, br, par)) for br, par in combos]
                rows.append(row)
            return header, rows
        if isinstance(spec, MorsePair):
            if name != "E":
                raise ParameterError("Morse residual sweeps vary E")
            return ["E", "residual"], [[E, _safe(lambda: morse.residual_oscillation(spec, E))] for E in grid]
        raise ParameterError("residual is available for square and morse only")
    # splitting and spectrum vary a potential parameter
    header = [name]
    rows = []
    for x in grid:
        p = dict(params)
        p[name] = float(x)
        spec = build_spec(family, p)
        if emit == "splitting":
            def gap():
                if isinstance(spec, ParabolicPair):
                    return wkbpara.parabolic_splitting(spec, level).gap
                if isinstance(spec, InvSquare):
                    return invsq.splitting(spec)
                sp = solve_levels(spec)
                return sp[2 * level + 1].energy - sp[2 * level].energy
            rows.append([x, _safe(gap)])
        else:
            try:
                e = solve_levels(spec, levels).energies
            except DwTunnelError:
                e = []
            rows.append([x] + [e[i] if i < len(e) else math.nan for i in range(levels)])
    if emit == "splitting":
        header.append("splitting")
    else:
        header += [f"E{i}" for i in range(levels)]
    return header, rows


def write_csv(header, rows, stream, footer=()):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) if not isinstance(v, str) else v for v in r])
    for key, val in footer:
        stream.write(f"# {key},{_fmt(val)}\n")


# --------------------------------------------------------------------------
# simulation


def _packet(spec, sp, text: str):
    kind, _, arg = text.partition(":")
    if kind == "doublet":
        j = int(arg or 0)
        if isinstance(spec, (SquareWell, MorsePair)):
            return dynamics.doublet_packet(spec, sp, j)
        return dynamics.packet_from_spectrum(sp, [2 * j, 2 * j + 1])
    if kind == "all":
        return dynamics.packet_from_spectrum(sp)
    if kind == "levels":
        idx = [int(v) for v in arg.split(";") if v.strip()] if arg else []
        if not idx:
            raise ParameterError("levels packet needs indices, e.g. levels:0;1;3")
        return dynamics.packet_from_spectrum(sp, idx)
    raise ParameterError(f"unknown packet {text!r}; use doublet:<j>, all or levels:<i;j;...>")


def simulate_rows(spec, packet_text: str, t_max: Optional[float], steps: int, levels: Optional[int] = None):
    sp = solve_levels(spec, levels)
    try:
        pk = _packet(spec, sp, packet_text)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, DwTunnelError):
            raise
        raise ParameterError(str(exc)) from None
    # spatial probabilities need normalised wavefunctions on a finite domain
    model = None
    if isinstance(spec, (SquareWell, MorsePair)):
        if not pk.has_wavefunctions:
            comps = [dynamics.PacketComponent(c.amplitude, c.energy, c.level, dynamics._wavefunction_for(spec, c.level))
                     for c in pk.components]
            pk = dynamics.WavePacket(tuple(comps), pk.base_energy, pk.phys)
        model = dynamics.occupation_model(pk)
    rep = dynamics.commensurate_delta(pk.energies, hbar=spec.phys.hbar) if len(pk.components) > 1 else None
    expected = rep.period if rep is not None else None
    if t_max is None:
        if expected is None:
            raise ParameterError("--t-max is required for an incommensurate packet")
        t_max = 2.0 * expected
    if steps < 2:
        raise ParameterError("--steps must be >= 2")
    t = np.linspace(0.0, t_max, steps)
    a = np.abs(dynamics.autocorrelation(pk, t))
    if model is not None:
        pl, pr = model.probability("left", t), model.probability("right", t)
    else:
        pl = pr = np.full_like(t, math.nan)
    rows = [[t[i], a[i], pl[i], pr[i]] for i in range(steps)]
    footer = [("poincare_period", expected)]
    if model is not None:
        footer.append(("measured_period", dynamics.measured_period(model, t_max)))
    return ["t", "abs_autocorrelation", "P_left", "P_right"], rows, footer


# --------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dwtunnel", description="Double-well tunnelling solvers")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--potential", required=True, choices=sorted(FAMILY_TYPES))
        sp.add_argument("--params", default="", help="comma-separated key=value list")
        sp.add_argument("--levels", type=int, default=None, help="number of levels (n_max + 1 for ladders)")

    s = sub.add_parser("solve", help="spectrum and derived tables as JSON")
    common(s)
    s.add_argument("--oracle", action="store_true", help="compare with the finite-difference oracle")

    s = sub.add_parser("sweep", help="parameter sweep as CSV")
    common(s)
    s.add_argument("--vary", required=True, help="name:lo:hi:steps")
    s.add_argument("--emit", required=True, choices=EMIT_CHOICES)
    s.add_argument("--level", type=int, default=0, help="level or doublet index")

    s = sub.add_parser("simulate", help="wave-packet time series as CSV")
    common(s)
    s.add_argument("--packet", default="doublet:0", help="doublet:<j>, all or levels:<i;j;...>")
    s.add_argument("--t-max", type=float, default=None)
    s.add_argument("--steps", type=int, default=201)

    s = sub.add_parser("validate", help="run the cross-validation suite")
    s.add_argument("--only", action="append", default=None, help="family name or criterion number (repeatable, comma lists allowed)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--perturb-u0", type=float, default=0.0, help="shift U0 in the oracle configs (negative control)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "validate":
            from .validation import format_table, run_validation

            only = [t for item in (args.only or []) for t in item.split(",") if t.strip()]
            try:
                results = run_validation(only or None, seed=args.seed, perturb_u0=args.perturb_u0)
            except ValueError as exc:
                raise ParameterError(str(exc)) from None
            out.write(format_table(results) + "\n")
            return 0 if results and all(r.passed for r in results) else 1
        if args.levels is not None and args.levels < 1:
            raise ParameterError("--levels must be >= 1")
        params = parse_params(args.params)
        if args.command == "solve":
            spec = build_spec(args.potential, params)
            doc = solve_document(spec, args.potential, args.levels, args.oracle)
            json.dump(doc, out, indent=2, allow_nan=False, default=_json_float)
            out.write("\n")
        elif args.command == "sweep":
            header, rows = sweep_rows(args.potential, params, args.vary, args.emit, args.level, args.levels or 4)
            write_csv(header, rows, out)
        else:
            spec = build_spec(args.potential, params)
            header, rows, footer = simulate_rows(spec, args.packet, args.t_max, args.steps, args.levels)
            write_csv(header, rows, out, footer)
    except ParameterError as exc:
        print(f"dwtunnel: parameter error: {exc}", file=sys.stderr)
        return 2
    except DwTunnelError as exc:
        print(f"dwtunnel: solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
