"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 output I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import analysis
from .cat_algebra import angles_to_qubit
from .ecs import EcsParams, concurrence_closed, concurrence_numeric, qubit_amplitudes
from .errors import DomainError, EcsError, ZeroBranch
from .protocol import (
    StrategyId,
    average_fidelity,
    branch_fidelity,
    correction_unitary,
    decompose_branches,
    select_strategy,
    teleported_state,
)
from .verify import DEFAULT_COUNT, run_verification

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SURFACE_COLUMNS = ("alpha_sq", "theta", "phi", "f_min", "omega_star", "xi_star", "concurrence")
GAP_COLUMNS = ("alpha_sq", "f1", "f2", "d")
PANEL_ALPHA_SQ = {"a": 0.5, "b": 1.0, "c": 1.5}


class OutputError(Exception):
    pass


def fmt(v: float) -> str:
    return format(float(v), ".12g")


def render(columns: Sequence[str], rows: Sequence[Sequence[float]], form: str) -> str:
    if form == "json":
        return json.dumps([dict(zip(columns, map(float, r))) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows([fmt(v) for v in r] for r in rows)
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc.strerror or exc}") from exc


def surface_rows(records) -> list[tuple]:
    return [tuple(getattr(r, c) for c in SURFACE_COLUMNS) for r in records]


def surface(alpha_sq: float, n_theta: int, n_phi: int, jobs: int):
    if n_theta < 1 or n_phi < 1:
        raise DomainError("grid sizes must be >= 1")
    thetas = np.linspace(0.0, math.pi, n_theta) if n_theta > 1 else np.array([math.pi / 2])
    phis = np.linspace(0.0, 2 * math.pi, n_phi) if n_phi > 1 else np.array([0.0])
    return analysis.sweep_surface(alpha_sq, thetas, phis, workers=jobs)


def cmd_fidelity(args) -> int:
    p = EcsParams.from_mean_photon_number(args.alpha_sq, args.theta, args.phi)
    q = angles_to_qubit(args.omega, args.xi)
    chosen = select_strategy(args.phi)
    fav = {s: average_fidelity(args.omega, args.xi, p, s) for s in StrategyId}
    table = []
    for b in decompose_branches(q, p):
        try:
            f = branch_fidelity(teleported_state(b, correction_unitary(chosen, b.label)), q)
        except ZeroBranch:
            f = 0.0
        table.append((b.label.value, b.prob, f))
    conc = concurrence_closed(p)

    if args.format == "json":
        doc = {
            "alpha_sq": args.alpha_sq, "theta": args.theta, "phi": args.phi,
            "omega": args.omega, "xi": args.xi,
            "strategy": chosen.name, "f_av": fav[chosen],
            "f_av_s1": fav[StrategyId.S1], "f_av_s2": fav[StrategyId.S2],
            "concurrence": conc,
            "branches": [{"outcome": o, "prob": pr, "fidelity": f} for o, pr, f in table],
        }
        emit(json.dumps(doc, indent=1) + "\n", args.out)
        return EXIT_OK

    lines = [
        f"alpha_sq={fmt(args.alpha_sq)} theta={fmt(args.theta)} phi={fmt(args.phi)} "
        f"omega={fmt(args.omega)} xi={fmt(args.xi)}",
        f"concurrence  {fmt(conc)}",
        f"F_av[S1]     {fmt(fav[StrategyId.S1])}",
        f"F_av[S2]     {fmt(fav[StrategyId.S2])}",
        f"strategy     {chosen.name}",
        f"F_av         {fmt(fav[chosen])}",
        "",
        f"{'outcome':<8} {'P':>16} {'F':>16}",
    ]
    lines += [f"{o:<8} {fmt(pr):>16} {fmt(f):>16}" for o, pr, f in table]
    lines.append(f"{'sum':<8} {fmt(sum(r[1] for r in table)):>16}")
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_concurrence(args) -> int:
    p = EcsParams.from_mean_photon_number(args.alpha_sq, args.theta, args.phi)
    closed = concurrence_closed(p)
    numeric = concurrence_numeric(qubit_amplitudes(p))
    if args.format == "json":
        emit(json.dumps({"closed": closed, "numeric": numeric}) + "\n", args.out)
    else:
        emit(f"closed   {fmt(closed)}\nnumeric  {fmt(numeric)}\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    records = surface(args.alpha_sq, args.grid_theta, args.grid_phi, args.jobs)
    emit(render(SURFACE_COLUMNS, surface_rows(records), args.format), args.out)
    return EXIT_OK


def gap_rows(curve) -> list[tuple]:
    return [(g.alpha_sq, g.f1, g.f2, g.d) for g in curve.points]


def cmd_gap(args) -> int:
    curve = analysis.gap_curve((args.alpha_sq_min, args.alpha_sq_max), args.steps)
    peak = curve.peak
    summary = f"max d = {fmt(peak.d)} at alpha_sq = {fmt(peak.alpha_sq)}\n"
    if args.out is None:
        sys.stdout.write(summary)
        return EXIT_OK
    emit(render(GAP_COLUMNS, gap_rows(curve), args.format), args.out)
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_fig2(args) -> int:
    if args.panel == "d":
        curve = analysis.gap_curve((0.0, 5.0), args.steps)
        text = render(GAP_COLUMNS, gap_rows(curve), args.format)
        summary = f"panel d: max d = {fmt(curve.peak.d)} at alpha_sq = {fmt(curve.peak.alpha_sq)}\n"
    else:
        a2 = PANEL_ALPHA_SQ[args.panel]
        records = surface(a2, args.grid_theta, args.grid_phi, args.jobs)
        text = render(SURFACE_COLUMNS, surface_rows(records), args.format)
        top = max(records, key=lambda r: r.f_min)
        summary = (
            f"panel {args.panel} (alpha_sq={fmt(a2)}): max f_min = {fmt(top.f_min)} "
            f"at theta={fmt(top.theta)} phi={fmt(top.phi)}\n"
        )
    emit(text, args.out)
    if args.out is not None:
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.count < 1:
        raise DomainError(f"--count must be >= 1, got {args.count}")
    report = run_verification(
        seed=args.seed, count=args.count, cutoff=args.cutoff, alpha_sq=args.alpha_sq, oracle_tol=args.tol
    )
    emit("\n".join(report.lines()) + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecs-teleport",
        description="Teleportation fidelity of cat-state qubits over entangled coherent channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default="csv"):
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    def channel(sp, required=True):
        sp.add_argument("--alpha-sq", type=float, required=required, help="mean photon number |alpha|^2")
        sp.add_argument("--theta", type=float, required=required, help="channel angle in [0, pi]")
        sp.add_argument("--phi", type=float, required=required, help="channel phase in [0, 2pi]")

    sp = sub.add_parser("fidelity", help="average fidelity and branch table for one input state")
    channel(sp)
    sp.add_argument("--omega", type=float, required=True, help="input angle in [0, pi]")
    sp.add_argument("--xi", type=float, required=True, help="input phase in [0, 2pi)")
    common(sp)
    sp.set_defaults(func=cmd_fidelity)

    sp = sub.add_parser("concurrence", help="channel concurrence, closed form and numeric")
    channel(sp)
    common(sp)
    sp.set_defaults(func=cmd_concurrence)

    sp = sub.add_parser("sweep", help="minimum average fidelity over a theta x phi grid")
    sp.add_argument("--alpha-sq", type=float, required=True)
    sp.add_argument("--grid-theta", type=int, default=37)
    sp.add_argument("--grid-phi", type=int, default=73)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("gap", help="closed-form worst-case fidelities and their difference")
    sp.add_argument("--alpha-sq-min", type=float, default=0.01)
    sp.add_argument("--alpha-sq-max", type=float, default=5.0)
    sp.add_argument("--steps", type=int, default=500)
    common(sp)
    sp.set_defaults(func=cmd_gap)

    sp = sub.add_parser("fig2", help="data for one panel of the worst-case fidelity figure")
    sp.add_argument("--panel", choices=("a", "b", "c", "d"), required=True)
    sp.add_argument("--grid-theta", type=int, default=37)
    sp.add_argument("--grid-phi", type=int, default=73)
    sp.add_argument("--steps", type=int, default=501)
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(sp)
    sp.set_defaults(func=cmd_fig2)

    sp = sub.add_parser("verify", help="cross-check closed forms against branch algebra and the Fock oracle")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=DEFAULT_COUNT, help="number of random tuples")
    sp.add_argument("--cutoff", type=int, default=None, help="force the Fock cutoff")
    sp.add_argument("--alpha-sq", type=float, default=None, help="pin |alpha|^2 for every tuple")
    sp.add_argument("--tol", type=float, default=1e-8, help="analytic vs oracle fidelity tolerance")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EcsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
