"""Command-line front door.

Subcommands: evolve, fidelity, check-symmetry, string-order, mpo-check,
table1.  All numeric output is fixed-format and locale independent, so
identical configurations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import evolution
from .aklt import DensityMpo, build_aklt, string_order
from .channels import (
    KrausChannel,
    apply_mpo,
    catalog_noise,
    channel_from_kraus,
    classify_table1,
    rotated_rep,
    symmetry_report,
)
from .mbqc import GateSpec, assemble_rho_U, fidelity_via_strings, gate_fidelity
from .mpo_analysis import diagonal_invariance_check


def _fmt(x: float) -> float:
    """Round-trip through 12 significant digits for stable output."""
    return float(f"{x:.12g}")


def parse_kraus_file(path: str) -> list[np.ndarray]:
    """Plain-text Kraus operators: blocks of 3 rows, each 3 comma-separated
    complex literals (``re+imj``), blank-line separated.  An optional block
    ``weights: w1, w2, ...`` rescales the operators by sqrt(w)."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    blocks = [b.strip() for b in text.split("\n\n") if b.strip()]
    ops: list[np.ndarray] = []
    weights = None
    for block in blocks:
        lines = [ln.strip() for ln in block.splitlines()
                 if ln.strip() and not ln.strip().startswith("#")]
        if not lines:
            continue
        if lines[0].lower().startswith("weights:"):
            weights = [float(w) for w in lines[0].split(":", 1)[1].split(",")]
            continue
        if len(lines) != 3:
            raise ValueError(f"Kraus block must have 3 rows, got {len(lines)}")
        rows = []
        for ln in lines:
            entries = [complex(tok.strip().replace(" ", ""))
                       for tok in ln.split(",")]
            if len(entries) != 3:
                raise ValueError("Kraus rows must have 3 entries")
            rows.append(entries)
        ops.append(np.array(rows, dtype=complex))
    if not ops:
        raise ValueError("no Kraus operators found")
    if weights is not None:
        if len(weights) != len(ops):
            raise ValueError("weights line must match the number of operators")
        ops = [np.sqrt(w) * k for w, k in zip(weights, ops)]
    return ops


def _channel_from_args(args) -> KrausChannel:
    if args.kraus_file:
        return channel_from_kraus("file", args.p, parse_kraus_file(args.kraus_file))
    if args.noise is None:
        raise SystemExit("error: one of --noise or --kraus-file is required")
    return catalog_noise(args.noise, args.p)


def _prepared_state(channel, n_bulk: int, steps: int,
                    initial: str = "aklt") -> DensityMpo:
    if initial == "mixed":
        return DensityMpo.maximally_mixed(n_bulk)
    state = DensityMpo.from_pure_chain(build_aklt(n_bulk))
    for _ in range(steps):
        for site in range(1, n_bulk + 1):
            state = apply_mpo(state, channel, site)
    return state


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_evolve(args) -> int:
    channel = _channel_from_args(args)
    thetas = args.theta if args.theta else list(evolution.DEFAULT_THETAS)
    rows = evolution.evolve(channel, p=args.p, n_bulk=args.n, steps=args.steps,
                            thetas=thetas, gate_axis=args.axis)
    text = evolution.format_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_fidelity(args) -> int:
    thetas = args.theta if args.theta else [0.0]
    if args.steps > 0 or args.noise is not None or args.kraus_file:
        channel = _channel_from_args(args)
        state = _prepared_state(channel, args.n, args.steps)
        noise_label = channel.label
    else:
        state = DensityMpo.from_pure_chain(build_aklt(args.n))
        noise_label = "none"
    results = []
    for theta in thetas:
        gate = GateSpec(axis=args.axis, theta=theta)
        if args.mode == "strings":
            br = fidelity_via_strings(state, theta, axis=args.axis)
        else:
            rho_u = assemble_rho_U(state, gate, mode=args.mode)
            br = gate_fidelity(rho_u, gate)
        results.append({"theta": _fmt(theta), "F": _fmt(br.f),
                        "term_ii": _fmt(br.term_ii), "term_zz": _fmt(br.term_zz),
                        "term_xx": _fmt(br.term_xx), "term_xz": _fmt(br.term_xz)})
    _emit({"command": "fidelity", "axis": args.axis, "mode": args.mode,
           "noise": noise_label, "p": args.p, "n": args.n,
           "steps": args.steps, "results": results}, args.out)
    return 0


def _report_payload(report) -> dict:
    return {
        "verdict": report.verdict,
        "strong": report.strong,
        "weak": report.weak,
        "elements": [
            {"label": e.label, "strong": e.strong, "weak": e.weak,
             "phase_re": _fmt(e.phase.real) if e.phase is not None else None,
             "phase_im": _fmt(e.phase.imag) if e.phase is not None else None}
            for e in report.elements
        ],
    }


def cmd_check_symmetry(args) -> int:
    from .channels import canonical_rep, time_reversal_rep

    channel = _channel_from_args(args)
    payload = {
        "command": "check-symmetry",
        "channel": channel.label,
        "p": args.p,
        "z2z2": _report_payload(symmetry_report(channel, canonical_rep())),
        "time_reversal": _report_payload(
            symmetry_report(channel, time_reversal_rep())),
    }
    if args.theta:
        payload["rotated"] = {
            f"{t:.12g}": _report_payload(
                symmetry_report(channel, rotated_rep(t)))
            for t in args.theta
        }
    _emit(payload, args.out)
    return 0


def cmd_string_order(args) -> int:
    channel = None
    if args.noise is not None or args.kraus_file:
        channel = _channel_from_args(args)
    state = _prepared_state(channel, args.n, args.steps if channel else 0,
                            initial=args.initial)
    j = args.j if args.j is not None else args.n - 1
    value = string_order(state, args.axis_name, args.i, j)
    _emit({"command": "string-order", "axis": args.axis_name, "i": args.i,
           "j": j, "n": args.n, "initial": args.initial,
           "noise": channel.label if channel else "none",
           "steps": args.steps, "value": _fmt(value)}, args.out)
    return 0


def cmd_mpo_check(args) -> int:
    from .channels import canonical_rep

    channel = _channel_from_args(args)
    invariant = diagonal_invariance_check(channel)
    strong = symmetry_report(channel, canonical_rep()).strong
    _emit({"command": "mpo-check", "channel": channel.label, "p": args.p,
           "diagonal_invariant": invariant,
           "strongly_symmetric_z2z2": strong,
           "status": ("DIAGONAL PRESERVED / strongly symmetric" if invariant
                      else "DIAGONAL CHANGED / not strongly symmetric")},
          args.out)
    return 0


def cmd_table1(args) -> int:
    table = classify_table1(args.p)
    payload = {"command": "table1", "p": args.p, "noises": {}}
    for nid, reports in table.items():
        payload["noises"][str(nid)] = {
            "z2z2": reports["z2z2"].verdict,
            "time_reversal": reports["time_reversal"].verdict,
        }
    _emit(payload, args.out)
    return 0


def _add_channel_args(sp, require: bool = False) -> None:
    sp.add_argument("--noise", type=int, choices=(1, 2, 3, 4), default=None,
                    help="catalog noise id")
    sp.add_argument("--kraus-file", type=str, default=None,
                    help="path to a plain-text Kraus operator file")
    sp.add_argument("--p", type=float, default=0.25, help="error rate in [0, 1]")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="aklt-lab",
        description="Exact simulator of MBQC gate fidelity on noisy AKLT chains")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("evolve", help="fidelity trajectory CSV under a noise")
    _add_channel_args(sp)
    sp.add_argument("--n", type=int, default=evolution.DEFAULT_N)
    sp.add_argument("--steps", type=int, default=evolution.DEFAULT_STEPS)
    sp.add_argument("--theta", type=float, action="append", default=None)
    sp.add_argument("--axis", choices=("z", "x"), default="z")
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("fidelity", help="gate fidelity of a prepared state")
    _add_channel_args(sp)
    sp.add_argument("--n", type=int, default=evolution.DEFAULT_N)
    sp.add_argument("--steps", type=int, default=0)
    sp.add_argument("--theta", type=float, action="append", default=None)
    sp.add_argument("--axis", choices=("z", "x"), default="z")
    sp.add_argument("--mode", choices=("oracle", "grouped", "strings"),
                    default="grouped")
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_fidelity)

    sp = sub.add_parser("check-symmetry", help="weak/strong symmetry verdicts")
    _add_channel_args(sp)
    sp.add_argument("--theta", type=float, action="append", default=None,
                    help="also check the rotated Z2xZ2 at this angle")
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_check_symmetry)

    sp = sub.add_parser("string-order", help="string order parameter")
    _add_channel_args(sp)
    sp.add_argument("--n", type=int, default=evolution.DEFAULT_N)
    sp.add_argument("--steps", type=int, default=0)
    sp.add_argument("--axis", dest="axis_name", choices=("x", "y", "z"),
                    default="z")
    sp.add_argument("--i", type=int, default=2)
    sp.add_argument("--j", type=int, default=None)
    sp.add_argument("--initial", choices=("aklt", "mixed"), default="aklt")
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_string_order)

    sp = sub.add_parser("mpo-check", help="wire-basis diagonal invariance")
    _add_channel_args(sp)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_mpo_check)

    sp = sub.add_parser("table1", help="symmetry classification of the catalog")
    sp.add_argument("--p", type=float, default=0.25)
    sp.add_argument("--out", type=str, default=None)
    sp.set_defaults(func=cmd_table1)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
