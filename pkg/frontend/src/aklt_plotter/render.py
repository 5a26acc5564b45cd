"""Render fidelity-trajectory CSVs into trajectory figures.

Consumes the ``step,theta,axis,F,term_zz,term_xx,term_xz,noise,p,N`` CSV
schema of the simulator's evolve command: one curve per measurement angle,
step on the horizontal axis, fidelity on the vertical axis, with optional
dashed overlays for the late-time values.  Overlay heights are recomputed
here from theta alone, never read from the CSV, so a rendered figure
cross-checks the simulation output.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

REQUIRED_COLUMNS = ("step", "theta", "F")
THETA_MATCH_TOL = 1e-9


@dataclass
class PlotSpec:
    csv_paths: list[str]
    thetas: list[float] = field(default_factory=list)  # empty: plot all
    overlays: list[str] = field(default_factory=list)  # noise1 | floor | pure:N
    out_path: str = "fidelity.png"
    title: str | None = None


@dataclass
class Trajectory:
    theta: float
    steps: list[int]
    values: list[float]
    source: str


def noise1_asymptote(theta: float) -> float:
    """Late-time fidelity under the group-averaging noise: (1 + cos^2)/2."""
    return 0.5 * (1.0 + np.cos(theta) ** 2)


def pure_constant(theta: float, n_bulk: int) -> float:
    """Pure-state fidelity 1 - (1 - cos theta)/(2 * 3^N)."""
    return 1.0 - (1.0 - np.cos(theta)) / (2.0 * 3.0 ** n_bulk)


def theta_label(theta: float) -> str:
    """Angle as a fraction of pi: 0, pi/2, 3pi/8, ..."""
    frac = Fraction(theta / np.pi).limit_denominator(64)
    if abs(float(frac) * np.pi - theta) > 1e-9:
        return f"{theta:g}"
    if frac == 0:
        return "0"
    num, den = frac.numerator, frac.denominator
    pi_part = "π" if num == 1 else f"{num}π"
    return pi_part if den == 1 else f"{pi_part}/{den}"


def load_trajectories(path: str) -> list[Trajectory]:
    """Parse one CSV into per-theta trajectories, ordered by step."""
    with open(path, "r", encoding="ascii") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = list(reader)
    by_theta: dict[float, list[tuple[int, float]]] = {}
    for row in rows:
        theta = float(row["theta"])
        by_theta.setdefault(theta, []).append((int(row["step"]), float(row["F"])))
    out = []
    for theta in sorted(by_theta):
        pts = sorted(by_theta[theta])
        out.append(Trajectory(theta=theta, steps=[p[0] for p in pts],
                              values=[p[1] for p in pts], source=path))
    return out


def _select(trajectories: list[Trajectory], thetas: list[float]):
    if not thetas:
        return trajectories
    selected = []
    for want in thetas:
        matches = [t for t in trajectories
                   if abs(t.theta - want) <= THETA_MATCH_TOL]
        if not matches:
            available = sorted({t.theta for t in trajectories})
            raise ValueError(
                f"theta {want:g} not present in the CSV (has {available})")
        selected.extend(matches)
    return selected


def _parse_overlay(spec: str) -> tuple[str, int | None]:
    if spec == "noise1":
        return "noise1", None
    if spec == "floor":
        return "floor", None
    if spec.startswith("pure:"):
        n = int(spec.split(":", 1)[1])
        if n < 1:
            raise ValueError("pure:N needs N >= 1")
        return "pure", n
    raise ValueError(f"unknown overlay {spec!r} (noise1 | floor | pure:N)")


def render(spec: PlotSpec):
    """Draw the figure and save it to spec.out_path; returns the Figure.

    Data lines carry gid ``data:<source>:theta=<value>`` and overlays
    ``overlay:<kind>:theta=<value>`` so the plotted series can be read back
    programmatically.
    """
    trajectories = []
    for path in spec.csv_paths:
        trajectories.extend(_select(load_trajectories(path), spec.thetas))
    if not trajectories:
        raise ValueError("nothing to plot")

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    max_step = 0
    for traj in trajectories:
        label = f"θ = {theta_label(traj.theta)}"
        line, = ax.plot(traj.steps, traj.values, marker="o", markersize=3,
                        linewidth=1.2, label=label)
        line.set_gid(f"data:{traj.source}:theta={traj.theta:.12g}")
        max_step = max(max_step, max(traj.steps))

    seen_thetas = sorted({t.theta for t in trajectories})
    for overlay in spec.overlays:
        kind, n_bulk = _parse_overlay(overlay)
        if kind == "floor":
            ln = ax.axhline(0.25, linestyle="--", color="0.4", linewidth=1.0)
            ln.set_gid("overlay:floor")
            continue
        for theta in seen_thetas:
            value = (noise1_asymptote(theta) if kind == "noise1"
                     else pure_constant(theta, n_bulk))
            ln = ax.axhline(value, linestyle="--", color="0.55", linewidth=0.9)
            ln.set_gid(f"overlay:{kind}:theta={theta:.12g}")

    ax.set_xlim(0, max(max_step, 1))
    ax.set_ylim(0.0, 1.02)
    ax.set_xlabel("step")
    ax.set_ylabel("gate fidelity")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_path, dpi=150)
    return fig


def extract_series(fig) -> dict[str, tuple[list[float], list[float]]]:
    """gid -> (x, y) for every line in the figure; the test hook."""
    out = {}
    for ax in fig.axes:
        for line in ax.get_lines():
            gid = line.get_gid()
            if gid:
                out[gid] = (list(map(float, line.get_xdata())),
                            list(map(float, line.get_ydata())))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="render",
        description="Render aklt-lab fidelity-trajectory CSVs")
    ap.add_argument("--csv", action="append", required=True,
                    help="trajectory CSV (repeatable)")
    ap.add_argument("--theta", type=float, action="append", default=None,
                    help="plot only this angle (repeatable; default all)")
    ap.add_argument("--asymptote", action="append", default=None,
                    help="overlay: noise1 | floor | pure:N (repeatable)")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--title", default=None)
    args = ap.parse_args(argv)
    spec = PlotSpec(csv_paths=args.csv, thetas=args.theta or [],
                    overlays=args.asymptote or [], out_path=args.out,
                    title=args.title)
    try:
        fig = render(spec)
        plt.close(fig)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
