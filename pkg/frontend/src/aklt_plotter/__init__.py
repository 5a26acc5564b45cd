"""Figure rendering for aklt-lab fidelity-trajectory CSVs."""

from .render import (
    PlotSpec,
    Trajectory,
    extract_series,
    load_trajectories,
    noise1_asymptote,
    pure_constant,
    render,
    theta_label,
)

__all__ = [
    "PlotSpec",
    "Trajectory",
    "extract_series",
    "load_trajectories",
    "noise1_asymptote",
    "pure_constant",
    "render",
    "theta_label",
]
