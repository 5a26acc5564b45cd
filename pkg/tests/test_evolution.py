import numpy as np
import pytest

from aklt_lab.evolution import (
    CSV_HEADER,
    DEFAULT_THETAS,
    evolve,
    format_csv,
    noise1_asymptote,
    write_csv,
)
from aklt_lab.mbqc import pure_fidelity_closed_form


def test_asymptote_values():
    # (1 + cos^2 theta)/2: 1 at the endpoints, 1/2 at theta = pi/2
    assert noise1_asymptote(0.0) == 1.0
    assert abs(noise1_asymptote(np.pi / 2) - 0.5) < 1e-15
    assert abs(noise1_asymptote(np.pi) - 1.0) < 1e-15


def test_step_zero_rows_are_pure_values():
    rows = evolve(1, p=0.25, n_bulk=4, steps=0)
    assert len(rows) == len(DEFAULT_THETAS)
    for r in rows:
        assert r.step == 0
        assert abs(r.f - pure_fidelity_closed_form(4, r.theta)) < 1e-10


def test_noise4_constant_trajectory():
    rows = evolve(4, p=0.25, n_bulk=4, steps=8)
    for r in rows:
        assert abs(r.f - pure_fidelity_closed_form(4, r.theta)) < 1e-10


def test_noise3_reaches_floor_by_step_ten():
    rows = evolve(3, p=0.25, n_bulk=7, steps=10, thetas=(0.0,))
    final = [r for r in rows if r.step == 10]
    assert abs(final[0].f - 0.25) < 1e-3


def test_noise1_identity_gate_never_decays():
    rows = evolve(1, p=0.25, n_bulk=7, steps=12, thetas=(0.0,))
    for r in rows:
        assert abs(r.f - 1.0) < 1e-8


def test_noise1_approaches_asymptote():
    thetas = (np.pi / 4, np.pi / 2)
    rows = evolve(1, p=0.25, n_bulk=5, steps=30, thetas=thetas)
    for r in rows:
        if r.step == 30:
            assert abs(r.f - noise1_asymptote(r.theta)) < 1e-3


def test_monotone_after_first_step():
    rows = evolve(1, p=0.25, n_bulk=4, steps=15, thetas=(np.pi / 2,))
    fs = [r.f for r in sorted(rows, key=lambda r: r.step)[1:]]
    diffs = np.diff(fs)
    assert (diffs <= 1e-12).all() or (diffs >= -1e-12).all()


def test_determinism():
    a = evolve(2, p=0.25, n_bulk=3, steps=4)
    b = evolve(2, p=0.25, n_bulk=3, steps=4)
    assert format_csv(a) == format_csv(b)


def test_csv_format(tmp_path):
    rows = evolve(1, p=0.25, n_bulk=2, steps=1, thetas=(0.0, np.pi))
    path = tmp_path / "traj.csv"
    write_csv(rows, str(path))
    text = path.read_text()
    lines = text.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 2 * 2
    fields = lines[1].split(",")
    assert len(fields) == 10
    assert fields[2] == "z"
    assert fields[7] == "noise1"
    # 12 significant digits round-trip
    assert float(fields[3]) == pytest.approx(rows[0].f, abs=1e-11)


def test_validation():
    with pytest.raises(ValueError):
        evolve(1, steps=-1)
    with pytest.raises(ValueError):
        evolve(1, n_bulk=0)
    with pytest.raises(ValueError):
        evolve(1, n_bulk=40)


def test_threads_env_consistency(monkeypatch):
    base = evolve(1, p=0.25, n_bulk=2, steps=2)
    monkeypatch.setenv("AKLT_LAB_THREADS", "4")
    threaded = evolve(1, p=0.25, n_bulk=2, steps=2)
    assert format_csv(base) == format_csv(threaded)
