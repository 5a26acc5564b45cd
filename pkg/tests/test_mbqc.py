import numpy as np
import pytest

from conftest import noisy_dense, noisy_mpo

from aklt_lab.aklt import DensityMpo, build_aklt
from aklt_lab.mbqc import (
    ALPHA,
    BETA,
    GAMMA,
    SIGN_PATTERNS,
    FidelityBreakdown,
    GateSpec,
    MeasurementRecord,
    assemble_rho_U,
    basis,
    byproduct,
    fidelity_via_strings,
    gate_fidelity,
    ideal_resource_state,
    identity_fidelity,
    pure_fidelity_closed_form,
    single_measurement_action,
)
from aklt_lab.tensor_core import (
    PAULI_X,
    PAULI_Z,
    exp_i_pi_spin,
    rotated_spin_ops,
    spin1_operators,
)

THETAS = (0.0, np.pi / 4, np.pi / 2, np.pi)


# ---------------------------------------------------------------------------
# measurement basis


@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 2, 2.0])
def test_basis_orthonormal_and_complete(theta):
    mb = basis(theta)
    kets = [mb.alpha, mb.beta, mb.gamma]
    for i, a in enumerate(kets):
        for j, b in enumerate(kets):
            assert abs(np.vdot(a, b) - (1.0 if i == j else 0.0)) < 1e-12
    total = sum(mb.projectors())
    assert np.abs(total - np.eye(3)).max() < 1e-12


@pytest.mark.parametrize("theta", [0.0, 0.7, np.pi / 2, 2.4])
def test_basis_kets_are_zero_eigenvectors(theta):
    mb = basis(theta)
    sxt, syt, sz = rotated_spin_ops(theta)
    assert np.abs(sxt @ mb.alpha).max() < 1e-12
    assert np.abs(syt @ mb.beta).max() < 1e-12
    assert np.abs(sz @ mb.gamma).max() < 1e-12


@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 2, 2.0])
def test_eigenrelation_sign_patterns(theta):
    # P(m) e^{i pi S~a} = s P(m) with the exact sign tables
    mb = basis(theta)
    ops = dict(zip("xy", rotated_spin_ops(theta)[:2]))
    ops["z"] = spin1_operators()[2]
    for axis, pattern in SIGN_PATTERNS.items():
        string = exp_i_pi_spin(ops[axis])
        for sign, outcome in zip(pattern, (ALPHA, BETA, GAMMA)):
            p = mb.projector(outcome)
            assert np.abs(p @ string - sign * p).max() < 1e-12
            assert np.abs(string @ p - sign * p).max() < 1e-12


def test_single_measurement_action_forms():
    for theta in (0.0, 0.6, np.pi / 2):
        rot = np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])
        for outcome, target in ((ALPHA, PAULI_X @ rot),
                                (BETA, PAULI_X @ PAULI_Z @ rot),
                                (GAMMA, PAULI_Z)):
            act = single_measurement_action(outcome, theta)
            # proportional with modulus 1/sqrt(3)
            lam = np.vdot(target, act) / np.vdot(target, target)
            assert np.abs(act - lam * target).max() < 1e-12
            assert abs(abs(lam) - 1.0 / np.sqrt(3.0)) < 1e-12


# ---------------------------------------------------------------------------
# records and by-products


def test_record_counters():
    rec = MeasurementRecord.from_outcomes((GAMMA, ALPHA, BETA))
    assert (rec.r_x, rec.r_y, rec.r_z) == (2, 2, 2)
    assert rec.first_desired == 2
    assert not rec.all_gamma


def test_record_counter_parity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        outcomes = tuple(rng.choice([ALPHA, BETA, GAMMA], size=6))
        rec = MeasurementRecord.from_outcomes(outcomes)
        assert (-1) ** (rec.r_x + rec.r_y + rec.r_z) == 1


def test_record_rejects_inconsistent_counters():
    with pytest.raises(ValueError):
        MeasurementRecord(outcomes=(ALPHA, GAMMA), r_x=2, r_y=1, r_z=1)
    with pytest.raises(ValueError):
        MeasurementRecord(outcomes=("delta",), r_x=0, r_y=0, r_z=0)


def test_all_gamma_sentinel():
    rec = MeasurementRecord.from_outcomes((GAMMA,) * 4)
    assert rec.all_gamma
    assert rec.first_desired == 5  # N + 1


def test_byproduct_all_gamma_even():
    rec = MeasurementRecord.from_outcomes((GAMMA,) * 4)
    assert (rec.r_x, rec.r_z) == (0, 4)
    assert np.abs(byproduct(rec) - PAULI_X @ PAULI_Z).max() < 1e-14


def test_byproduct_alpha_then_gammas():
    rec = MeasurementRecord.from_outcomes((ALPHA, GAMMA, GAMMA))
    assert (rec.r_x, rec.r_z) == (1, 2)
    assert np.abs(byproduct(rec) - PAULI_Z).max() < 1e-14


# ---------------------------------------------------------------------------
# rho_U assembly


def _pure_rho_u_expected(n, theta):
    psi_u = ideal_resource_state(theta)
    psi_i = ideal_resource_state(0.0)
    frac = 1.0 / 3.0 ** n
    return ((1.0 - frac) * np.outer(psi_u, psi_u.conj())
            + frac * np.outer(psi_i, psi_i.conj()))


@pytest.mark.parametrize("mode", ["oracle", "grouped"])
@pytest.mark.parametrize("theta", THETAS)
def test_rho_u_pure_decomposition(mode, theta):
    n = 3
    state = DensityMpo.from_pure_chain(build_aklt(n))
    rho_u = assemble_rho_U(state, GateSpec("z", theta), mode=mode)
    assert np.abs(rho_u - _pure_rho_u_expected(n, theta)).max() < 1e-10


def test_rho_u_maximally_mixed():
    state = DensityMpo.maximally_mixed(3)
    for mode in ("oracle", "grouped"):
        rho_u = assemble_rho_U(state, GateSpec("z", 0.9), mode=mode)
        assert np.abs(rho_u - np.eye(4) / 4.0).max() < 1e-12


def test_grouped_equals_oracle_noisy():
    state = noisy_mpo(1, 0.25, 4, 1)
    gate = GateSpec("z", np.pi / 2)
    a = assemble_rho_U(state, gate, mode="oracle")
    b = assemble_rho_U(state, gate, mode="grouped")
    assert np.abs(a - b).max() < 1e-10


def test_rho_u_physicality_under_channels():
    for nid in (1, 2, 3, 4):
        state = noisy_mpo(nid, 0.4, 3, 2)
        rho_u = assemble_rho_U(state, GateSpec("z", 0.8), mode="grouped")
        assert abs(np.trace(rho_u) - 1.0) < 1e-10
        assert np.abs(rho_u - rho_u.conj().T).max() < 1e-10
        assert np.linalg.eigvalsh(rho_u).min() > -1e-10


def test_assemble_mode_validation():
    state = DensityMpo.from_pure_chain(build_aklt(2))
    with pytest.raises(ValueError):
        assemble_rho_U(state, GateSpec("z", 0.0), mode="exact")
    with pytest.raises(ValueError):
        assemble_rho_U(DensityMpo.from_pure_chain(build_aklt(6)),
                       GateSpec("z", 0.0), mode="oracle")


# ---------------------------------------------------------------------------
# fidelity


def test_fidelity_of_maximally_mixed_rho_u():
    rho_u = np.eye(4, dtype=complex) / 4.0
    for theta in THETAS:
        br = gate_fidelity(rho_u, GateSpec("z", theta))
        assert abs(br.f - 0.25) < 1e-12
        assert abs(br.term_ii - 0.25) < 1e-12


def test_fidelity_equals_projector_overlap():
    # the stabilizer sum equals <psi_U| rho_U |psi_U> directly
    state = noisy_mpo(3, 0.3, 3, 1)
    for theta in (0.0, 0.8, np.pi / 2):
        rho_u = assemble_rho_U(state, GateSpec("z", theta), mode="grouped")
        psi = ideal_resource_state(theta)
        direct = (psi.conj() @ rho_u @ psi).real
        br = gate_fidelity(rho_u, GateSpec("z", theta))
        assert abs(br.f - direct) < 1e-12


def test_closed_form_values():
    assert pure_fidelity_closed_form(4, 0.0) == 1.0
    assert abs(pure_fidelity_closed_form(7, np.pi) - (1.0 - 1.0 / 2187.0)) < 1e-15
    assert abs(pure_fidelity_closed_form(3, np.pi / 2) - (1.0 - 1.0 / 54.0)) < 1e-15


@pytest.mark.parametrize("n", range(1, 8))
def test_pure_fidelity_matches_closed_form(n):
    state = DensityMpo.from_pure_chain(build_aklt(n))
    for theta in np.linspace(0.0, np.pi, 9):
        br = fidelity_via_strings(state, float(theta))
        assert abs(br.f - pure_fidelity_closed_form(n, theta)) < 1e-10


def test_pure_n7_pi_value():
    state = DensityMpo.from_pure_chain(build_aklt(7))
    rho_u = assemble_rho_U(state, GateSpec("z", np.pi), mode="grouped")
    f = gate_fidelity(rho_u, GateSpec("z", np.pi)).f
    assert abs(f - (1.0 - 1.0 / 3.0 ** 7)) < 1e-10


def test_strings_term_zz_on_pure():
    state = DensityMpo.from_pure_chain(build_aklt(5))
    br = fidelity_via_strings(state, 1.1)
    assert abs(br.term_zz - 0.25) < 1e-10


def test_strings_at_zero_equals_identity_fidelity():
    for maker in (lambda: DensityMpo.from_pure_chain(build_aklt(4)),
                  lambda: DensityMpo.maximally_mixed(4),
                  lambda: noisy_mpo(3, 0.25, 4, 2)):
        state = maker()
        assert abs(fidelity_via_strings(state, 0.0).f
                   - identity_fidelity(state)) < 1e-10


def test_strings_equals_oracle_noise1():
    state = noisy_mpo(1, 0.25, 5, 1)
    rho = noisy_dense(1, 0.25, 5, 1)
    theta = np.pi / 2
    f_or = gate_fidelity(assemble_rho_U(rho, GateSpec("z", theta), mode="oracle"),
                         GateSpec("z", theta)).f
    f_st = fidelity_via_strings(state, theta).f
    assert abs(f_or - f_st) < 1e-10


@pytest.mark.parametrize("nid", [1, 2, 3, 4])
def test_three_path_agreement(nid):
    # oracle enumeration, grouped sum and string route coincide
    for n in (2, 3):
        for steps in (0, 1, 2):
            mpo = noisy_mpo(nid, 0.25, n, steps)
            rho = noisy_dense(nid, 0.25, n, steps)
            for theta in THETAS:
                gate = GateSpec("z", theta)
                f_or = gate_fidelity(
                    assemble_rho_U(rho, gate, mode="oracle"), gate).f
                f_gr = gate_fidelity(
                    assemble_rho_U(mpo, gate, mode="grouped"), gate).f
                f_st = fidelity_via_strings(mpo, theta).f
                assert abs(f_or - f_gr) < 1e-10
                assert abs(f_or - f_st) < 1e-10


def test_identity_fidelity_values():
    assert abs(identity_fidelity(
        DensityMpo.from_pure_chain(build_aklt(6))) - 1.0) < 1e-10
    assert abs(identity_fidelity(DensityMpo.maximally_mixed(5)) - 0.25) < 1e-12
    state = noisy_mpo(3, 0.25, 7, 10)
    assert abs(identity_fidelity(state) - 0.25) < 1e-3


def test_breakdown_sum():
    br = FidelityBreakdown(term_ii=0.25, term_zz=0.2, term_xx=0.1, term_xz=0.05)
    assert abs(br.f - 0.6) < 1e-15


# ---------------------------------------------------------------------------
# X-rotation gates


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_x_axis_pure_closed_form(n):
    state = DensityMpo.from_pure_chain(build_aklt(n))
    for theta in (0.0, 0.9, np.pi / 2, np.pi):
        br = fidelity_via_strings(state, theta, axis="x")
        assert abs(br.f - pure_fidelity_closed_form(n, theta)) < 1e-10


def test_x_axis_three_paths_noisy():
    mpo = noisy_mpo(4, 0.25, 3, 1)
    rho = noisy_dense(4, 0.25, 3, 1)
    theta = 0.7
    gate = GateSpec("x", theta)
    f_or = gate_fidelity(assemble_rho_U(rho, gate, mode="oracle"), gate).f
    f_gr = gate_fidelity(assemble_rho_U(mpo, gate, mode="grouped"), gate).f
    f_st = fidelity_via_strings(mpo, theta, axis="x").f
    assert abs(f_or - f_gr) < 1e-10
    assert abs(f_or - f_st) < 1e-10


def test_x_axis_differs_from_z_under_noise4():
    # noise 4 preserves the Z-rotation fidelity but degrades the X one
    state = noisy_mpo(4, 0.25, 4, 3)
    theta = np.pi / 2
    fz = fidelity_via_strings(state, theta, axis="z").f
    fx = fidelity_via_strings(state, theta, axis="x").f
    assert abs(fz - pure_fidelity_closed_form(4, theta)) < 1e-10
    assert fx < fz - 0.01


def test_gate_spec_validation():
    with pytest.raises(ValueError):
        GateSpec("y", 0.0)
    g = GateSpec("z", 2 * np.pi + 0.5)
    assert abs(g.theta - 0.5) < 1e-12
    target = GateSpec("x", np.pi).target
    # e^{-i pi X/2} = -i X
    assert np.abs(target - (-1j) * PAULI_X).max() < 1e-12
