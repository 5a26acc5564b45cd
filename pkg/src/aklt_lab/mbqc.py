"""Measurement protocol, by-product bookkeeping and gate fidelity.

Protocol for the Z-rotation gate by angle theta: measure bulk sites left to
right in the angle-theta basis until the first desired outcome (alpha or
beta) at site l, then measure the remaining sites at theta = 0.  Each
outcome string m carries a Pauli by-product B = X^{r_X + 1} Z^{r_Z + 1} on
the out qubit, with r_X counting desired outcomes and r_Z counting beta and
gamma outcomes.

The post-measurement two-qubit state rho_U is evaluated in two independent
ways, plus a third route straight to the fidelity:

* ORACLE: literal sum over all 3^N outcome strings on a dense state;
* GROUPED: the 16 Pauli coefficients of rho_U, with outcomes after site l
  summed analytically through the eigenvalue relations
  P(m) e^{i pi Sa~} = s_m P(m), sign patterns (+,-,-) / (-,+,-) / (-,-,+)
  over (alpha, beta, gamma) for a = x, y, z;
* string operators: the stabilizer terms of the fidelity written as sums of
  twisted/untwisted string correlators, the ZZ term collapsing to a single
  string expectation.

X-rotation gates reduce to the Z pipeline by conjugating the state with the
global spin rotation that exchanges the x and z axes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .aklt import DENSE_MATRIX_CAP, DensityMpo
from .tensor_core import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    exp_i_pi_spin,
    hadamard_rotation_ops,
    measurement_kets,
    spin1_operators,
)

GROUPED_CAP = 12

ALPHA, BETA, GAMMA = "alpha", "beta", "gamma"
OUTCOMES = (ALPHA, BETA, GAMMA)

# eigenvalue signs of P(m) e^{i pi S^a} over outcomes (alpha, beta, gamma)
SIGN_PATTERNS = {
    "x": (1, -1, -1),
    "y": (-1, 1, -1),
    "z": (-1, -1, 1),
}

# prefactor of the out-edge Pauli expectation from eliminating B^dag Q B
_BYPRODUCT_PREFACTOR = {"x": -1.0, "y": 1.0, "z": -1.0}

_PAULI = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
_AXIS_OF = {"X": "x", "Y": "y", "Z": "z"}


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal single-site measurement triple at angle theta.

    alpha/beta/gamma are the zero-eigenvectors of Sx~(theta), Sy~(theta)
    and Sz; the three projectors resolve the identity.
    """

    theta: float
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def ket(self, outcome: str) -> np.ndarray:
        return {ALPHA: self.alpha, BETA: self.beta, GAMMA: self.gamma}[outcome]

    def projector(self, outcome: str) -> np.ndarray:
        k = self.ket(outcome)
        return np.outer(k, k.conj())

    def projectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(self.projector(m) for m in OUTCOMES)


def basis(theta: float) -> MeasurementBasis:
    a, b, g = measurement_kets(theta)
    return MeasurementBasis(theta=theta, alpha=a, beta=b, gamma=g)


def single_measurement_action(outcome: str, theta: float) -> np.ndarray:
    """Correlation-space action sum_m <outcome|m> P[m] A of one measurement.

    Proportional (modulus 1/sqrt(3)) to X e^{-i theta Z/2}, X Z e^{-i theta Z/2}
    or Z for outcomes alpha, beta, gamma.
    """
    from .aklt import SINGLET, SPIN1_BOND_PROJECTORS

    ket = basis(theta).ket(outcome)
    tensors = np.einsum("mab,bc->mac", SPIN1_BOND_PROJECTORS, SINGLET)
    return np.einsum("m,mab->ab", ket.conj(), tensors)


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome string with the by-product counters.

    r_x counts desired (non-gamma) outcomes, r_z counts beta or gamma,
    r_y counts alpha or gamma; their sum is always even.
    """

    outcomes: tuple[str, ...]
    r_x: int
    r_y: int
    r_z: int

    def __post_init__(self):
        if any(m not in OUTCOMES for m in self.outcomes):
            raise ValueError("outcomes must be alpha/beta/gamma")
        expect = self._count(self.outcomes)
        if (self.r_x, self.r_y, self.r_z) != expect:
            raise ValueError(
                f"counters {(self.r_x, self.r_y, self.r_z)} inconsistent with "
                f"outcomes (expected {expect})")

    @staticmethod
    def _count(outcomes) -> tuple[int, int, int]:
        r_x = sum(1 for m in outcomes if m != GAMMA)
        r_y = sum(1 for m in outcomes if m != BETA)
        r_z = sum(1 for m in outcomes if m != ALPHA)
        return r_x, r_y, r_z

    @classmethod
    def from_outcomes(cls, outcomes) -> "MeasurementRecord":
        outcomes = tuple(outcomes)
        r_x, r_y, r_z = cls._count(outcomes)
        return cls(outcomes=outcomes, r_x=r_x, r_y=r_y, r_z=r_z)

    @property
    def n_sites(self) -> int:
        return len(self.outcomes)

    @property
    def all_gamma(self) -> bool:
        return all(m == GAMMA for m in self.outcomes)

    @property
    def first_desired(self) -> int:
        """1-based site of the first desired outcome; N + 1 when all gamma."""
        for k, m in enumerate(self.outcomes):
            if m != GAMMA:
                return k + 1
        return self.n_sites + 1


def byproduct(record: MeasurementRecord) -> np.ndarray:
    """Pauli by-product X^{r_x + 1} Z^{r_z + 1} on the out qubit."""
    out = np.eye(2, dtype=complex)
    if (record.r_x + 1) % 2:
        out = out @ PAULI_X
    if (record.r_z + 1) % 2:
        out = out @ PAULI_Z
    return out


@dataclass(frozen=True)
class GateSpec:
    """Rotation gate e^{-i theta P/2} about axis P in {z, x}."""

    axis: str = "z"
    theta: float = 0.0

    def __post_init__(self):
        if self.axis not in ("z", "x"):
            raise ValueError("gate axis must be 'z' or 'x'")
        object.__setattr__(self, "theta", float(self.theta) % (2.0 * np.pi))

    @property
    def target(self) -> np.ndarray:
        pauli = PAULI_Z if self.axis == "z" else PAULI_X
        w, v = np.linalg.eigh(pauli)
        return (v * np.exp(-1j * self.theta * w / 2.0)) @ v.conj().T


@dataclass(frozen=True)
class FidelityBreakdown:
    """The four stabilizer traces of the gate fidelity and their sum."""

    term_ii: float
    term_zz: float
    term_xx: float
    term_xz: float

    @property
    def f(self) -> float:
        return self.term_ii + self.term_zz + self.term_xx + self.term_xz


def ideal_resource_state(theta: float) -> np.ndarray:
    """(|00> + e^{i theta}|11>)/sqrt(2), the ideal Z-rotation resource."""
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1.0 / np.sqrt(2.0)
    psi[3] = np.exp(1j * theta) / np.sqrt(2.0)
    return psi


def pure_fidelity_closed_form(n_bulk: int, theta: float) -> float:
    """Closed-form gate fidelity on the pure AKLT state:
    1 - (1 - cos theta) / (2 * 3^N)."""
    if n_bulk < 1:
        raise ValueError("n_bulk must be >= 1")
    return 1.0 - (1.0 - np.cos(theta)) / (2.0 * 3.0 ** n_bulk)


# ---------------------------------------------------------------------------
# frame rotation for X-axis gates


def rotated_for_x_axis(state):
    """Conjugate the state by the global rotation exchanging x and z.

    The measurement pipeline for e^{-i theta X/2} on rho equals the Z
    pipeline on the rotated state.
    """
    h2, h3 = hadamard_rotation_ops()
    if isinstance(state, DensityMpo):
        new = []
        for t in state.tensors:
            h = h2 if t.shape[0] == 2 else h3
            new.append(np.einsum("st,tuab,vu->svab", h, t, h.conj()))
        return DensityMpo(new)
    rho = np.asarray(state)
    n = _state_n_bulk(state)
    full = reduce(np.kron, [h2] + [h3] * n + [h2])
    return full @ rho @ full.conj().T


def _state_n_bulk(state) -> int:
    if isinstance(state, DensityMpo):
        return state.n_bulk
    dim = np.asarray(state).shape[0]
    n = int(round(np.log(dim / 4) / np.log(3)))
    if 4 * 3 ** n != dim:
        raise ValueError("state dimension is not 4 * 3^N")
    return n


def _expectation(state, site_ops) -> complex:
    from .aklt import _product_expectation

    return _product_expectation(state, site_ops)


# ---------------------------------------------------------------------------
# rho_U assembly


def _pauli_coefficient(state, in_pauli: np.ndarray, out_axis: str,
                       theta: float) -> float:
    """Tr[rho_U (P_in x Q_out)] by the grouped-by-l sum, Q on axis out_axis."""
    n = _state_n_bulk(state)
    mb = basis(theta)
    p_gamma = mb.projector(GAMMA)
    sg = SIGN_PATTERNS[out_axis]
    desired = sg[0] * mb.projector(ALPHA) + sg[1] * mb.projector(BETA)
    spin = dict(zip("xyz", spin1_operators()))[out_axis]
    string_op = exp_i_pi_spin(spin)
    q_out = _PAULI[out_axis.upper()]
    total = 0.0 + 0.0j
    for l in range(n):  # 0-based position of the first desired outcome
        ops = ([in_pauli] + [p_gamma] * l + [desired]
               + [string_op] * (n - l - 1) + [q_out])
        total += (sg[2] ** l) * _expectation(state, ops)
    ops = [in_pauli] + [p_gamma] * n + [q_out]
    total += (sg[2] ** n) * _expectation(state, ops)
    val = _BYPRODUCT_PREFACTOR[out_axis] * total
    if abs(val.imag) > 1e-9:
        raise ValueError(f"Pauli coefficient has imaginary residue {val.imag:.2e}")
    return float(val.real)


def _assemble_grouped(state, theta: float) -> np.ndarray:
    n = _state_n_bulk(state)
    if n > GROUPED_CAP:
        raise ValueError(f"grouped evaluation limited to n_bulk <= {GROUPED_CAP}")
    rho_u = np.zeros((4, 4), dtype=complex)
    for p_name, p_op in _PAULI.items():
        c_pi = _expectation(state, [p_op] + [None] * n + [None])
        rho_u += 0.25 * c_pi * np.kron(p_op, PAULI_I)
        for q_name in ("X", "Y", "Z"):
            c = _pauli_coefficient(state, p_op, _AXIS_OF[q_name], theta)
            rho_u += 0.25 * c * np.kron(p_op, _PAULI[q_name])
    return rho_u


def _assemble_oracle(state, theta: float) -> np.ndarray:
    n = _state_n_bulk(state)
    if n > DENSE_MATRIX_CAP:
        raise ValueError(
            f"oracle enumeration limited to n_bulk <= {DENSE_MATRIX_CAP}")
    rho = state.to_dense_matrix() if isinstance(state, DensityMpo) else np.asarray(state)
    rho_t = rho.reshape(2, 3 ** n, 2, 2, 3 ** n, 2)
    kets_theta = basis(theta)
    kets_zero = basis(0.0)
    rho_u = np.zeros((4, 4), dtype=complex)
    for codes in itertools.product(range(3), repeat=n):
        outcomes = tuple(OUTCOMES[c] for c in codes)
        record = MeasurementRecord.from_outcomes(outcomes)
        l = record.first_desired
        site_kets = []
        for k, m in enumerate(outcomes, start=1):
            mb = kets_theta if k <= l else kets_zero
            site_kets.append(mb.ket(m))
        phi = reduce(np.kron, site_kets)
        red = np.einsum("aibcjd,i,j->abcd", rho_t, phi.conj(), phi,
                        optimize=True).reshape(4, 4)
        b_out = np.kron(PAULI_I, byproduct(record))
        rho_u += b_out @ red @ b_out.conj().T
    return rho_u


def assemble_rho_U(state, gate: GateSpec, mode: str = "grouped") -> np.ndarray:
    """Two-qubit post-measurement state rho_U = sum_m Tr_bulk[B P rho P B].

    ``mode`` selects the literal 3^N enumeration ("oracle", dense states up
    to N = 5) or the grouped-by-l evaluation ("grouped", MPO friendly).
    """
    if gate.axis == "x":
        state = rotated_for_x_axis(state)
    if mode == "grouped":
        return _assemble_grouped(state, gate.theta)
    if mode == "oracle":
        return _assemble_oracle(state, gate.theta)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# fidelity


def gate_fidelity(rho_u: np.ndarray, gate: GateSpec) -> FidelityBreakdown:
    """Stabilizer-form fidelity of rho_U against the ideal rotation resource.

    For X-axis gates rho_U is expected in the rotated frame (as produced by
    assemble_rho_U), where the breakdown takes the same form as for Z.
    """
    if rho_u.shape != (4, 4):
        raise ValueError("rho_U must be 4x4")
    tr = np.trace(rho_u).real
    if abs(tr - 1.0) > 1e-8:
        raise ValueError(f"rho_U must have unit trace, got {tr}")
    theta = gate.theta

    def c(p, q):
        return float(np.trace(rho_u @ np.kron(_PAULI[p], _PAULI[q])).real)

    term_ii = 0.25 * tr
    term_zz = 0.25 * c("Z", "Z")
    term_xx = 0.25 * (np.cos(theta) * c("X", "X") + np.sin(theta) * c("X", "Y"))
    term_xz = 0.25 * (-np.cos(theta) * c("Y", "Y") + np.sin(theta) * c("Y", "X"))
    return FidelityBreakdown(term_ii=term_ii, term_zz=term_zz,
                             term_xx=float(term_xx), term_xz=float(term_xz))


def fidelity_via_strings(state, theta: float, axis: str = "z") -> FidelityBreakdown:
    """Gate fidelity straight from string-operator expectations.

    The ZZ stabilizer term is a single untwisted string expectation; the two
    X-type terms are grouped sums over the switch site of twisted/untwisted
    strings.  Agrees with gate_fidelity(assemble_rho_U(...)).
    """
    gate = GateSpec(axis=axis, theta=theta)
    if gate.axis == "x":
        state = rotated_for_x_axis(state)
    theta = gate.theta
    n = _state_n_bulk(state)
    _, _, sz = spin1_operators()
    string_z = exp_i_pi_spin(sz)
    c_zz = -_expectation(
        state, [PAULI_Z] + [string_z] * n + [PAULI_Z]).real
    c_xx = _pauli_coefficient(state, PAULI_X, "x", theta)
    c_xy = _pauli_coefficient(state, PAULI_X, "y", theta)
    c_yx = _pauli_coefficient(state, PAULI_Y, "x", theta)
    c_yy = _pauli_coefficient(state, PAULI_Y, "y", theta)
    term_xx = 0.25 * (np.cos(theta) * c_xx + np.sin(theta) * c_xy)
    term_xz = 0.25 * (-np.cos(theta) * c_yy + np.sin(theta) * c_yx)
    return FidelityBreakdown(term_ii=0.25, term_zz=0.25 * float(c_zz),
                             term_xx=float(term_xx), term_xz=float(term_xz))


def identity_fidelity(state) -> float:
    """F_I = 1/4 - (1/4) sum over axes of the edge string correlators."""
    from .aklt import edge_string_correlator

    total = sum(edge_string_correlator(state, a) for a in "xyz")
    return 0.25 - 0.25 * total
