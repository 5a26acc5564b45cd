"""AKLT chain with edge spin-1/2s: pure MPS, mixed-state MPO, string correlators.

The pure state on N bulk spin-1 sites plus two edge spin-1/2s is

    psi(s_in, m_1..m_N, s_out) = A[s_in, :] . prod_i (P[m_i] A) . edge_out[:, s_out]

with A the 2x2 singlet matrix and P[m] the spin-1 projectors.  The bulk site
tensor P[m] A satisfies both canonical transfer identities exactly, and the
net boundary matrix ``edge_out = A^{-1} A^T = -1`` reproduces the slicing of
the trailing singlet into the out spin-1/2.

Mixed states are kept as a matrix product operator with one tensor per site,
indexed ``W[s, s', a, b]`` (ket physical, bra physical, left bond, right
bond).  Site-local noise never grows the bond dimension, so the MPO stays at
bond dimension 4 for arbitrarily many noise steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .tensor_core import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    exp_i_pi_spin,
    is_unitary,
    spin1_operators,
)

DENSE_VECTOR_CAP = 8   # 4 * 3^8 ~ 26k amplitudes
DENSE_MATRIX_CAP = 5   # 972 x 972 density matrices

SINGLET = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex) / np.sqrt(2.0)
SINGLET.setflags(write=False)

# spin-1 projectors of the valence-bond construction, m ordered (+1, 0, -1)
_P = np.zeros((3, 2, 2), dtype=complex)
_P[0] = [[2.0 / np.sqrt(3.0), 0.0], [0.0, 0.0]]
_P[1] = [[0.0, np.sqrt(2.0 / 3.0)], [np.sqrt(2.0 / 3.0), 0.0]]
_P[2] = [[0.0, 0.0], [0.0, 2.0 / np.sqrt(3.0)]]
_P.setflags(write=False)

SPIN1_BOND_PROJECTORS = _P

_AXES = {"x": 0, "y": 1, "z": 2}


def _axis_ops(axis: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(spin-1 S^a, spin-1 e^{i pi S^a}, edge Pauli) for axis in {x, y, z}."""
    if axis not in _AXES:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    s = spin1_operators()[_AXES[axis]]
    pauli = (PAULI_X, PAULI_Y, PAULI_Z)[_AXES[axis]]
    return s, exp_i_pi_spin(s), pauli


@dataclass(frozen=True)
class MpsChain:
    """Pure AKLT state with edge spin-1/2s as a matrix product state.

    Attributes:
        n_bulk: number of spin-1 sites N (>= 1).
        edge_in: 2x2 matrix, rows are the physical in-qubit states; equals
            the singlet matrix A for the AKLT state.
        bulk_tensors: array (N, 3, 2, 2); ``bulk_tensors[i, m]`` is the 2x2
            matrix P[m] A of site i+1, with m ordered (+1, 0, -1).
        edge_out: 2x2 matrix, columns are the physical out-qubit states;
            equals A^{-1} A^T = -identity for the AKLT state.
    """

    n_bulk: int
    edge_in: np.ndarray = field(repr=False)
    bulk_tensors: np.ndarray = field(repr=False)
    edge_out: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_bulk < 1:
            raise ValueError("n_bulk must be >= 1")
        if self.bulk_tensors.shape != (self.n_bulk, 3, 2, 2):
            raise ValueError("bulk_tensors must have shape (n_bulk, 3, 2, 2)")
        for arr in (self.edge_in, self.bulk_tensors, self.edge_out):
            arr.setflags(write=False)

    @property
    def phys_dims(self) -> tuple[int, ...]:
        return (2,) + (3,) * self.n_bulk + (2,)


@dataclass(frozen=True)
class ProjectiveRep:
    """Edge action of an on-site symmetry: u_g on the physical leg
    fractionalizes to ``exp(i phase_arg) V^dag Gamma V`` on the virtual legs.

    ``v`` is unitary with its first nonzero entry made real positive.
    """

    label: str
    v: np.ndarray
    phase: complex


def build_aklt(n_bulk: int) -> MpsChain:
    """The AKLT valence-bond state of ``n_bulk`` spin-1 sites with edge qubits."""
    if n_bulk < 1:
        raise ValueError("n_bulk must be >= 1")
    bulk = np.stack([np.stack([_P[m] @ SINGLET for m in range(3)])] * n_bulk)
    edge_out = -np.eye(2, dtype=complex)
    return MpsChain(n_bulk=n_bulk, edge_in=SINGLET.copy(), bulk_tensors=bulk,
                    edge_out=edge_out)


def check_canonical(chain: MpsChain, tol: float = 1e-10) -> tuple[bool, float]:
    """Verify both transfer-contraction identities at every bulk site.

    Left:  sum_m B[m]^dag B[m] = 1,  Right:  sum_m B[m] B[m]^dag = 1.
    Also checks the global norm.  Returns (ok, max deviation).
    """
    eye = np.eye(2)
    dev = 0.0
    for i in range(chain.n_bulk):
        b = chain.bulk_tensors[i]
        left = sum(m.conj().T @ m for m in b)
        right = sum(m @ m.conj().T for m in b)
        dev = max(dev, np.abs(left - eye).max(), np.abs(right - eye).max())
    dev = max(dev, abs(_norm_sq(chain) - 1.0))
    return dev < tol, float(dev)


def _norm_sq(chain: MpsChain) -> float:
    # left-to-right transfer contraction of <psi|psi>
    env = np.einsum("sa,sb->ab", chain.edge_in, chain.edge_in.conj())
    for i in range(chain.n_bulk):
        b = chain.bulk_tensors[i]
        env = np.einsum("ab,mac,mbd->cd", env, b, b.conj())
    out = np.einsum("ab,as,bs->", env, chain.edge_out, chain.edge_out.conj())
    return float(out.real)


def to_dense(chain: MpsChain) -> np.ndarray:
    """Full contraction to a state vector, index order (s_in, m_1..m_N, s_out)."""
    if chain.n_bulk > DENSE_VECTOR_CAP:
        raise ValueError(f"dense vector limited to n_bulk <= {DENSE_VECTOR_CAP}")
    # accumulate amp[(phys so far), 2_virtual]
    amp = chain.edge_in.reshape(2, 2)
    for i in range(chain.n_bulk):
        amp = np.einsum("ka,mab->kmb", amp, chain.bulk_tensors[i])
        amp = amp.reshape(-1, 2)
    amp = amp @ chain.edge_out
    return amp.reshape(-1)


def extract_projective_rep(chain: MpsChain, u_g: np.ndarray,
                           label: str = "") -> ProjectiveRep:
    """Virtual-leg representation V of an on-site symmetry u_g.

    Builds the u_g-inserted transfer map X -> sum_{mn} u_{mn} B[n] X B[m]^dag
    on the 2x2 bond space and takes its dominant eigenvector, which is V^dag
    with eigenvalue e^{i phase}.  A dominant eigenvalue of modulus below
    1 - 1e-6 means u_g is not a symmetry of the state.
    """
    if u_g.shape != (3, 3) or not is_unitary(u_g, atol=1e-10):
        raise ValueError("u_g must be a 3x3 unitary")
    b = chain.bulk_tensors[0]
    rotated = np.einsum("mn,nab->mab", u_g, b)
    t = np.einsum("mab,mcd->acbd", rotated, b.conj()).reshape(4, 4)
    w, vecs = np.linalg.eig(t)
    k = int(np.argmax(np.abs(w)))
    lam = w[k]
    if abs(lam) < 1.0 - 1e-6:
        raise ValueError(
            f"u_g is not a symmetry of the state (|lambda| = {abs(lam):.6f})")
    vdag = vecs[:, k].reshape(2, 2)
    v = vdag.conj().T
    # unitarize (eigenvector scale is arbitrary) and fix the phase gauge
    v = v * np.sqrt(2.0) / np.linalg.norm(v)
    flat = v.reshape(-1)
    j = int(np.argmax(np.abs(flat) > 1e-8))
    v = v * (abs(flat[j]) / flat[j])
    # residual of the fractionalization identity fixes the phase
    conj = np.einsum("ab,mbc,cd->mad", v.conj().T, b, v)
    num = np.vdot(conj, rotated)
    phase = num / abs(num)
    if np.abs(rotated - phase * conj).max() > 1e-10:
        raise ValueError("fractionalization identity violated beyond tolerance")
    return ProjectiveRep(label=label, v=v, phase=complex(phase))


# ---------------------------------------------------------------------------
# mixed states


class DensityMpo:
    """Density operator of the chain as a matrix product operator.

    ``tensors[i]`` has shape (d_i, d_i, D_left, D_right) with physical
    dimensions (2, 3, ..., 3, 2) and 1-dimensional boundary bonds.  Tensors
    are treated as immutable; operations return new instances.
    """

    def __init__(self, tensors: list[np.ndarray]):
        if len(tensors) < 3:
            raise ValueError("need at least one bulk site between the edges")
        self.tensors = [np.asarray(t, dtype=complex) for t in tensors]
        for t in self.tensors:
            t.setflags(write=False)
        self.n_bulk = len(tensors) - 2
        self.phys_dims = tuple(t.shape[0] for t in self.tensors)
        if self.phys_dims != (2,) + (3,) * self.n_bulk + (2,):
            raise ValueError(f"unexpected physical dimensions {self.phys_dims}")

    @classmethod
    def from_pure_chain(cls, chain: MpsChain) -> "DensityMpo":
        """|psi><psi| of an MpsChain, bond dimension 4."""
        g_in = chain.edge_in.reshape(2, 1, 2)
        g_out = chain.edge_out.T.reshape(2, 2, 1)
        tensors = [np.einsum("sab,tcd->stacbd", g_in, g_in.conj()).reshape(2, 2, 1, 4)]
        for i in range(chain.n_bulk):
            b = chain.bulk_tensors[i]
            tensors.append(
                np.einsum("mab,ncd->mnacbd", b, b.conj()).reshape(3, 3, 4, 4))
        tensors.append(
            np.einsum("sab,tcd->stacbd", g_out, g_out.conj()).reshape(2, 2, 4, 1))
        return cls(tensors)

    @classmethod
    def maximally_mixed(cls, n_bulk: int) -> "DensityMpo":
        """Unit-trace maximally mixed state, bond dimension 1."""
        dims = (2,) + (3,) * n_bulk + (2,)
        return cls([(np.eye(d, dtype=complex) / d).reshape(d, d, 1, 1)
                    for d in dims])

    def with_site_tensor(self, site: int, tensor: np.ndarray) -> "DensityMpo":
        ts = list(self.tensors)
        if tensor.shape != ts[site].shape:
            raise ValueError("replacement tensor must keep its shape")
        ts[site] = tensor
        return DensityMpo(ts)

    def scaled(self, factor: complex) -> "DensityMpo":
        ts = list(self.tensors)
        ts[0] = ts[0] * factor
        return DensityMpo(ts)

    def trace(self) -> complex:
        env = np.array([1.0 + 0.0j])
        for t in self.tensors:
            env = env @ np.einsum("ssab->ab", t)
        return complex(env[0])

    def normalized(self) -> "DensityMpo":
        return self.scaled(1.0 / self.trace())

    def expectation(self, site_ops) -> complex:
        """Tr[rho O] for a product operator; ``site_ops[i]`` is a (d_i, d_i)
        matrix or None for identity."""
        if len(site_ops) != len(self.tensors):
            raise ValueError("need one operator entry per site")
        env = np.array([1.0 + 0.0j])
        for t, op in zip(self.tensors, site_ops):
            if op is None:
                env = env @ np.einsum("ssab->ab", t)
            else:
                env = env @ np.einsum("stab,ts->ab", t, op)
        return complex(env[0])

    def to_dense_matrix(self) -> np.ndarray:
        """Contract to the full density matrix (small chains only)."""
        if self.n_bulk > DENSE_MATRIX_CAP:
            raise ValueError(f"dense matrix limited to n_bulk <= {DENSE_MATRIX_CAP}")
        acc = np.ones((1, 1, 1), dtype=complex)  # (ket, bra, bond)
        for t in self.tensors:
            acc = np.einsum("KBa,stab->KsBtb", acc, t)
            k, s, bb, tt, b = acc.shape
            acc = acc.reshape(k * s, bb * tt, b)
        return acc[:, :, 0]


def dense_aklt_density(n_bulk: int) -> np.ndarray:
    """Dense |psi><psi| of the pure AKLT chain (independent of the MPO path)."""
    v = to_dense(build_aklt(n_bulk))
    return np.outer(v, v.conj())


def _product_expectation(state, site_ops) -> complex:
    """Tr[rho O] for DensityMpo or dense rho, O a product of site operators."""
    if isinstance(state, DensityMpo):
        return state.expectation(site_ops)
    rho = np.asarray(state)
    full = reduce(np.kron, [op if op is not None else np.eye(d, dtype=complex)
                            for op, d in zip(site_ops, _dims_from_rho(rho, site_ops))])
    return complex(np.trace(rho @ full))


def _dims_from_rho(rho: np.ndarray, site_ops) -> tuple[int, ...]:
    n_bulk = len(site_ops) - 2
    dims = (2,) + (3,) * n_bulk + (2,)
    if rho.shape != (int(np.prod(dims)), int(np.prod(dims))):
        raise ValueError("density matrix shape inconsistent with site count")
    return dims


def _n_bulk_of(state) -> int:
    if isinstance(state, DensityMpo):
        return state.n_bulk
    dim = np.asarray(state).shape[0]
    n = int(round(np.log(dim / 4) / np.log(3)))
    if 4 * 3 ** n != dim:
        raise ValueError(f"state dimension {dim} is not 4 * 3^N")
    return n


def string_order(state, axis: str, i: int, j: int) -> float:
    """String order parameter <S_i^a exp(i pi sum_{k=i}^{j-1} S_k^a) S_j^a>.

    ``i`` and ``j`` are 1-based bulk site indices with 1 <= i < j <= N; the
    string includes site i but not site j.  Accepts a DensityMpo or a dense
    density matrix.
    """
    n = _n_bulk_of(state)
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= {n}, got i={i}, j={j}")
    s, e, _ = _axis_ops(axis)
    ops: list = [None] * (n + 2)
    ops[i] = s @ e
    for k in range(i + 1, j):
        ops[k] = e
    ops[j] = s
    val = _product_expectation(state, ops)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"string order has imaginary residue {val.imag:.2e}")
    return float(val.real)


def edge_string_correlator(state, axis: str) -> float:
    """Tr[rho X^(a)_in (prod_j e^{i pi S_j^a}) X^(a)_out] across the whole chain.

    Equals -1 on the pure AKLT state for every axis; the identity-gate
    fidelity is 1/4 - (1/4) * sum over axes of this correlator.
    """
    n = _n_bulk_of(state)
    _, e, pauli = _axis_ops(axis)
    ops = [pauli] + [e] * n + [pauli]
    val = _product_expectation(state, ops)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"edge string correlator has imaginary residue {val.imag:.2e}")
    return float(val.real)
