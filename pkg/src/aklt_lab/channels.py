"""Site-local noise channels and their weak/strong symmetry classification.

A channel acts on one bulk spin-1 site as

    E(rho) = (1 - p) rho + (p/n) sum_a K_a rho K_a^dag .

The catalog (noises 1-4) fixes the four standard Kraus sets.  The raw
spin-product sets of noises 2 and 3 are not trace preserving, so their
operators are normalized to unitary Frobenius weight at construction (see
catalog_noise), after which all four channels are exactly CPTP.  Channels
built from arbitrary user operators may still fail completeness; those are
applied literally and the state is renormalized by its trace
(``tp_renormalize``), which is an exact scalar whenever sum K^dag K is
proportional to the identity.

Symmetry notions, for a group element acting as rho -> U rho U^dag (or with
an extra complex conjugation when antiunitary):

* weak symmetry: the channel commutes with the conjugation action as a
  superoperator;
* strong symmetry: every Kraus operator (including the identity branch) is
  an eigenoperator of the conjugation with one common unit phase.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .aklt import DensityMpo
from .tensor_core import (
    dagger,
    exp_i_pi_spin,
    is_unitary,
    measurement_kets,
    rotated_spin_ops,
    spin1_operators,
)

_SYM_ATOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Weighted Kraus set acting on one spin-1 site.

    ``tp_renormalize`` is set when (1-p) 1 + (p/n) sum K^dag K deviates from
    the identity, in which case applying the channel is followed by dividing
    the state by its trace.
    """

    label: str
    p: float
    ops: tuple[np.ndarray, ...]
    tp_renormalize: bool

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("error rate p must lie in [0, 1]")
        if len(self.ops) < 1:
            raise ValueError("need at least one Kraus operator")
        for k in self.ops:
            if k.shape != (3, 3):
                raise ValueError("Kraus operators must be 3x3")
            k.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.ops)

    def kraus_sum(self) -> np.ndarray:
        """(1-p) 1 + (p/n) sum K^dag K; the identity iff trace preserving."""
        acc = (1.0 - self.p) * np.eye(3, dtype=complex)
        for k in self.ops:
            acc += (self.p / self.n) * (dagger(k) @ k)
        return acc

    def full_ops(self) -> list[np.ndarray]:
        """All Kraus operators including the (1-p) identity branch, weighted."""
        ops = []
        if self.p < 1.0:
            ops.append(np.sqrt(1.0 - self.p) * np.eye(3, dtype=complex))
        w = np.sqrt(self.p / self.n)
        ops.extend(w * k for k in self.ops)
        return ops

    def trace_factor(self) -> float:
        """State trace scale per application when sum K^dag K is isotropic."""
        s = self.kraus_sum()
        return float(np.trace(s).real / 3.0)


def make_channel(label: str, p: float, ops) -> KrausChannel:
    ops = tuple(np.asarray(k, dtype=complex) for k in ops)
    probe = KrausChannel(label=label, p=p, ops=ops, tp_renormalize=False)
    tp = np.abs(probe.kraus_sum() - np.eye(3)).max() <= _SYM_ATOL
    return KrausChannel(label=label, p=p, ops=ops, tp_renormalize=not tp)


def _unit_trace_normalized(k: np.ndarray) -> np.ndarray:
    """Scale a Kraus operator to tr(K^dag K) = 3, the value of a 3x3 unitary."""
    return k * np.sqrt(3.0 / np.trace(dagger(k) @ k).real)


def catalog_noise(noise_id: int, p: float) -> KrausChannel:
    """Catalog channels:

    1: {1, e^{i pi Sx}, e^{i pi Sy}, e^{i pi Sz}}
    2: {1, the six orderings of Sx Sy Sz}
    3: {1, Sx Sy, Sy Sz, Sz Sx}
    4: {1, e^{i pi Sz}}

    The raw spin-product sets of noises 2 and 3 violate the completeness
    relation, so each operator is scaled to tr(K^dag K) = 3 (a no-op for the
    unitary sets); with that normalization all four catalog channels are
    exactly trace preserving while every symmetry verdict, fixed point and
    asymptote of the raw sets is unchanged.
    """
    sx, sy, sz = spin1_operators()
    eye = np.eye(3, dtype=complex)
    if noise_id == 1:
        ops = [eye, exp_i_pi_spin(sx), exp_i_pi_spin(sy), exp_i_pi_spin(sz)]
    elif noise_id == 2:
        ops = [eye] + [reduce(np.matmul, perm)
                       for perm in itertools.permutations((sx, sy, sz))]
    elif noise_id == 3:
        ops = [eye, sx @ sy, sy @ sz, sz @ sx]
    elif noise_id == 4:
        ops = [eye, exp_i_pi_spin(sz)]
    else:
        raise ValueError(f"unknown noise id {noise_id}")
    return make_channel(f"noise{noise_id}", p, [_unit_trace_normalized(k)
                                                for k in ops])


def channel_from_kraus(label: str, p: float, ops) -> KrausChannel:
    """Channel from user-supplied 3x3 Kraus operators in the standard
    (1-p, p/n)-weighted mixture form."""
    return make_channel(label, p, ops)


def random_tp_channel(rng: np.random.Generator, n_ops: int = 2) -> KrausChannel:
    """Random trace-preserving channel: Gaussian Kraus pair, Gram-normalized."""
    raw = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
           for _ in range(n_ops)]
    gram = sum(dagger(k) @ k for k in raw)
    linv = np.linalg.inv(np.linalg.cholesky(gram)).conj().T
    # K -> K L^{-dag} so that sum K^dag K = 1; embed with p = 1, weights n
    ops = [np.sqrt(n_ops) * (k @ linv) for k in raw]
    return make_channel("random", 1.0, ops)


def random_strong_channel(rng: np.random.Generator, n_ops: int = 2) -> KrausChannel:
    """Random TP channel diagonal in the theta=0 measurement basis, hence
    strongly symmetric under the canonical Z2xZ2."""
    kets = measurement_kets(0.0)
    basis = np.stack(kets, axis=1)  # columns alpha0, beta0, gamma
    diags = rng.normal(size=(n_ops, 3)) + 1j * rng.normal(size=(n_ops, 3))
    norms = np.sqrt((np.abs(diags) ** 2).sum(axis=0))
    diags = diags / norms[None, :]
    ops = [np.sqrt(n_ops) * (basis @ np.diag(d) @ dagger(basis)) for d in diags]
    return make_channel("random-diagonal", 1.0, ops)


# ---------------------------------------------------------------------------
# application to states


def apply_dense(rho: np.ndarray, ch: KrausChannel, site: int,
                dims: tuple[int, ...]) -> np.ndarray:
    """Apply the channel to one bulk site of a dense density matrix.

    ``dims`` is the full physical layout (2, 3, ..., 3, 2); ``site`` is the
    1-based bulk index, so it addresses dims[site] which must equal 3.
    """
    if not 1 <= site <= len(dims) - 2:
        raise ValueError(f"site {site} is not a bulk site")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise ValueError("input state must have unit trace")
    pre = int(np.prod(dims[:site]))
    post = int(np.prod(dims[site + 1:]))
    r = rho.reshape(pre, 3, post, pre, 3, post)
    out = (1.0 - ch.p) * r
    for k in ch.ops:
        out = out + (ch.p / ch.n) * np.einsum(
            "st,atbucv,cw->asbuwv", k, r, dagger(k))
    out = out.reshape(rho.shape)
    if ch.tp_renormalize:
        out = out / np.trace(out)
    return out


def apply_mpo(state: DensityMpo, ch: KrausChannel, site: int) -> DensityMpo:
    """Apply the channel to one bulk site of an MPO state.

    The site tensor W[s, s'] becomes (1-p) W + (p/n) sum_a K_a W K_a^dag on
    the physical legs; bond dimensions are unchanged.  Renormalized channels
    divide the result by its global trace.
    """
    if not 1 <= site <= state.n_bulk:
        raise ValueError(f"site {site} is not a bulk site")
    w = state.tensors[site]
    out = (1.0 - ch.p) * w
    for k in ch.ops:
        out = out + (ch.p / ch.n) * np.einsum("st,tuab,vu->svab", k, w, k.conj())
    new = state.with_site_tensor(site, out)
    if ch.tp_renormalize:
        new = new.normalized()
    return new


# ---------------------------------------------------------------------------
# group representations


@dataclass(frozen=True)
class GroupElement:
    label: str
    u: np.ndarray
    antiunitary: bool = False

    def __post_init__(self):
        self.u.setflags(write=False)


@dataclass(frozen=True)
class GroupRep:
    label: str
    elements: tuple[GroupElement, ...]


def canonical_rep() -> GroupRep:
    """Z2xZ2 as {1, e^{i pi Sx}, e^{i pi Sy}, e^{i pi Sz}}."""
    sx, sy, sz = spin1_operators()
    els = [GroupElement("1", np.eye(3, dtype=complex)),
           GroupElement("x", exp_i_pi_spin(sx)),
           GroupElement("y", exp_i_pi_spin(sy)),
           GroupElement("z", exp_i_pi_spin(sz))]
    return GroupRep("z2z2", tuple(els))


def rotated_rep(theta: float) -> GroupRep:
    """Z2xZ2 in the rotated form {1, e^{i pi Sx~(theta)}, e^{i pi Sy~(theta)}, e^{i pi Sz}}."""
    sxt, syt, sz = rotated_spin_ops(theta)
    els = [GroupElement("1", np.eye(3, dtype=complex)),
           GroupElement("x~", exp_i_pi_spin(sxt)),
           GroupElement("y~", exp_i_pi_spin(syt)),
           GroupElement("z", exp_i_pi_spin(sz))]
    return GroupRep(f"z2z2-rotated({theta:g})", tuple(els))


def time_reversal_rep() -> GroupRep:
    """Time reversal acting as e^{i pi Sy} followed by complex conjugation."""
    _, sy, _ = spin1_operators()
    els = [GroupElement("1", np.eye(3, dtype=complex)),
           GroupElement("T", exp_i_pi_spin(sy), antiunitary=True)]
    return GroupRep("time-reversal", tuple(els))


# ---------------------------------------------------------------------------
# symmetry decisions


def _linear_superoperator(weighted_ops) -> np.ndarray:
    """Superoperator of rho -> sum_a K_a rho K_a^dag on row-major vec(rho)."""
    acc = np.zeros((9, 9), dtype=complex)
    for k in weighted_ops:
        acc += np.kron(k, k.conj())
    return acc


def channel_superoperator(ch: KrausChannel) -> np.ndarray:
    return _linear_superoperator(ch.full_ops())


def is_weakly_symmetric(ch: KrausChannel, u: np.ndarray,
                        antiunitary: bool = False) -> bool:
    """Whether the channel commutes with the conjugation action of ``u``.

    For an antiunitary element the complex conjugation is pulled through the
    channel, which amounts to comparing U E~ and E U at the superoperator
    level, E~ being the channel with conjugated Kraus operators.
    """
    if not is_unitary(u, atol=1e-10):
        raise ValueError("u must be unitary")
    s_u = np.kron(u, u.conj())
    s_e = channel_superoperator(ch)
    if not antiunitary:
        return bool(np.abs(s_u @ s_e - s_e @ s_u).max() <= _SYM_ATOL)
    s_e_conj = _linear_superoperator([k.conj() for k in ch.full_ops()])
    return bool(np.abs(s_u @ s_e_conj - s_e @ s_u).max() <= _SYM_ATOL)


def is_strongly_symmetric(ch: KrausChannel, u: np.ndarray,
                          antiunitary: bool = False
                          ) -> tuple[bool, complex | None]:
    """Whether every Kraus operator is an eigenoperator of conjugation by
    ``u`` with one common phase; returns (verdict, phase).

    The identity branch is part of the Kraus set, so for p < 1 the common
    phase can only be +1.  Antiunitary elements conjugate the operator
    entries first (Theta K Theta^{-1} = U K* U^dag).
    """
    if not is_unitary(u, atol=1e-10):
        raise ValueError("u must be unitary")
    phases = []
    for k in ch.full_ops():
        kk = k.conj() if antiunitary else k
        conj = u @ kk @ dagger(u)
        nrm = np.vdot(k, k).real
        if nrm < 1e-30:
            continue
        lam = np.vdot(k, conj) / nrm
        if np.abs(conj - lam * k).max() > _SYM_ATOL:
            return False, None
        phases.append(lam)
    common = phases[0]
    if any(abs(ph - common) > _SYM_ATOL for ph in phases):
        return False, None
    return True, complex(common / abs(common))


def heisenberg_image(ch: KrausChannel, u: np.ndarray,
                     antiunitary: bool = False) -> np.ndarray:
    """(1-p) U + (p/n) sum K^dag U K(*), the adjoint-channel image of U.

    For trace-preserving channels this is proportional to U exactly when the
    channel is strongly symmetric; used as a cross-check of the per-Kraus
    decision.
    """
    acc = (1.0 - ch.p) * u
    for k in ch.ops:
        kk = k.conj() if antiunitary else k
        acc += (ch.p / ch.n) * (dagger(k) @ u @ kk)
    return acc


def projector_commutation_check(ch: KrausChannel, theta: float,
                                atol: float = _SYM_ATOL) -> bool:
    """Measurement-projector condition for strong symmetry of the rotated
    representation at angle theta.

    Checks that the full Kraus set satisfies sum K^dag P(m) K = lambda P(m)
    for all three basis projectors with one common scalar lambda; lambda = 1
    for trace-preserving channels, and equals the channel's trace factor for
    the renormalized catalog entries.
    """
    kets = measurement_kets(theta)
    full = ch.full_ops()
    lam = None
    for ket in kets:
        proj = np.outer(ket, ket.conj())
        img = sum(dagger(k) @ proj @ k for k in full)
        if lam is None:
            lam = np.vdot(proj, img) / np.vdot(proj, proj)
        if np.abs(img - lam * proj).max() > atol:
            return False
    return True


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ElementVerdict:
    label: str
    strong: bool
    weak: bool
    phase: complex | None


@dataclass(frozen=True)
class SymmetryReport:
    channel_label: str
    rep_label: str
    elements: tuple[ElementVerdict, ...]

    @property
    def strong(self) -> bool:
        return all(e.strong for e in self.elements)

    @property
    def weak(self) -> bool:
        return all(e.weak for e in self.elements)

    @property
    def verdict(self) -> str:
        if self.strong:
            return "S.S."
        if self.weak:
            return "W.S."
        return "none"


def symmetry_report(ch: KrausChannel, rep: GroupRep) -> SymmetryReport:
    verdicts = []
    for el in rep.elements:
        strong, phase = is_strongly_symmetric(ch, el.u, el.antiunitary)
        weak = is_weakly_symmetric(ch, el.u, el.antiunitary)
        verdicts.append(ElementVerdict(el.label, strong, weak, phase))
    return SymmetryReport(ch.label, rep.label, tuple(verdicts))


def classify_table1(p: float) -> dict[int, dict[str, SymmetryReport]]:
    """Symmetry verdicts of all four catalog noises under Z2xZ2 and time
    reversal; reproduces the eight table cells."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    z2z2 = canonical_rep()
    tr = time_reversal_rep()
    out: dict[int, dict[str, SymmetryReport]] = {}
    for nid in (1, 2, 3, 4):
        ch = catalog_noise(nid, p)
        out[nid] = {"z2z2": symmetry_report(ch, z2z2),
                    "time_reversal": symmetry_report(ch, tr)}
    return out
