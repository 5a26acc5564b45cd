"""Wire-basis MPO tensors and the diagonal-invariance criterion.

In the wire basis {|x> = |alpha_0>, |y> = i|beta_0>, |z> = |gamma>} the AKLT
site tensor is a Pauli matrix (times 1/sqrt(3)), so the MPO tensor of the
pure state has diagonal blocks sigma_s (x) sigma_s^*.  A site-local channel
leaves these diagonal blocks unchanged exactly when it is strongly symmetric
under the canonical Z2xZ2, which is the tensor-level face of the
identity-gate fidelity criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aklt import DensityMpo, build_aklt
from .channels import KrausChannel, apply_mpo
from .tensor_core import measurement_kets

WIRE_LABELS = ("x", "y", "z")


def wire_basis() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Kets (|x>, |y>, |z>) = (|alpha_0>, i|beta_0>, |gamma>)."""
    a0, b0, g = measurement_kets(0.0)
    return a0, 1j * b0, g


@dataclass(frozen=True)
class WireBasisMpoTensor:
    """Site MPO tensor with both physical legs in the wire basis.

    ``blocks[(s, s')]`` is the virtual 4x4 block; normalization is fixed so
    the pure AKLT state gives exactly sigma_s (x) sigma_s^* on the diagonal.
    """

    blocks: dict

    def diagonal(self) -> dict:
        return {s: self.blocks[(s, s)] for s in WIRE_LABELS}


def _to_wire(tensor: np.ndarray) -> WireBasisMpoTensor:
    kets = wire_basis()
    t = np.einsum("sm,mnab,tn->stab",
                  np.stack([k.conj() for k in kets]),
                  tensor,
                  np.stack(kets))
    # scale so the pure diagonal blocks are unit Pauli tensor squares
    t = 3.0 * t
    blocks = {(si, sj): t[i, j]
              for i, si in enumerate(WIRE_LABELS)
              for j, sj in enumerate(WIRE_LABELS)}
    return WireBasisMpoTensor(blocks=blocks)


def mpo_tensor_wire(state: DensityMpo, site: int) -> WireBasisMpoTensor:
    """Wire-basis MPO tensor of one bulk site of the state."""
    if not 1 <= site <= state.n_bulk:
        raise ValueError(f"site {site} is not a bulk site")
    return _to_wire(state.tensors[site])


def pure_site_tensor_wire() -> WireBasisMpoTensor:
    """Wire-basis MPO tensor of a pure AKLT bulk site."""
    state = DensityMpo.from_pure_chain(build_aklt(1))
    return mpo_tensor_wire(state, 1)


def diagonal_invariance_check(ch: KrausChannel, atol: float = 1e-10) -> bool:
    """Whether the channel leaves the diagonal wire-basis blocks of the AKLT
    site tensor unchanged.

    Renormalized channels are compared after dividing out the isotropic
    trace factor, matching the renormalization the state itself undergoes.
    Coincides with strong Z2xZ2 symmetry of the channel.
    """
    pure = DensityMpo.from_pure_chain(build_aklt(1))
    decohered = apply_mpo(pure, ch, 1)  # apply_mpo already renormalizes
    ref = mpo_tensor_wire(pure, 1).diagonal()
    got = mpo_tensor_wire(decohered, 1).diagonal()
    return all(np.abs(got[s] - ref[s]).max() <= atol for s in WIRE_LABELS)
