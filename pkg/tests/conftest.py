import numpy as np
import pytest

from aklt_lab.aklt import DensityMpo, build_aklt, dense_aklt_density
from aklt_lab.channels import apply_dense, apply_mpo, catalog_noise


def noisy_mpo(noise_id: int, p: float, n_bulk: int, steps: int) -> DensityMpo:
    """AKLT state after `steps` sweeps of a catalog noise, MPO route."""
    state = DensityMpo.from_pure_chain(build_aklt(n_bulk))
    ch = catalog_noise(noise_id, p)
    for _ in range(steps):
        for site in range(1, n_bulk + 1):
            state = apply_mpo(state, ch, site)
    return state


def noisy_dense(noise_id: int, p: float, n_bulk: int, steps: int) -> np.ndarray:
    """Same evolution on a dense density matrix, independent of the MPO path."""
    rho = dense_aklt_density(n_bulk)
    ch = catalog_noise(noise_id, p)
    dims = (2,) + (3,) * n_bulk + (2,)
    for _ in range(steps):
        for site in range(1, n_bulk + 1):
            rho = apply_dense(rho, ch, site, dims)
    return rho


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
