import numpy as np
import pytest

from phasesim import (PhaseField, ho_wavefunction, make_grid,
                      wigner_of_wavefunction)


@pytest.fixture(scope="session")
def grid128():
    return make_grid(128, 128, -8, 8, -8, 8)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64, 64, -8, 8, -8, 8)


@pytest.fixture(scope="session")
def grid16():
    return make_grid(16, 16, -8, 8, -8, 8)


@pytest.fixture(scope="session")
def ho_states(grid128):
    """Wigner eigenstates W_0..W_5 on the standard 128^2 grid, hbar = 1."""
    return [wigner_of_wavefunction(ho_wavefunction(n, grid128, 1.0))
            for n in range(6)]


def random_field(grid, rng, role="observable"):
    return PhaseField(grid, rng.standard_normal((grid.nq, grid.np_)), role)


def band_limited_field(grid, rng, keep=0.25):
    """Random field with spectrum confined to the central `keep` band."""
    modes = np.zeros((grid.nq, grid.np_), dtype=complex)
    kq = max(2, int(grid.nq * keep / 2))
    kp = max(2, int(grid.np_ * keep / 2))
    block = rng.standard_normal((2 * kq, 2 * kp)) \
        + 1j * rng.standard_normal((2 * kq, 2 * kp))
    centered = np.zeros_like(modes)
    centered[grid.nq // 2 - kq: grid.nq // 2 + kq,
             grid.np_ // 2 - kp: grid.np_ // 2 + kp] = block
    vals = np.fft.ifft2(np.fft.ifftshift(centered)).real
    vals /= np.max(np.abs(vals))
    return PhaseField(grid, vals)
