"""Lens-array beamspace transform and beam bookkeeping.

The lens front-end acts as a spatial DFT: multiplying the channel by a
unitary matrix whose rows are conjugated steering vectors on the uniform
spatial-frequency grid (n - (N+1)/2) / N, n = 1..N. Row b of the
transformed channel is the content of angular beam b. Beam indices are
1-based throughout the public API.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet

__all__ = [
    "LensMatrix",
    "BeamSet",
    "beamspace_grid",
    "lens_dft_matrix",
    "to_beamspace",
    "reduce",
    "beam_energy_profile",
]


@dataclass
class LensMatrix:
    """Unitary N x N spatial-DFT matrix of the lens."""

    U_mat: np.ndarray

    @property
    def n_ant(self) -> int:
        return self.U_mat.shape[0]


@dataclass
class BeamSet:
    """Ordered set of selected beams (1-based indices, no duplicates)."""

    beams: list[int]
    capacity: int

    def __post_init__(self) -> None:
        self.beams = [int(b) for b in self.beams]
        if len(set(self.beams)) != len(self.beams):
            raise ValueError(f"duplicate beam indices in {self.beams}")
        if len(self.beams) > self.capacity:
            raise ValueError(
                f"{len(self.beams)} beams exceed capacity {self.capacity}"
            )
        if any(b < 1 for b in self.beams):
            raise ValueError("beam indices are 1-based and must be >= 1")

    def __len__(self) -> int:
        return len(self.beams)

    def indices0(self) -> np.ndarray:
        """0-based row indices for numpy slicing."""
        return np.asarray(self.beams, dtype=int) - 1


def beamspace_grid(n_ant: int) -> np.ndarray:
    """Spatial frequencies of the N lens beams: (n - (N+1)/2) / N, n = 1..N."""
    n = np.arange(1, n_ant + 1)
    return (n - (n_ant + 1) / 2.0) / n_ant


def lens_dft_matrix(n_ant: int) -> LensMatrix:
    """Lens transform whose row n is steering_vector(N, grid_n) conjugated."""
    if n_ant < 1:
        raise ValueError(f"antenna count must be >= 1, got {n_ant}")
    grid = beamspace_grid(n_ant)
    m = np.arange(n_ant)
    U_mat = np.exp(-2j * np.pi * np.outer(grid, m)) / np.sqrt(n_ant)
    return LensMatrix(U_mat=U_mat)


def to_beamspace(channels: ChannelSet | np.ndarray, lens: LensMatrix) -> np.ndarray:
    """Apply the lens transform per subcarrier: returns N x U x K tensor.

    Unitary, so per-subcarrier Frobenius energy is preserved.
    """
    H = channels.H if isinstance(channels, ChannelSet) else np.asarray(channels)
    if H.ndim != 3 or H.shape[0] != lens.n_ant:
        raise ValueError(
            f"channel tensor shape {H.shape} does not match lens size {lens.n_ant}"
        )
    N, U, K = H.shape
    return (lens.U_mat @ H.reshape(N, U * K)).reshape(N, U, K)


def reduce(beam_tensor: np.ndarray, beam_set: BeamSet) -> np.ndarray:
    """Keep only the selected beam rows: returns |B| x U x K tensor."""
    if len(beam_set) == 0:
        raise ValueError("beam set is empty")
    n_ant = beam_tensor.shape[0]
    if any(b > n_ant for b in beam_set.beams):
        raise ValueError(f"beam index out of [1, {n_ant}]: {beam_set.beams}")
    return beam_tensor[beam_set.indices0()]


def beam_energy_profile(beam_tensor: np.ndarray, u: int) -> np.ndarray:
    """Band-averaged energy of user u per beam: (1/K) sum_k |H~[b, u, k]|^2."""
    if not 0 <= u < beam_tensor.shape[1]:
        raise ValueError(f"user index {u} out of range")
    return np.mean(np.abs(beam_tensor[:, u, :]) ** 2, axis=1)
