"""Wideband multi-user spatial channel generation.

The channel of each user is a sum of L rays. Every ray has a physical
angle (through sin(theta)), a delay and a complex gain. On subcarrier k
the ray contributes

    subcarrier_path_gain(alpha, tau, k) * steering_vector(N, phi_k)

where phi_k = (f_k / c) * d * sin(theta) depends on the subcarrier
frequency f_k: a ray's steering direction drifts across the band (beam
squint). The per-subcarrier gain aggregates the raised-cosine-shaped
delay taps that fall inside the cyclic prefix.
"""

from dataclasses import dataclass
import struct

import numpy as np

from .config import SystemConfig

__all__ = [
    "UserPathParams",
    "ChannelSet",
    "subcarrier_frequency",
    "steering_vector",
    "spatial_aod",
    "raised_cosine",
    "sample_user_params",
    "subcarrier_path_gain",
    "frequency_channel",
    "dump_channel_set",
    "load_channel_set",
]


@dataclass
class UserPathParams:
    """Physical parameters of one user's L rays; index 0 is the LOS ray."""

    sin_theta: np.ndarray  # (L,), in [-1/2, 1/2]
    tau: np.ndarray        # (L,), delays in seconds, >= 0
    alpha: np.ndarray      # (L,), complex gains

    def __post_init__(self) -> None:
        self.sin_theta = np.asarray(self.sin_theta, dtype=float)
        self.tau = np.asarray(self.tau, dtype=float)
        self.alpha = np.asarray(self.alpha, dtype=complex)
        L = self.sin_theta.shape[0]
        if self.tau.shape != (L,) or self.alpha.shape != (L,):
            raise ValueError("sin_theta, tau and alpha must have equal length")
        if np.any(np.abs(self.sin_theta) > 0.5):
            raise ValueError("sin_theta entries must lie in [-1/2, 1/2]")
        if np.any(self.tau < 0):
            raise ValueError("delays must be >= 0")


@dataclass
class ChannelSet:
    """Spatial channels of one realization: H[n, u, k], shape N x U x K."""

    H: np.ndarray
    realization_id: int = 0

    def __post_init__(self) -> None:
        self.H = np.asarray(self.H, dtype=complex)
        if self.H.ndim != 3:
            raise ValueError(f"H must be a rank-3 tensor, got shape {self.H.shape}")
        if not np.all(np.isfinite(self.H.view(float))):
            raise ValueError("H contains non-finite entries")


def subcarrier_frequency(cfg: SystemConfig, k: int) -> float:
    """Frequency of subcarrier k (1-based), symmetric about f_c."""
    if not 1 <= k <= cfg.K:
        raise ValueError(f"subcarrier index must be in [1, {cfg.K}], got {k}")
    return cfg.f_c + (cfg.B / cfg.K) * (k - 1 - (cfg.K - 1) / 2.0)


def steering_vector(n_ant: int, phi: float) -> np.ndarray:
    """Unit-norm ULA response: entry n is exp(j 2 pi phi n) / sqrt(N), n = 0..N-1."""
    if n_ant < 1:
        raise ValueError(f"antenna count must be >= 1, got {n_ant}")
    n = np.arange(n_ant)
    return np.exp(2j * np.pi * phi * n) / np.sqrt(n_ant)


def spatial_aod(f: float, d: float, c: float, sin_theta: float) -> float:
    """Spatial frequency (f / c) * d * sin_theta.

    Linear in f: the same physical angle maps to different beamspace
    directions at different subcarriers, which is the beam-squint effect.
    """
    if f <= 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    return (f / c) * d * sin_theta


def raised_cosine(t, T_s: float, rolloff: float):
    """Raised-cosine pulse sampled at times t (seconds).

    Normalized so raised_cosine(0) = 1 and zero at nonzero integer
    multiples of T_s. The removable singularity at |t| = T_s/(2*rolloff)
    is filled with its limit value (pi/4) * sinc(1/(2*rolloff)).
    """
    x = np.asarray(t, dtype=float) / T_s
    out = np.sinc(x)
    if rolloff > 0:
        den = 1.0 - (2.0 * rolloff * x) ** 2
        near_pole = np.isclose(den, 0.0, atol=1e-10)
        safe_den = np.where(near_pole, 1.0, den)
        out = out * np.cos(np.pi * rolloff * x) / safe_den
        if np.any(near_pole):
            limit = (np.pi / 4.0) * np.sinc(1.0 / (2.0 * rolloff))
            out = np.where(near_pole, limit, out)
    return out if out.ndim else float(out)


def sample_user_params(cfg: SystemConfig, rng: np.random.Generator) -> list[UserPathParams]:
    """Draw the per-user ray parameters of one channel realization.

    sin_theta ~ U[-1/2, 1/2] i.i.d., delays ~ U[0, (N_Q - 1) T_s] so every
    ray stays inside the cyclic prefix, LOS gain ~ CN(0, 1) and NLOS gains
    ~ CN(0, nlos_gain_var). Deterministic given the generator state.
    """
    U, L = cfg.U, cfg.L
    sin_theta = rng.uniform(-0.5, 0.5, size=(U, L))
    tau = rng.uniform(0.0, (cfg.N_Q - 1) * cfg.T_s, size=(U, L))
    alpha = (rng.standard_normal((U, L)) + 1j * rng.standard_normal((U, L))) / np.sqrt(2.0)
    if L > 1:
        alpha[:, 1:] *= np.sqrt(cfg.nlos_gain_var)
    return [UserPathParams(sin_theta[u], tau[u], alpha[u]) for u in range(U)]


def subcarrier_path_gain(alpha: complex, tau: float, k: int, cfg: SystemConfig) -> complex:
    """Aggregate complex gain of one ray on subcarrier k (1-based).

    Sums the ray's raised-cosine tap weights over the cyclic prefix with
    the DFT phases exp(-j 2 pi k q / K), q = 1..N_Q. A delay landing
    exactly on tap q0 leaves the single term alpha * exp(-j 2 pi k q0 / K).
    """
    if tau < 0:
        raise ValueError(f"delay must be >= 0, got {tau}")
    q = np.arange(1, cfg.N_Q + 1)
    taps = raised_cosine(q * cfg.T_s - tau, cfg.T_s, cfg.rolloff)
    return complex(alpha * np.sum(taps * np.exp(-2j * np.pi * k * q / cfg.K)))


def _path_gain_grid(params: UserPathParams, cfg: SystemConfig) -> np.ndarray:
    """Per-ray gains on all subcarriers at once, shape (L, K)."""
    q = np.arange(1, cfg.N_Q + 1)
    k = np.arange(1, cfg.K + 1)
    taps = raised_cosine(q[None, :] * cfg.T_s - params.tau[:, None], cfg.T_s, cfg.rolloff)
    dft = np.exp(-2j * np.pi * np.outer(k, q) / cfg.K)  # (K, N_Q)
    return params.alpha[:, None] * (taps @ dft.T)


def frequency_channel(params: list[UserPathParams], cfg: SystemConfig,
                      realization_id: int = 0) -> ChannelSet:
    """Frequency-domain channels h_u[k] for all users and subcarriers.

    Column (u, k) is the gain-weighted sum of the users' ray steering
    vectors, with the steering direction evaluated at each subcarrier's
    own frequency so that beam squint is modeled.
    """
    if len(params) != cfg.U:
        raise ValueError(f"expected {cfg.U} user parameter sets, got {len(params)}")
    k = np.arange(1, cfg.K + 1)
    f_k = cfg.f_c + (cfg.B / cfg.K) * (k - 1 - (cfg.K - 1) / 2.0)  # (K,)
    n = np.arange(cfg.N)
    H = np.zeros((cfg.N, cfg.U, cfg.K), dtype=complex)
    for u, p in enumerate(params):
        gains = _path_gain_grid(p, cfg)                    # (L, K)
        phi = np.outer(p.sin_theta, f_k) * (cfg.d / cfg.c)  # (L, K)
        # steering matrix per ray: exp(j 2 pi n phi) / sqrt(N), shape (L, N, K)
        steer = np.exp(2j * np.pi * n[None, :, None] * phi[:, None, :]) / np.sqrt(cfg.N)
        H[:, u, :] = np.einsum("lk,lnk->nk", gains, steer)
    return ChannelSet(H=H, realization_id=realization_id)


_DUMP_HEADER = struct.Struct("<4q")  # N, U, K, realization_id


def dump_channel_set(cs: ChannelSet, path) -> None:
    """Binary debug dump: 4 little-endian int64 header fields, then the
    channel entries in row-major order as interleaved re/im float64."""
    N, U, K = cs.H.shape
    interleaved = np.empty((N, U, K, 2), dtype="<f8")
    interleaved[..., 0] = cs.H.real
    interleaved[..., 1] = cs.H.imag
    with open(path, "wb") as fh:
        fh.write(_DUMP_HEADER.pack(N, U, K, cs.realization_id))
        fh.write(interleaved.tobytes())


def load_channel_set(path) -> ChannelSet:
    with open(path, "rb") as fh:
        N, U, K, rid = _DUMP_HEADER.unpack(fh.read(_DUMP_HEADER.size))
        raw = np.frombuffer(fh.read(), dtype="<f8").reshape(N, U, K, 2)
    return ChannelSet(H=raw[..., 0] + 1j * raw[..., 1], realization_id=rid)
