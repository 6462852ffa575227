"""Rate and efficiency metrics for the zero-forcing downlink.

With equal-power ZF precoding the per-user SINR on subcarrier k collapses
to xi / tr(G^-1[k]) where G[k] is the Gram matrix of the reduced channel
and xi = rho / sigma^2. Everything here is derived from the per-subcarrier
traces of those inverse Gram matrices; reported rates always use an
unregularized Gram matrix and fail loudly when it is singular.
"""

from dataclasses import dataclass

import numpy as np

from .beamspace import BeamSet, reduce

__all__ = [
    "SingularChannelError",
    "RatePoint",
    "GapPoint",
    "EnergyConfig",
    "zf_precoder",
    "gram_inverse_traces",
    "sum_rate",
    "gap_traces",
    "sum_rate_gap",
    "energy_efficiency",
    "dbm_to_watts",
]


class SingularChannelError(ValueError):
    """Reduced channel is rank deficient where an inverse is required."""


@dataclass
class RatePoint:
    """Sum-rate at one SNR: total over subcarriers and the per-subcarrier average."""

    xi: float
    C_total: float   # U * sum_k log2(1 + xi / tr(G^-1[k])), bits per OFDM use
    C_avg: float     # C_total / K, bits/s/Hz
    per_method: dict | None = None


@dataclass
class GapPoint:
    """Sum-rate loss of a beam selection versus the all-beams reference."""

    xi: float
    gap_exact: float      # closed-form gap at finite xi
    gap_bound: float      # xi -> infinity upper bound (xi-independent)
    gap_simulated: float  # difference of the two directly computed sum-rates


@dataclass
class EnergyConfig:
    """Power budget terms, all in watts."""

    rho: float     # transmit power
    sigma2: float  # noise power
    P_RF: float    # per-RF-chain circuit power

    def __post_init__(self) -> None:
        if self.rho <= 0 or self.sigma2 <= 0 or self.P_RF <= 0:
            raise ValueError("rho, sigma2 and P_RF must all be > 0")


def zf_precoder(H_r_k: np.ndarray, rho: float) -> np.ndarray:
    """Equal-power zero-forcing precoder for one subcarrier.

    Input is the |B| x U reduced channel; the precoder is the scaled
    pseudo-inverse of its conjugate transpose, with the scale chosen so
    tr(F F^H) = rho exactly. The effective channel H_r^H F is then a
    positive multiple of the identity: interference is nulled and all
    users see the same gain.
    """
    H_r_k = np.asarray(H_r_k, dtype=complex)
    m, n_users = H_r_k.shape
    if m < n_users:
        raise SingularChannelError(
            f"need at least U={n_users} beams for ZF, got {m}"
        )
    gram = H_r_k.conj().T @ H_r_k  # U x U
    try:
        np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularChannelError("reduced channel is rank deficient") from exc
    gram_inv = np.linalg.inv(gram)
    pinv = H_r_k @ gram_inv  # (H_r^H)^dagger, |B| x U
    scale = np.sqrt(rho / np.trace(gram_inv).real)
    return scale * pinv


def gram_inverse_traces(H_r: np.ndarray, delta: float = 0.0) -> np.ndarray:
    """tr((H_r^H[k] H_r[k] + delta I)^-1) for every subcarrier, shape (K,).

    H_r is the |B| x U x K reduced beamspace tensor. Raises
    SingularChannelError if delta = 0 and any Gram matrix is singular.
    """
    m, n_users, _ = H_r.shape
    if delta == 0.0 and m < n_users:
        raise SingularChannelError(
            f"need at least U={n_users} beams for an invertible Gram matrix, got {m}"
        )
    gram = np.einsum("buk,bvk->kuv", H_r.conj(), H_r)
    if delta:
        gram = gram + delta * np.eye(n_users)
    try:
        inv = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularChannelError("singular Gram matrix at delta=0") from exc
    return np.trace(inv, axis1=1, axis2=2).real


def sum_rate(H_r: np.ndarray, xi: float, delta: float = 0.0) -> RatePoint:
    """Equal-rate ZF sum-rate of a reduced channel at SNR xi.

    delta > 0 regularizes the Gram matrix (used only inside selection
    scoring); reported rates use delta = 0, where this formula equals the
    rate implied by the explicit zf_precoder link budget.
    """
    if xi < 0:
        raise ValueError(f"xi must be >= 0, got {xi}")
    traces = gram_inverse_traces(H_r, delta)
    n_users = H_r.shape[1]
    c_total = n_users * float(np.sum(np.log2(1.0 + xi / traces)))
    return RatePoint(xi=xi, C_total=c_total, C_avg=c_total / H_r.shape[2])


def gap_traces(beam_tensor: np.ndarray, beam_set: BeamSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-subcarrier ingredients of the selection-vs-all-beams gap.

    Returns (tr_inv, tr_shift, tr_inv_full) where tr_inv[k] is the trace of
    the inverse selected-beams Gram matrix, tr_shift[k] is the trace
    reduction contributed by the unselected rows P[k]:

        tr_shift = tr(P B^-1 B^-1 P^H (I + P B^-1 P^H)^-1),

    and tr_inv_full[k] is the inverse-Gram trace of the full tensor. All
    Gram matrices are unregularized.
    """
    n_ant = beam_tensor.shape[0]
    sel = reduce(beam_tensor, beam_set)
    unsel_rows = np.setdiff1d(np.arange(n_ant), beam_set.indices0())
    tr_inv = gram_inverse_traces(sel)
    tr_inv_full = gram_inverse_traces(beam_tensor)
    if unsel_rows.size == 0:
        return tr_inv, np.zeros_like(tr_inv), tr_inv_full
    K = beam_tensor.shape[2]
    tr_shift = np.empty(K)
    for k in range(K):
        Hr = sel[:, :, k]
        P = beam_tensor[unsel_rows, :, k]
        B_inv = np.linalg.inv(Hr.conj().T @ Hr)
        PBi = P @ B_inv                     # m x U
        core = np.eye(P.shape[0]) + PBi @ P.conj().T
        shifted = PBi @ B_inv @ P.conj().T  # P B^-2 P^H
        tr_shift[k] = np.trace(np.linalg.solve(core, shifted)).real
    return tr_inv, tr_shift, tr_inv_full


def _gap_from_traces(tr_inv: np.ndarray, tr_shift: np.ndarray, n_users: int,
                     xi: float) -> tuple[float, float]:
    """(gap_exact, gap_bound) assembled from the per-subcarrier traces."""
    factor = xi / (tr_inv + xi)
    exact = n_users * float(np.sum(np.log2(1.0 + tr_shift * factor / (tr_inv - tr_shift))))
    bound = n_users * float(np.sum(np.log2(1.0 + tr_shift / (tr_inv - tr_shift))))
    return exact, bound


def sum_rate_gap(beam_tensor: np.ndarray, beam_set: BeamSet, xi: float) -> GapPoint:
    """Gap between the all-beams sum-rate and the selection's sum-rate.

    gap_exact is the closed-form expression built from the selected Gram
    inverse and the unselected rows; gap_bound replaces its SNR factor
    xi/(tr+xi) by 1 (the high-SNR limit); gap_simulated recomputes both
    sum-rates directly and subtracts. All three use delta = 0.
    """
    tr_inv, tr_shift, tr_inv_full = gap_traces(beam_tensor, beam_set)
    n_users = beam_tensor.shape[1]
    exact, bound = _gap_from_traces(tr_inv, tr_shift, n_users, xi)
    c_full = n_users * float(np.sum(np.log2(1.0 + xi / tr_inv_full)))
    c_sel = n_users * float(np.sum(np.log2(1.0 + xi / tr_inv)))
    return GapPoint(xi=xi, gap_exact=exact, gap_bound=bound,
                    gap_simulated=c_full - c_sel)


def energy_efficiency(C_avg: float, ec: EnergyConfig, n_rf: int) -> float:
    """Rate per consumed watt: C_avg / (rho + n_rf * P_RF)."""
    denom = ec.rho + n_rf * ec.P_RF
    if denom <= 0:
        raise ValueError("total power must be > 0")
    return C_avg / denom


def dbm_to_watts(x_dbm: float) -> float:
    """10^((x - 30) / 10): 0 dBm is one milliwatt."""
    return 10.0 ** ((x_dbm - 30.0) / 10.0)
