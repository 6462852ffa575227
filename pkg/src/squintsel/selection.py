"""Beam selection: the wideband two-stage method and its baselines.

The wideband method first gives every user its strongest band-averaged
beam, then fills the remaining RF-chain budget greedily: at each step it
adds the beam whose rank-one update to the reduced Gram matrix yields the
largest summed log gain across subcarriers. The gain of a candidate row g
against the current inverse Gram A = G^-1 is

    log2(1 + t / ((xi_inv * tr(A) + 1) * (tr(A) - t))),
    t = g A A g^H / (1 + g A g^H),

which for xi_inv = 1/xi is exactly the per-subcarrier sum-rate increase
divided by U, and for xi_inv = 1 is the scale-free score the selection
stage maximizes.
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .beamspace import BeamSet, beam_energy_profile
from .config import SystemConfig
from .metrics import SingularChannelError, gram_inverse_traces

__all__ = [
    "SelectionDiagnostics",
    "rate_gain_ratio",
    "effective_regularizer",
    "select_wideband",
    "select_mm",
    "select_iabs",
    "full_digital_set",
    "select_exhaustive",
]

EXHAUSTIVE_LIMIT = 100_000  # refuse larger subset enumerations


@dataclass
class SelectionDiagnostics:
    """Trace of one wideband selection run."""

    init_beams: list[int] = field(default_factory=list)  # per-user stage-1 picks
    scores: list[float] = field(default_factory=list)    # winning score per greedy step
    iterations: int = 0


def rate_gain_ratio(G_inv: np.ndarray, g_row: np.ndarray, xi_inv: float) -> float:
    """Scalar gain ratio of adding row g_row given the inverse Gram G_inv.

    With xi_inv = 1/xi, U * log2(1 + ratio) is the exact sum-rate change
    on this subcarrier from appending the row; xi_inv = 1 is the pinned
    value used during selection scoring. Nonnegative for any PD Gram.
    """
    G_inv = np.asarray(G_inv, dtype=complex)
    g = np.asarray(g_row, dtype=complex).reshape(-1)
    tr = np.trace(G_inv).real
    if tr <= 0:
        raise ValueError(f"tr(G_inv) must be > 0, got {tr}")
    u = G_inv @ g.conj()                     # G^-1 g^H
    quad = (g @ u).real                      # g G^-1 g^H
    quad2 = float(np.vdot(u, u).real)        # g G^-1 G^-1 g^H
    t = quad2 / (1.0 + quad)
    if tr - t <= 0:
        raise ValueError(
            "inconsistent inputs: trace reduction exceeds tr(G_inv) "
            f"(tr={tr}, t={t}); G_inv is not the inverse of a PD Gram matrix"
        )
    return t / ((xi_inv * tr + 1.0) * (tr - t))


def effective_regularizer(H_r: np.ndarray, base_delta: float) -> float:
    """Channel-relative regularizer: base_delta * (1 + mean Gram diagonal).

    The mean is over users and subcarriers of the reduced tensor, so the
    same base value stays meaningful across channel magnitudes.
    """
    mean_diag = float(np.mean(np.sum(np.abs(H_r) ** 2, axis=0)))
    return base_delta * (1.0 + mean_diag)


def _stage1_beams(beam_tensor: np.ndarray, n_users: int,
                  distinct: bool = False) -> tuple[list[int], list[int]]:
    """Strongest band-averaged beam per user (1-based).

    Returns (per_user, selected): per_user keeps one entry per user;
    selected collapses duplicates preserving first-seen order, unless
    distinct=True, in which case each user takes its best not-yet-used
    beam instead.
    """
    per_user: list[int] = []
    selected: list[int] = []
    for u in range(n_users):
        profile = beam_energy_profile(beam_tensor, u)
        if distinct:
            order = np.argsort(-profile, kind="stable")
            pick = next(int(b) + 1 for b in order if int(b) + 1 not in selected)
        else:
            pick = int(np.argmax(profile)) + 1
        per_user.append(pick)
        if pick not in selected:
            selected.append(pick)
    return per_user, selected


def select_wideband(beam_tensor: np.ndarray, cfg: SystemConfig,
                    distinct_init: bool = False) -> tuple[BeamSet, SelectionDiagnostics]:
    """Two-stage wideband beam selection.

    Stage 1 assigns each user the beam with maximal band-averaged energy
    (duplicates collapse unless distinct_init). Stage 2 repeatedly adds
    the unselected beam maximizing sum_k log2(1 + gain ratio) with the
    pinned xi_inv = 1, maintaining the inverse Gram matrices through
    rank-one updates. Ties always break toward the lowest beam index.
    """
    N, n_users, K = beam_tensor.shape
    if cfg.N_RF > N:
        raise ValueError(f"N_RF={cfg.N_RF} exceeds beam count N={N}")
    per_user, selected = _stage1_beams(beam_tensor, n_users, distinct_init)
    diag = SelectionDiagnostics(init_beams=per_user)

    n_extra = cfg.N_RF - len(selected)
    if n_extra <= 0:
        return BeamSet(beams=selected, capacity=cfg.N_RF), diag

    sel0 = np.asarray(selected, dtype=int) - 1
    H_r = beam_tensor[sel0]
    delta = effective_regularizer(H_r, cfg.delta)
    gram = np.einsum("buk,bvk->kuv", H_r.conj(), H_r) + delta * np.eye(n_users)
    G_inv = np.linalg.inv(gram)  # (K, U, U)

    chosen = set(selected)
    for _ in range(n_extra):
        cand = np.array([b for b in range(1, N + 1) if b not in chosen], dtype=int)
        rows = beam_tensor[cand - 1].transpose(0, 2, 1)          # (C, K, U)
        gA = np.einsum("cku,kuv->ckv", rows, G_inv)              # g G^-1
        quad = np.einsum("ckv,ckv->ck", gA, rows.conj()).real    # g G^-1 g^H
        quad2 = np.einsum("ckv,ckv->ck", gA, gA.conj()).real     # g G^-2 g^H
        t = quad2 / (1.0 + quad)
        tr = np.trace(G_inv, axis1=1, axis2=2).real[None, :]
        if np.any(tr - t <= 0):
            raise ValueError("trace reduction exceeds tr(G_inv); Gram inverse drifted")
        scores = np.sum(np.log2(1.0 + t / ((tr + 1.0) * (tr - t))), axis=1)
        win = int(np.argmax(scores))
        beam = int(cand[win])

        # Rank-one downdate of every subcarrier's inverse Gram matrix.
        g = rows[win]                                            # (K, U)
        u_vec = np.einsum("kuv,kv->ku", G_inv, g.conj())         # G^-1 g^H
        denom = (1.0 + np.einsum("ku,ku->k", g, u_vec)).real
        v_vec = np.einsum("ku,kuv->kv", g, G_inv)                # g G^-1
        G_inv = G_inv - np.einsum("ku,kv->kuv", u_vec, v_vec) / denom[:, None, None]

        chosen.add(beam)
        selected.append(beam)
        diag.scores.append(float(scores[win]))
        diag.iterations += 1

    return BeamSet(beams=selected, capacity=cfg.N_RF), diag


def select_mm(beam_tensor: np.ndarray, cfg: SystemConfig) -> BeamSet:
    """Magnitude maximization: top-N_RF beams by total band-averaged energy."""
    N, n_users, _ = beam_tensor.shape
    if cfg.N_RF > N:
        raise ValueError(f"N_RF={cfg.N_RF} exceeds beam count N={N}")
    totals = np.sum(np.mean(np.abs(beam_tensor) ** 2, axis=2), axis=1)
    ranked = np.argsort(-totals, kind="stable")  # stable sort: ties to lowest index
    return BeamSet(beams=[int(b) + 1 for b in ranked[: cfg.N_RF]], capacity=cfg.N_RF)


def _center_subcarrier_rate(beam_tensor: np.ndarray, beams: list[int], xi: float) -> float:
    """ZF sum-rate of one beam subset on the center subcarrier, -inf if singular."""
    k_c = (beam_tensor.shape[2] + 1) // 2  # 1-based ceil(K/2)
    Hr = beam_tensor[np.asarray(beams, dtype=int) - 1, :, k_c - 1]
    n_users = Hr.shape[1]
    if Hr.shape[0] < n_users:
        return -np.inf
    gram = Hr.conj().T @ Hr
    try:
        tr = np.trace(np.linalg.inv(gram)).real
    except np.linalg.LinAlgError:
        return -np.inf
    if tr <= 0:
        return -np.inf
    return n_users * float(np.log2(1.0 + xi / tr))


def select_iabs(beam_tensor: np.ndarray, cfg: SystemConfig, xi: float,
                band_averaged: bool = False) -> BeamSet:
    """Interference-aware baseline: narrowband logic at the center subcarrier.

    Users whose strongest beams are unshared keep them. Users colliding on
    a beam are reassigned by searching distinct beams drawn from their own
    energy rankings (list capped at the number of colliding users),
    maximizing the center-subcarrier ZF sum-rate at xi. Any leftover
    budget is filled by total-energy ranking.

    By default beam energies are read off the center subcarrier, the way
    the narrowband method sees the channel; the selection then ignores
    the spectral spread of each path, which is this baseline's known
    weakness. band_averaged=True switches every energy ranking to the
    whole-band average instead (a squint-aware variant).
    """
    N, n_users, K = beam_tensor.shape
    if cfg.N_RF < n_users:
        raise ValueError(f"need N_RF >= U, got N_RF={cfg.N_RF}, U={n_users}")

    k_c = (K + 1) // 2
    if band_averaged:
        profiles = [beam_energy_profile(beam_tensor, u) for u in range(n_users)]
    else:
        profiles = [np.abs(beam_tensor[:, u, k_c - 1]) ** 2 for u in range(n_users)]
    favorite = [int(np.argmax(p)) + 1 for p in profiles]
    counts = {b: favorite.count(b) for b in favorite}
    peaceful = [u for u in range(n_users) if counts[favorite[u]] == 1]
    contested = [u for u in range(n_users) if counts[favorite[u]] > 1]

    selected: list[int] = []
    for u in peaceful:
        if favorite[u] not in selected:
            selected.append(favorite[u])

    if contested:
        m = len(contested)
        candidates = []
        for u in contested:
            order = np.argsort(-profiles[u], kind="stable") + 1
            candidates.append([int(b) for b in order if int(b) not in selected][:m])

        best_rate = -np.inf
        best_assign: list[int] | None = None

        def search(idx: int, assign: list[int]) -> None:
            nonlocal best_rate, best_assign
            if idx == m:
                rate = _center_subcarrier_rate(beam_tensor, selected + assign, xi)
                if rate > best_rate:
                    best_rate, best_assign = rate, list(assign)
                return
            for b in candidates[idx]:
                if b not in assign:
                    assign.append(b)
                    search(idx + 1, assign)
                    assign.pop()

        search(0, [])
        if best_assign is None:  # no distinct assignment possible: take favorites
            for u in contested:
                if favorite[u] not in selected:
                    selected.append(favorite[u])
        else:
            selected.extend(best_assign)

    if len(selected) < cfg.N_RF:
        if band_averaged:
            totals = np.sum(np.mean(np.abs(beam_tensor) ** 2, axis=2), axis=1)
        else:
            totals = np.sum(np.abs(beam_tensor[:, :, k_c - 1]) ** 2, axis=1)
        for b in np.argsort(-totals, kind="stable") + 1:
            if int(b) not in selected:
                selected.append(int(b))
            if len(selected) == cfg.N_RF:
                break
    return BeamSet(beams=selected[: cfg.N_RF], capacity=cfg.N_RF)


def full_digital_set(n_ant: int) -> BeamSet:
    """All N beams: the one-RF-chain-per-antenna reference."""
    return BeamSet(beams=list(range(1, n_ant + 1)), capacity=n_ant)


def select_exhaustive(beam_tensor: np.ndarray, cfg: SystemConfig, xi: float) -> BeamSet:
    """Optimal N_RF-subset by full enumeration (tiny instances only).

    Maximizes the exact wideband ZF sum-rate at xi; ties resolve to the
    lexicographically smallest subset. Refuses when the number of subsets
    exceeds EXHAUSTIVE_LIMIT.
    """
    N, n_users, _ = beam_tensor.shape
    n_subsets = comb(N, cfg.N_RF)
    if n_subsets > EXHAUSTIVE_LIMIT:
        raise ValueError(
            f"{n_subsets} subsets exceed the exhaustive-search limit {EXHAUSTIVE_LIMIT}"
        )
    best_rate = -np.inf
    best: tuple[int, ...] | None = None
    for subset in combinations(range(1, N + 1), cfg.N_RF):
        rows = beam_tensor[np.asarray(subset) - 1]
        try:
            traces = gram_inverse_traces(rows)
        except SingularChannelError:
            continue
        rate = n_users * float(np.sum(np.log2(1.0 + xi / traces)))
        if rate > best_rate:  # combinations are lexicographic: first max wins
            best_rate, best = rate, subset
    if best is None:
        raise ValueError("every candidate subset had a singular Gram matrix")
    return BeamSet(beams=list(best), capacity=cfg.N_RF)
