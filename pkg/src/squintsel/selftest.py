"""Fast structural sanity checks exposed through the CLI."""

import numpy as np

from .beamspace import BeamSet, beam_energy_profile, lens_dft_matrix, to_beamspace
from .channel import frequency_channel, sample_user_params, steering_vector
from .config import SystemConfig
from .harness import ExperimentSpec, run_experiment
from .metrics import gram_inverse_traces
from .selection import rate_gain_ratio


def _check(name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))
    return ok


def run_selftest() -> bool:
    """Quick invariant screen; returns True when everything passes."""
    ok = True
    rng = np.random.default_rng(0)

    lens = lens_dft_matrix(256)
    err = np.linalg.norm(lens.U_mat @ lens.U_mat.conj().T - np.eye(256))
    ok &= _check("lens matrix unitary at N=256", err < 1e-10, f"frob err {err:.2e}")

    norms = [abs(np.linalg.norm(steering_vector(n, phi)) - 1.0)
             for n in (1, 7, 64) for phi in rng.uniform(-0.5, 0.5, 3)]
    ok &= _check("steering vectors unit norm", max(norms) < 1e-12)

    cfg = SystemConfig(N=32, K=16, U=3, L=2, N_RF=6, seed=1)
    params = sample_user_params(cfg, np.random.default_rng(1))
    H = frequency_channel(params, cfg).H
    small_lens = lens_dft_matrix(cfg.N)
    Ht = to_beamspace(H, small_lens)
    e_in = np.linalg.norm(H.reshape(cfg.N, -1), axis=0)
    e_out = np.linalg.norm(Ht.reshape(cfg.N, -1), axis=0)
    ok &= _check("beamspace transform preserves energy",
                 float(np.max(np.abs(e_in - e_out))) < 1e-10)

    squint_cfg = SystemConfig()
    k = np.arange(1, squint_cfg.K + 1)
    f_k = squint_cfg.f_c + (squint_cfg.B / squint_cfg.K) * (k - 1 - (squint_cfg.K - 1) / 2)
    phi = f_k / squint_cfg.c * squint_cfg.d * 0.5
    n = np.arange(squint_cfg.N)
    Hs = (np.exp(2j * np.pi * np.outer(n, phi)) / np.sqrt(squint_cfg.N))[:, None, :]
    Hts = to_beamspace(Hs, lens_dft_matrix(squint_cfg.N))
    lo = int(np.argmax(np.abs(Hts[:, 0, 0])))
    hi = int(np.argmax(np.abs(Hts[:, 0, -1])))
    disp = abs(hi - lo)
    ok &= _check("beam squint drifts the peak by 3 +/- 1 bins", 2 <= disp <= 4,
                 f"displacement {disp}")
    mid = int(np.argmax(beam_energy_profile(Hts, 0)))
    ok &= _check("band-averaged peak sits midway", abs(mid - (lo + hi) / 2) <= 1)

    # incremental gain ratio against directly recomputed rates
    worst = 0.0
    for _ in range(20):
        Hti = (rng.standard_normal((12, 3, 4)) + 1j * rng.standard_normal((12, 3, 4))) / np.sqrt(2)
        beams = BeamSet(beams=list(rng.permutation(12)[:4] + 1), capacity=8)
        extra = next(b for b in range(1, 13) if b not in beams.beams)
        xi = float(10 ** rng.uniform(-1, 2))
        delta = 1e-6
        lhs = 0.0
        for kk in range(4):
            Hr = Hti[beams.indices0(), :, kk]
            G = Hr.conj().T @ Hr + delta * np.eye(3)
            lhs += np.log2(1 + rate_gain_ratio(np.linalg.inv(G), Hti[extra - 1, :, kk], 1 / xi))
        lhs *= 3
        tr_a = gram_inverse_traces(Hti[beams.indices0()], delta)
        tr_b = gram_inverse_traces(Hti[np.asarray(beams.beams + [extra]) - 1], delta)
        rhs = 3 * float(np.sum(np.log2(1 + xi / tr_b)) - np.sum(np.log2(1 + xi / tr_a)))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    ok &= _check("greedy gain matches recomputed sum-rate change", worst < 1e-8,
                 f"worst rel err {worst:.2e}")

    spec = ExperimentSpec(scenario="sumrate_vs_snr", cfg=cfg,
                          methods=("proposed", "mm"), snr_grid_db=[0.0, 10.0],
                          trials=3)
    text1 = run_experiment(spec, threads=1).to_csv_text()
    text2 = run_experiment(spec, threads=2).to_csv_text()
    ok &= _check("sweep output independent of thread count", text1 == text2)

    print("selftest:", "OK" if ok else "FAILED")
    return bool(ok)
