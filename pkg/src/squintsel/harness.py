"""Monte Carlo experiment orchestration.

Every trial draws its own channel realization from a generator derived
from (seed, trial index), runs each configured selection method once, and
evaluates the scenario metric on the whole SNR or power grid. Results are
aggregated in fixed trial order, so output CSVs are byte-identical for a
given spec and seed no matter how many worker threads are used.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import hashlib
import os

import numpy as np

from .beamspace import BeamSet, lens_dft_matrix, reduce, to_beamspace
from .channel import frequency_channel, sample_user_params
from .config import SystemConfig
from .metrics import dbm_to_watts, gap_traces, gram_inverse_traces
from .selection import full_digital_set, select_iabs, select_mm, select_wideband

__all__ = [
    "SCENARIOS",
    "METHODS",
    "ExperimentSpec",
    "SweepRow",
    "SweepResult",
    "preset",
    "run_experiment",
    "parse_spec_file",
    "config_hash",
]

SCENARIOS = ("sumrate_vs_snr", "ee_vs_power", "gap_vs_snr", "custom")
METHODS = ("proposed", "mm", "iabs", "full_digital")

CSV_HEADER = "scenario,method,x_name,x_value,metric,mean,stderr,trials,seed,config_hash"


@dataclass
class ExperimentSpec:
    """One sweep: scenario, system constants, methods and the x grid."""

    scenario: str
    cfg: SystemConfig
    methods: tuple[str, ...]
    snr_grid_db: list[float] | None = None
    power_grid_dbm: list[float] | None = None
    trials: int = 100
    out_path: str | None = None
    sigma2_dbm: float = -75.0   # noise power for power sweeps
    p_rf_w: float = 0.0344      # per-RF-chain circuit power, watts

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        grid = self.grid()
        if len(grid) == 0:
            raise ValueError("grid must be nonempty")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be sorted ascending")

    def grid(self) -> list[float]:
        if self.scenario == "ee_vs_power":
            if self.power_grid_dbm is None:
                raise ValueError("ee_vs_power needs power_grid_dbm")
            return list(self.power_grid_dbm)
        if self.snr_grid_db is None:
            raise ValueError(f"{self.scenario} needs snr_grid_db")
        return list(self.snr_grid_db)

    def x_name(self) -> str:
        return "power_dbm" if self.scenario == "ee_vs_power" else "snr_db"

    # Spec-file fields and their element types (lists are comma separated).
    FIELD_TYPES = {
        "scenario": str,
        "methods": (str,),
        "snr_grid_db": (float,),
        "power_grid_dbm": (float,),
        "trials": int,
        "out_path": str,
        "sigma2_dbm": float,
        "p_rf_w": float,
    }


@dataclass
class SweepRow:
    scenario: str
    method: str
    x_name: str
    x_value: float
    metric: str
    mean: float
    stderr: float
    trials: int
    seed: int
    config_hash: str

    def to_csv(self) -> str:
        return ",".join([
            self.scenario, self.method, self.x_name, f"{self.x_value:.12g}",
            self.metric, f"{self.mean:.12g}", f"{self.stderr:.12g}",
            str(self.trials), str(self.seed), self.config_hash,
        ])


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def to_csv_text(self) -> str:
        return "\n".join([CSV_HEADER] + [r.to_csv() for r in self.rows]) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv_text())

    def means(self, method: str, metric: str) -> list[tuple[float, float]]:
        """(x_value, mean) pairs for one method/metric curve."""
        return [(r.x_value, r.mean) for r in self.rows
                if r.method == method and r.metric == metric]


def config_hash(spec: ExperimentSpec) -> str:
    """Short content hash of everything that determines the output."""
    parts = [spec.scenario, ",".join(spec.methods), spec.x_name()]
    parts += [f"{x:.12g}" for x in spec.grid()]
    parts += [str(spec.trials), f"{spec.sigma2_dbm:.12g}", f"{spec.p_rf_w:.12g}"]
    for name in sorted(SystemConfig.FIELD_TYPES):
        parts.append(f"{name}={getattr(spec.cfg, name)!r}")
    digest = hashlib.sha1("|".join(parts).encode("utf-8")).hexdigest()
    return digest[:12]


def preset(name: str) -> ExperimentSpec:
    """Built-in sweeps: fig3 (sum-rate vs SNR), fig4 (energy efficiency vs
    transmit power), fig5 (selection-vs-all-beams gap and its bound)."""
    cfg = SystemConfig()
    if name == "fig3":
        return ExperimentSpec(
            scenario="sumrate_vs_snr", cfg=cfg,
            methods=("proposed", "mm", "iabs", "full_digital"),
            snr_grid_db=[float(s) for s in range(-10, 31, 5)],
            trials=100, out_path="results/fig3.csv",
        )
    if name == "fig4":
        return ExperimentSpec(
            scenario="ee_vs_power", cfg=cfg,
            methods=("proposed", "mm", "iabs", "full_digital"),
            power_grid_dbm=[float(p) for p in range(0, 31, 2)],
            trials=100, out_path="results/fig4.csv",
            sigma2_dbm=-75.0, p_rf_w=0.0344,
        )
    if name == "fig5":
        return ExperimentSpec(
            scenario="gap_vs_snr", cfg=cfg,
            methods=("proposed", "full_digital"),
            snr_grid_db=[float(s) for s in range(0, 41, 5)],
            trials=100, out_path="results/fig5.csv",
        )
    raise ValueError(f"unknown preset {name!r}; choose fig3, fig4 or fig5")


def _select(method: str, beam_tensor: np.ndarray, cfg: SystemConfig,
            xi_mid: float) -> BeamSet:
    if method == "proposed":
        return select_wideband(beam_tensor, cfg)[0]
    if method == "mm":
        return select_mm(beam_tensor, cfg)
    if method == "iabs":
        return select_iabs(beam_tensor, cfg, xi_mid)
    if method == "full_digital":
        return full_digital_set(beam_tensor.shape[0])
    raise ValueError(f"unknown method {method!r}")


def _xi_grid(spec: ExperimentSpec) -> np.ndarray:
    """Linear SNR at each grid point."""
    grid = np.asarray(spec.grid(), dtype=float)
    if spec.scenario == "ee_vs_power":
        sigma2 = dbm_to_watts(spec.sigma2_dbm)
        return np.array([dbm_to_watts(p) / sigma2 for p in grid])
    return 10.0 ** (grid / 10.0)


def scenario_metrics(scenario: str) -> list[str]:
    if scenario == "ee_vs_power":
        return ["ee_bps_hz_per_w"]
    if scenario == "gap_vs_snr":
        return ["gap_simulated", "gap_exact", "gap_bound"]
    return ["sumrate_total_bits", "sumrate_avg_bps_hz"]


def _run_trial(spec: ExperimentSpec, trial: int, lens, xis: np.ndarray) -> np.ndarray:
    """Metric values of one realization: (n_methods, n_x, n_metrics)."""
    cfg = spec.cfg
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, trial]))
    params = sample_user_params(cfg, rng)
    channels = frequency_channel(params, cfg, realization_id=trial)
    beam_tensor = to_beamspace(channels, lens)
    xi_mid = float(xis[len(xis) // 2])
    metrics_names = scenario_metrics(spec.scenario)
    out = np.zeros((len(spec.methods), len(xis), len(metrics_names)))

    if spec.scenario == "gap_vs_snr":
        # The gap contrasts the proposed selection against all beams; the
        # per-subcarrier traces are SNR independent, so compute them once.
        sel = select_wideband(beam_tensor, cfg)[0]
        tr_inv, tr_shift, tr_full = gap_traces(beam_tensor, sel)
        n_users = beam_tensor.shape[1]
        for j, xi in enumerate(xis):
            factor = xi / (tr_inv + xi)
            exact = n_users * np.sum(np.log2(1.0 + tr_shift * factor / (tr_inv - tr_shift)))
            bound = n_users * np.sum(np.log2(1.0 + tr_shift / (tr_inv - tr_shift)))
            c_full = n_users * np.sum(np.log2(1.0 + xi / tr_full))
            c_sel = n_users * np.sum(np.log2(1.0 + xi / tr_inv))
            out[0, j] = [c_full - c_sel, exact, bound]
        return out

    for i, method in enumerate(spec.methods):
        beams = _select(method, beam_tensor, cfg, xi_mid)
        traces = gram_inverse_traces(reduce(beam_tensor, beams))
        n_users = beam_tensor.shape[1]
        for j, xi in enumerate(xis):
            c_total = n_users * float(np.sum(np.log2(1.0 + xi / traces)))
            c_avg = c_total / cfg.K
            if spec.scenario == "ee_vs_power":
                rho = dbm_to_watts(spec.grid()[j])
                out[i, j, 0] = c_avg / (rho + len(beams) * spec.p_rf_w)
            else:
                out[i, j] = [c_total, c_avg]
    return out


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> SweepResult:
    """Run every trial, aggregate mean and standard error, emit rows.

    Deterministic for a fixed (spec, seed): trials derive independent
    generators from (seed, trial) and are reduced in trial order, so the
    thread count never changes the output.
    """
    lens = lens_dft_matrix(spec.cfg.N)
    xis = _xi_grid(spec)
    metrics_names = scenario_metrics(spec.scenario)

    per_trial = np.zeros((spec.trials, len(spec.methods), len(xis), len(metrics_names)))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {t: pool.submit(_run_trial, spec, t, lens, xis)
                       for t in range(spec.trials)}
            for t, fut in futures.items():
                per_trial[t] = fut.result()
    else:
        for t in range(spec.trials):
            per_trial[t] = _run_trial(spec, t, lens, xis)

    mean = per_trial.mean(axis=0)
    if spec.trials > 1:
        stderr = per_trial.std(axis=0, ddof=1) / np.sqrt(spec.trials)
    else:
        stderr = np.zeros_like(mean)

    chash = config_hash(spec)
    grid = spec.grid()
    rows: list[SweepRow] = []
    if spec.scenario == "gap_vs_snr":
        # Gap metrics describe the proposed selection; one row per metric.
        for j, x in enumerate(grid):
            for mi, metric in enumerate(metrics_names):
                rows.append(SweepRow(spec.scenario, "proposed", spec.x_name(), x,
                                     metric, mean[0, j, mi], stderr[0, j, mi],
                                     spec.trials, spec.cfg.seed, chash))
    else:
        for i, method in enumerate(spec.methods):
            for j, x in enumerate(grid):
                for mi, metric in enumerate(metrics_names):
                    rows.append(SweepRow(spec.scenario, method, spec.x_name(), x,
                                         metric, mean[i, j, mi], stderr[i, j, mi],
                                         spec.trials, spec.cfg.seed, chash))
    result = SweepResult(rows=rows)
    if spec.out_path:
        parent = os.path.dirname(spec.out_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        result.write_csv(spec.out_path)
    return result


def _coerce(key: str, raw: str, kind):
    if isinstance(kind, tuple):  # comma-separated list
        elem = kind[0]
        return [elem(item.strip()) for item in raw.split(",") if item.strip()]
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    return raw


def parse_spec_file(path) -> ExperimentSpec:
    """Read a flat UTF-8 ``key = value`` experiment file.

    Accepts every SystemConfig and ExperimentSpec field by name; lists are
    comma separated; blank lines and lines starting with '#' are skipped;
    any unknown key is an error.
    """
    cfg_kwargs: dict = {}
    spec_kwargs: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key in SystemConfig.FIELD_TYPES:
                cfg_kwargs[key] = _coerce(key, raw, SystemConfig.FIELD_TYPES[key])
            elif key in ExperimentSpec.FIELD_TYPES:
                spec_kwargs[key] = _coerce(key, raw, ExperimentSpec.FIELD_TYPES[key])
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if "scenario" not in spec_kwargs:
        raise ValueError(f"{path}: missing required key 'scenario'")
    if "methods" in spec_kwargs:
        spec_kwargs["methods"] = tuple(spec_kwargs["methods"])
    else:
        spec_kwargs["methods"] = ("proposed",)
    return ExperimentSpec(cfg=SystemConfig(**cfg_kwargs), **spec_kwargs)
