"""Wideband beamspace MIMO downlink simulator with beam selection.

Pipeline: sample ray parameters -> frequency-domain channels with beam
squint -> lens (spatial DFT) beamspace -> beam selection under an
RF-chain budget -> zero-forcing sum-rate, energy-efficiency and
selection-gap metrics -> seeded Monte Carlo sweeps written as CSV.
"""

from .beamspace import (
    BeamSet,
    LensMatrix,
    beam_energy_profile,
    beamspace_grid,
    lens_dft_matrix,
    reduce,
    to_beamspace,
)
from .channel import (
    ChannelSet,
    UserPathParams,
    dump_channel_set,
    frequency_channel,
    load_channel_set,
    raised_cosine,
    sample_user_params,
    spatial_aod,
    steering_vector,
    subcarrier_frequency,
    subcarrier_path_gain,
)
from .config import SystemConfig
from .harness import (
    ExperimentSpec,
    SweepResult,
    SweepRow,
    config_hash,
    parse_spec_file,
    preset,
    run_experiment,
)
from .metrics import (
    EnergyConfig,
    GapPoint,
    RatePoint,
    SingularChannelError,
    dbm_to_watts,
    energy_efficiency,
    gram_inverse_traces,
    sum_rate,
    sum_rate_gap,
    zf_precoder,
)
from .selection import (
    SelectionDiagnostics,
    full_digital_set,
    rate_gain_ratio,
    select_exhaustive,
    select_iabs,
    select_mm,
    select_wideband,
)

__version__ = "0.1.0"
