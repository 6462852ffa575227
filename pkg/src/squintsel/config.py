"""Scenario configuration shared by all simulator modules."""

from dataclasses import dataclass

SPEED_OF_LIGHT = 299792458.0  # m/s, exact


@dataclass
class SystemConfig:
    """All constants defining one downlink scenario.

    Defaults are the desk-scale mmWave setup used by the bundled presets:
    a 256-antenna lens array serving 8 single-antenna users over a
    1.4 GHz band at 28 GHz with 128 OFDM subcarriers and 16 RF chains.

    ``d``, ``T_s`` and ``N_Q`` may be left as None to get the derived
    defaults: half-wavelength spacing at the center frequency, Nyquist
    sample period 1/B, and a K/4-tap cyclic prefix.
    """

    N: int = 256              # BS antennas
    K: int = 128              # OFDM subcarriers
    U: int = 8                # single-antenna users
    L: int = 3                # propagation paths per user (path 0 = LOS)
    N_RF: int = 16            # RF chains = beam budget
    f_c: float = 28e9         # center frequency, Hz
    B: float = 1.4e9          # bandwidth, Hz
    d: float | None = None    # antenna spacing, m (None -> c / (2 f_c))
    c: float = SPEED_OF_LIGHT
    N_Q: int | None = None    # cyclic-prefix length in taps (None -> K // 4)
    T_s: float | None = None  # sample period, s (None -> 1 / B)
    rolloff: float = 1.0      # raised-cosine roll-off in [0, 1]
    delta: float = 1e-6       # base regularizer for selection scoring
    nlos_gain_var: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.d is None:
            self.d = self.c / (2.0 * self.f_c)
        if self.T_s is None:
            self.T_s = 1.0 / self.B
        if self.N_Q is None:
            self.N_Q = max(1, self.K // 4)
        self.validate()

    def validate(self) -> None:
        for name in ("N", "K", "U", "L"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not (self.U <= self.N_RF <= self.N):
            raise ValueError(
                f"need U <= N_RF <= N, got U={self.U}, N_RF={self.N_RF}, N={self.N}"
            )
        if not (0 < self.B < self.f_c):
            raise ValueError(f"need 0 < B < f_c, got B={self.B}, f_c={self.f_c}")
        if abs(self.T_s * self.B - 1.0) > 1e-9:
            raise ValueError(f"T_s must equal 1/B, got T_s={self.T_s}, B={self.B}")
        if not (1 <= self.N_Q <= self.K):
            raise ValueError(f"need 1 <= N_Q <= K, got N_Q={self.N_Q}, K={self.K}")
        if not (0.0 <= self.rolloff <= 1.0):
            raise ValueError(f"rolloff must be in [0, 1], got {self.rolloff}")
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.nlos_gain_var < 0:
            raise ValueError(f"nlos_gain_var must be >= 0, got {self.nlos_gain_var}")

    # Field names accepted by the flat key=value experiment files.
    FIELD_TYPES = {
        "N": int, "K": int, "U": int, "L": int, "N_RF": int,
        "f_c": float, "B": float, "d": float, "c": float,
        "N_Q": int, "T_s": float, "rolloff": float, "delta": float,
        "nlos_gain_var": float, "seed": int,
    }
