"""Network geometry, SNR bookkeeping, and seeded channel realization.

Uplink: base station m receives an N_m x M_lk matrix from user k of cell l.
Downlink: user k of cell m receives an N x M matrix from base station l.
Realizations are pure functions of (config, seed, trial_index); distinct
(seed, trial_index) pairs map to independent generator streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, VerificationError
from .numerics import complex_gaussian, numerical_rank

# Entry samplers by distribution id.  Any map rng, rows, cols -> complex
# matrix with i.i.d. continuous entries qualifies; rayleigh (unit-variance
# complex Gaussian) is the canonical choice.
DISTRIBUTIONS = {
    "rayleigh": complex_gaussian,
}

# Redrawing a rank-deficient sample is a measure-zero event; hitting the cap
# indicates a numerics bug, not bad luck.
_REGEN_CAP = 100


@dataclass(frozen=True)
class NetworkConfig:
    """Cell/user/antenna/stream geometry plus the SNR grid.

    Either the homogeneous pair (M, N) or the heterogeneous vectors
    (tx_antennas_per_user with L*K entries in cell-major order,
    rx_antennas_per_cell with L entries) must be given, not both.
    """

    L: int
    K: int
    M: int | None = None
    N: int | None = None
    tx_antennas_per_user: tuple[int, ...] | None = None
    rx_antennas_per_cell: tuple[int, ...] | None = None
    beta: int = 1
    snr_db: tuple[float, ...] = (40.0, 50.0, 60.0, 70.0, 80.0)
    distribution: str = "rayleigh"

    def __post_init__(self):
        if self.L < 1 or self.K < 1:
            raise ConfigurationError(f"need L >= 1 and K >= 1, got L={self.L}, K={self.K}")
        if self.beta < 1:
            raise ConfigurationError(f"beta must be a positive integer, got {self.beta}")
        homogeneous = self.M is not None or self.N is not None
        heterogeneous = self.tx_antennas_per_user is not None or self.rx_antennas_per_cell is not None
        if homogeneous and heterogeneous:
            raise ConfigurationError("give either (M, N) or per-node antenna vectors, not both")
        if homogeneous:
            if self.M is None or self.N is None:
                raise ConfigurationError("homogeneous config needs both M and N")
            if self.M < 1 or self.N < 1:
                raise ConfigurationError("antenna counts must be positive")
        elif heterogeneous:
            tx = self.tx_antennas_per_user
            rx = self.rx_antennas_per_cell
            if tx is None or rx is None:
                raise ConfigurationError("heterogeneous config needs both antenna vectors")
            object.__setattr__(self, "tx_antennas_per_user", tuple(int(x) for x in tx))
            object.__setattr__(self, "rx_antennas_per_cell", tuple(int(x) for x in rx))
            if len(self.tx_antennas_per_user) != self.L * self.K:
                raise ConfigurationError(
                    f"tx_antennas_per_user needs L*K={self.L * self.K} entries, "
                    f"got {len(self.tx_antennas_per_user)}"
                )
            if len(self.rx_antennas_per_cell) != self.L:
                raise ConfigurationError(
                    f"rx_antennas_per_cell needs L={self.L} entries, "
                    f"got {len(self.rx_antennas_per_cell)}"
                )
            if min(self.tx_antennas_per_user) < 1 or min(self.rx_antennas_per_cell) < 1:
                raise ConfigurationError("antenna counts must be positive")
        else:
            raise ConfigurationError("antenna configuration missing")
        min_tx = self.M if self.M is not None else min(self.tx_antennas_per_user)
        if self.beta > min_tx:
            raise ConfigurationError(
                f"beta={self.beta} exceeds the smallest transmit antenna count {min_tx}; "
                "a rank-beta precoder cannot exist"
            )
        object.__setattr__(self, "snr_db", tuple(float(x) for x in self.snr_db))
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigurationError(
                f"unknown distribution {self.distribution!r}; supported: {sorted(DISTRIBUTIONS)}"
            )

    @property
    def is_homogeneous(self) -> bool:
        return self.M is not None

    def tx_antennas(self, cell: int, user: int) -> int:
        if self.M is not None:
            return self.M
        return self.tx_antennas_per_user[cell * self.K + user]

    def rx_antennas(self, cell: int) -> int:
        if self.N is not None:
            return self.N
        return self.rx_antennas_per_cell[cell]

    @staticmethod
    def snr_linear(snr_db: float) -> float:
        return 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class ChannelSet:
    """All channel matrices of one network realization.

    Uplink keys are (receiver cell m, source cell l, source user k) mapping
    to an rx_antennas(m) x tx_antennas(l, k) matrix.  Downlink keys are
    (user k, user's cell m, transmitter cell l) mapping to an N x M matrix.
    """

    direction: str
    matrices: dict
    seed: int
    trial_index: int
    cfg: NetworkConfig
    regenerations: int = 0

    def __post_init__(self):
        if self.direction not in ("uplink", "downlink"):
            raise ConfigurationError(f"direction must be uplink or downlink, got {self.direction!r}")


def _trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    if trial_index < 0:
        raise ConfigurationError("trial_index must be nonnegative")
    # Seeding with the (seed, trial_index) pair gives split streams that are
    # independent across trials and reproducible for a fixed pair.
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(trial_index)])


def _draw_full_rank(sample, rng: np.random.Generator, rows: int, cols: int, regen_counter: list[int]) -> np.ndarray:
    h = sample(rng, rows, cols)
    while numerical_rank(h).rank < min(rows, cols):
        regen_counter[0] += 1
        if regen_counter[0] >= _REGEN_CAP:
            raise VerificationError(
                f"{regen_counter[0]} rank-deficient redraws for shape {(rows, cols)}; "
                "this should be a measure-zero event"
            )
        h = sample(rng, rows, cols)
    return h


def realize_uplink(cfg: NetworkConfig, seed: int, trial_index: int) -> ChannelSet:
    """Draw one uplink realization: every cross and direct channel matrix."""
    rng = _trial_rng(seed, trial_index)
    sample = DISTRIBUTIONS[cfg.distribution]
    regen = [0]
    matrices = {}
    for m in range(cfg.L):
        rows = cfg.rx_antennas(m)
        for l in range(cfg.L):
            for k in range(cfg.K):
                cols = cfg.tx_antennas(l, k)
                matrices[(m, l, k)] = _draw_full_rank(sample, rng, rows, cols, regen)
    return ChannelSet(
        direction="uplink",
        matrices=matrices,
        seed=int(seed),
        trial_index=int(trial_index),
        cfg=cfg,
        regenerations=regen[0],
    )


def realize_downlink(cfg: NetworkConfig, seed: int, trial_index: int) -> ChannelSet:
    """Draw one downlink realization: channel from every transmitter to every user."""
    rng = _trial_rng(seed, trial_index)
    sample = DISTRIBUTIONS[cfg.distribution]
    regen = [0]
    matrices = {}
    if not cfg.is_homogeneous:
        raise ConfigurationError("downlink realization supports homogeneous antennas only")
    for k in range(cfg.K):
        for m in range(cfg.L):
            for l in range(cfg.L):
                matrices[(k, m, l)] = _draw_full_rank(sample, rng, cfg.N, cfg.M, regen)
    return ChannelSet(
        direction="downlink",
        matrices=matrices,
        seed=int(seed),
        trial_index=int(trial_index),
        cfg=cfg,
        regenerations=regen[0],
    )
