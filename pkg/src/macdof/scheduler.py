"""Downlink multiuser diversity for the L-cell interference channel with
single-antenna transmitters and L-1 receive antennas per user.

Each user forms two receive beamformers from local knowledge only: the
SINR-maximizing filter (dominant generalized eigendirection, available in
closed form because the signal covariance is rank one) and the
interference-minimizing filter (smallest eigenvector of the out-of-cell
interference covariance).  Per cell, a scheduler picks the user with the
best scalar statistic; the experiments below verify the interference-power
statistics of the selected user and track the normalized sum rate as the
user population grows with SNR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, VerificationError
from .network import ChannelSet
from .numerics import hermitian_eig

MAX_SINR = "max-sinr"
MIN_INTERF = "min-interf"
SCHEDULERS = (MAX_SINR, MIN_INTERF)

# Cap on users simulated per cell; above this the experiment refuses to run
# rather than thrash memory.
DEFAULT_USER_CAP = 2_000_000


@dataclass(frozen=True)
class UserStat:
    """Beamformers and scalar scheduling statistics of one user.

    lambda_max is the best achievable SINR (closed form
    rho * h* (I + rho W)^{-1} h); sigma_min is the smallest eigenvalue of
    the interference covariance W.
    """

    cell: int
    user: int
    rho: float
    lambda_max: float
    sigma_min: float
    p_maxsinr: np.ndarray
    p_mininterf: np.ndarray
    own_channel: np.ndarray
    interference_cov: np.ndarray


@dataclass(frozen=True)
class ScheduleOutcome:
    """Per-cell selection plus the selected users' rates.

    rates uses the scheduler's own filter (max-SINR filter for the max-SINR
    scheduler, interference-minimizing filter otherwise); rates_maxsinr
    re-evaluates the same selected users under the max-SINR filter, which is
    never worse.
    """

    scheduler: str
    selected: dict
    rates: dict
    rates_maxsinr: dict
    sum_rate: float
    interference_power: dict


@dataclass(frozen=True)
class InterferenceStats:
    """Empirical statistics of rho * sigma of the min-interference-selected
    user against the exponential law they should follow."""

    L: int
    K: int
    rho: float
    n_samples: int
    mean_empirical: float
    mean_theory: float
    second_moment_empirical: float
    second_moment_theory: float
    ccdf_grid: tuple[float, ...]
    ccdf_empirical: tuple[float, ...]
    ccdf_theory: tuple[float, ...]
    ks_distance: float


@dataclass(frozen=True)
class ConvergencePoint:
    snr_db: float
    users: int
    normalized_sum_rate: float
    mean_sum_rate_bits: float
    mean_interference: float


@dataclass(frozen=True)
class ConvergenceSweep:
    scheduler: str
    growth_exponent: float
    user_constant: float
    baseline_dof: int
    target_dof: int
    points: tuple[ConvergencePoint, ...]


def beamformer_rate(h: np.ndarray, w: np.ndarray, p: np.ndarray, rho: float) -> float:
    """Rate in bits of a single stream received through filter p:
    log2(1 + rho |p* h|^2 / (|p|^2 + rho p* W p))."""
    num = rho * abs(np.vdot(p, h)) ** 2
    den = float(np.real(np.vdot(p, p))) + rho * float(np.real(np.vdot(p, w @ p)))
    return float(np.log2(1.0 + num / den))


def _sinr_filters(h: np.ndarray, w: np.ndarray, rho: float) -> tuple[np.ndarray, float]:
    """Max-SINR filter and its SINR.

    The SINR-optimal direction is (I + rho W)^{-1} h; because the signal
    covariance is rank one the attained SINR has the closed form
    rho h*(I + rho W)^{-1} h, which we cross-check against the quotient the
    filter actually achieves.
    """
    n = h.shape[0]
    solved = np.linalg.solve(np.eye(n) + rho * w, h)
    lam = rho * float(np.real(np.vdot(h, solved)))
    p = solved / np.linalg.norm(solved)
    num = rho * abs(np.vdot(p, h)) ** 2
    den = 1.0 + rho * float(np.real(np.vdot(p, w @ p)))
    attained = num / den
    if abs(attained - lam) > 1e-8 * max(1.0, lam):
        raise VerificationError(
            f"rank-one SINR identity violated: closed form {lam}, attained {attained}"
        )
    return p, lam


def user_stats(channels: ChannelSet, rho: float) -> list[UserStat]:
    """Per-user beamformers and statistics for one downlink realization."""
    cfg = channels.cfg
    if channels.direction != "downlink":
        raise ConfigurationError("user statistics are defined on downlink channel sets")
    if cfg.M != 1 or cfg.N != cfg.L - 1:
        raise ConfigurationError(
            f"scheduling model needs M = 1 and N = L - 1, got M={cfg.M}, N={cfg.N}, L={cfg.L}"
        )
    if rho <= 0:
        raise ConfigurationError(f"rho must be positive, got {rho}")
    stats = []
    for m in range(cfg.L):
        for k in range(cfg.K):
            h = channels.matrices[(k, m, m)][:, 0]
            w = np.zeros((cfg.N, cfg.N), dtype=np.complex128)
            for l in range(cfg.L):
                if l == m:
                    continue
                cross = channels.matrices[(k, m, l)][:, 0]
                w += np.outer(cross, cross.conj())
            p_sinr, lam = _sinr_filters(h, w, rho)
            evals, evecs = hermitian_eig(w)
            stats.append(
                UserStat(
                    cell=m,
                    user=k,
                    rho=float(rho),
                    lambda_max=lam,
                    sigma_min=float(max(evals[0], 0.0)),
                    p_maxsinr=p_sinr,
                    p_mininterf=evecs[:, 0],
                    own_channel=h,
                    interference_cov=w,
                )
            )
    return stats


def _schedule(stats: list[UserStat], scheduler: str) -> ScheduleOutcome:
    by_cell: dict[int, list[UserStat]] = {}
    for s in stats:
        by_cell.setdefault(s.cell, []).append(s)
    if not by_cell or any(not users for users in by_cell.values()):
        raise ValueError("every cell needs at least one candidate user")
    selected, rates, rates_sinr, interference = {}, {}, {}, {}
    for cell in sorted(by_cell):
        users = sorted(by_cell[cell], key=lambda s: s.user)
        if scheduler == MAX_SINR:
            best = max(users, key=lambda s: (s.lambda_max, -s.user))
            rate = float(np.log2(1.0 + best.lambda_max))
        else:
            best = min(users, key=lambda s: (s.sigma_min, s.user))
            rate = beamformer_rate(best.own_channel, best.interference_cov, best.p_mininterf, best.rho)
        selected[cell] = best.user
        rates[cell] = rate
        rates_sinr[cell] = float(np.log2(1.0 + best.lambda_max))
        interference[cell] = best.rho * best.sigma_min
    return ScheduleOutcome(
        scheduler=scheduler,
        selected=selected,
        rates=rates,
        rates_maxsinr=rates_sinr,
        sum_rate=float(sum(rates.values())),
        interference_power=interference,
    )


def schedule_max_sinr(stats: list[UserStat]) -> ScheduleOutcome:
    """Select per cell the user with the largest achievable SINR (ties to the
    lowest user index) and rate it with its own max-SINR filter."""
    return _schedule(stats, MAX_SINR)


def schedule_min_interf(stats: list[UserStat]) -> ScheduleOutcome:
    """Select per cell the user with the smallest interference eigenvalue and
    rate it with its interference-minimizing filter."""
    return _schedule(stats, MIN_INTERF)


def _draw_cell_batch(rng: np.random.Generator, K: int, L: int):
    """Own channels (K, L-1) and interference covariances (K, L-1, L-1) for
    the K candidate users of one cell."""
    n = L - 1
    h = (rng.standard_normal((K, n)) + 1j * rng.standard_normal((K, n))) * np.sqrt(0.5)
    y = (rng.standard_normal((K, n, L - 1)) + 1j * rng.standard_normal((K, n, L - 1))) * np.sqrt(0.5)
    w = y @ y.conj().swapaxes(-1, -2)
    return h, w


def _min_eigpairs(w: np.ndarray):
    evals, evecs = np.linalg.eigh(w)
    return np.maximum(evals[:, 0], 0.0), evecs[:, :, 0]


def interference_stats_experiment(
    L: int,
    K: int,
    rho: float,
    trials: int,
    seed: int = 0,
    ccdf_grid: tuple[float, ...] | None = None,
) -> InterferenceStats:
    """Monte Carlo law of the selected user's scaled interference power.

    Collects rho * min_k sigma_{km} over trials * L cells and compares mean,
    second moment, and CCDF against the exponential law with rate
    (L-1) * K / rho: mean rho/((L-1)K), second moment twice the mean squared,
    CCDF exp(-(L-1)K x / rho).  ks_distance is the one-sample
    Kolmogorov-Smirnov statistic against that law.
    """
    if L < 2 or K < 1 or trials < 1:
        raise ConfigurationError(f"need L >= 2, K >= 1, trials >= 1; got {L}, {K}, {trials}")
    mean_theory = rho / ((L - 1) * K)
    if ccdf_grid is None:
        ccdf_grid = tuple(mean_theory * f for f in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0))
    samples = np.empty(trials * L)
    for t in range(trials):
        rng = np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, 0, t])
        for m in range(L):
            _, w = _draw_cell_batch(rng, K, L)
            sig = np.maximum(np.linalg.eigvalsh(w)[:, 0], 0.0)
            samples[t * L + m] = rho * sig.min()
    rate = (L - 1) * K / rho
    srt = np.sort(samples)
    n = srt.size
    cdf_theory = 1.0 - np.exp(-rate * srt)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    ks = float(np.max(np.maximum(np.abs(upper - cdf_theory), np.abs(cdf_theory - lower))))
    ccdf_emp = tuple(float(np.mean(samples > x)) for x in ccdf_grid)
    ccdf_th = tuple(float(np.exp(-rate * x)) for x in ccdf_grid)
    return InterferenceStats(
        L=L,
        K=K,
        rho=float(rho),
        n_samples=n,
        mean_empirical=float(samples.mean()),
        mean_theory=mean_theory,
        second_moment_empirical=float(np.mean(samples**2)),
        second_moment_theory=2.0 * mean_theory**2,
        ccdf_grid=tuple(float(x) for x in ccdf_grid),
        ccdf_empirical=ccdf_emp,
        ccdf_theory=ccdf_th,
        ks_distance=ks,
    )


def users_for_snr(rho: float, a: float, user_constant: float) -> int:
    """Population size K(rho) = ceil(rho^a / c)."""
    return int(np.ceil(rho**a / user_constant))


@dataclass(frozen=True)
class TrialDetail:
    """One scheduling round: selected user, rate, and scaled interference
    power per cell."""

    selected: tuple[int, ...]
    rates: tuple[float, ...]
    interference: tuple[float, ...]

    @property
    def sum_rate(self) -> float:
        return float(sum(self.rates))


def simulate_trial(rng: np.random.Generator, L: int, K: int, rho: float, scheduler: str) -> TrialDetail:
    """Draw one realization with K candidates per cell, schedule, and rate.
    Vectorized over candidates; selections match the reference path built
    from user_stats on the same numbers."""
    if scheduler not in SCHEDULERS:
        raise ConfigurationError(f"unknown scheduler {scheduler!r}; known: {SCHEDULERS}")
    n = L - 1
    eye = np.eye(n)
    selected, rates, interf = [], [], []
    for m in range(L):
        h, w = _draw_cell_batch(rng, K, L)
        if scheduler == MAX_SINR:
            solved = np.linalg.solve(eye[None, :, :] + rho * w, h[..., None])[..., 0]
            lam = rho * np.real(np.einsum("kn,kn->k", h.conj(), solved))
            khat = int(np.argmax(lam))
            rate = float(np.log2(1.0 + lam[khat]))
            sig_sel = float(np.maximum(np.linalg.eigvalsh(w[khat])[0], 0.0))
        else:
            sig, vecs = _min_eigpairs(w)
            khat = int(np.argmin(sig))
            rate = beamformer_rate(h[khat], w[khat], vecs[khat], rho)
            sig_sel = float(sig[khat])
        selected.append(khat)
        rates.append(rate)
        interf.append(rho * sig_sel)
    return TrialDetail(selected=tuple(selected), rates=tuple(rates), interference=tuple(interf))


def simulate_trial_sum_rate(
    rng: np.random.Generator, L: int, K: int, rho: float, scheduler: str
) -> tuple[float, float]:
    """One scheduling round over all cells: (sum rate bits, mean rho*sigma of
    the selected users)."""
    detail = simulate_trial(rng, L, K, rho, scheduler)
    return detail.sum_rate, float(np.mean(detail.interference))


def dof_convergence_sweep(
    L: int,
    a: float,
    rho_grid_db: tuple[float, ...],
    trials: int,
    seed: int = 0,
    scheduler: str = MIN_INTERF,
    users_at_first_point: int = 10,
    user_cap: int = DEFAULT_USER_CAP,
) -> ConvergenceSweep:
    """Normalized sum rate sum_m R_m / log2(rho) along an SNR grid while the
    per-cell user count grows like rho^a.

    The constant in K(rho) = ceil(rho^a / c) is pinned so the first grid
    point uses users_at_first_point users; a = 0 keeps the population fixed
    (the interference-limited control).  Reported alongside: the alignment
    baseline min(L, N) = L - 1 and the target L.
    """
    if L < 2:
        raise ConfigurationError(f"need L >= 2, got {L}")
    if a < 0:
        raise ConfigurationError(f"growth exponent must be >= 0, got {a}")
    if not rho_grid_db:
        raise ConfigurationError("need at least one SNR point")
    if scheduler not in SCHEDULERS:
        raise ConfigurationError(f"unknown scheduler {scheduler!r}; known: {SCHEDULERS}")
    rho0 = 10.0 ** (rho_grid_db[0] / 10.0)
    c = rho0**a / users_at_first_point
    points = []
    for idx, snr_db in enumerate(rho_grid_db):
        rho = 10.0 ** (snr_db / 10.0)
        K = users_for_snr(rho, a, c)
        if K > user_cap:
            raise ConfigurationError(
                f"K({snr_db} dB) = {K} exceeds the user cap {user_cap}; raise the cap "
                "or shorten the grid"
            )
        acc_rate = 0.0
        acc_interf = 0.0
        for t in range(trials):
            rng = np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, idx + 1, t])
            sr, mi = simulate_trial_sum_rate(rng, L, K, rho, scheduler)
            acc_rate += sr
            acc_interf += mi
        mean_rate = acc_rate / trials
        points.append(
            ConvergencePoint(
                snr_db=float(snr_db),
                users=K,
                normalized_sum_rate=mean_rate / float(np.log2(rho)),
                mean_sum_rate_bits=mean_rate,
                mean_interference=acc_interf / trials,
            )
        )
    return ConvergenceSweep(
        scheduler=scheduler,
        growth_exponent=float(a),
        user_constant=float(c),
        baseline_dof=L - 1,
        target_dof=L,
        points=tuple(points),
    )
