"""Exact evaluation of sum degrees-of-freedom outer bounds.

All formulas are evaluated in rational arithmetic (fractions.Fraction over
arbitrary-precision integers): the normalizing denominator K + L - 1 makes
the bounds generically non-integer, and the acceptance tests demand exact
values rather than float approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exceptions import ConfigurationError
from .network import NetworkConfig


@dataclass(frozen=True)
class DofBoundReport:
    """Every evaluated bound branch plus their applicable minimum.

    branches maps a branch name to its exact rational value; sigma_d is the
    minimum over the branches the evaluating bound actually uses (the
    relaxed branch is carried for comparison but never tightens sigma_d).
    """

    branches: dict[str, Fraction]
    sigma_d: Fraction
    config: NetworkConfig

    def as_dict(self) -> dict:
        def payload(x: Fraction) -> dict:
            return {"exact": f"{x.numerator}/{x.denominator}", "value": float(x)}

        return {
            "branches": {name: payload(v) for name, v in self.branches.items()},
            "sigma_d": payload(self.sigma_d),
        }


def _require_multicell(cfg: NetworkConfig) -> None:
    if cfg.L <= 1:
        raise ConfigurationError(f"outer bound is defined for L > 1, got L={cfg.L}")


def message_subsets(L: int, K: int) -> list[set[tuple[int, int]]]:
    """The K*L message subsets used to decompose the network bound.

    Subset (l, k) keeps the K messages of cell l plus message k of every
    other cell; each message lands in exactly K + L - 1 subsets.
    """
    subsets = []
    for l in range(L):
        for k in range(K):
            keep = {(l, q) for q in range(K)}
            keep |= {(p, k) for p in range(L) if p != l}
            subsets.append(keep)
    return subsets


def outer_bound_general(cfg: NetworkConfig) -> DofBoundReport:
    """Sum-DoF outer bound for arbitrary per-node antenna counts.

    Evaluates the cooperative transmit/receive bounds and the message-subset
    bound: for each (cell l, user index k) the network collapses to a
    two-user interference channel whose known bound is
    min(M1 + M2, N1 + N2, max(M1, N2), max(M2, N1)); the K*L per-subset
    values are summed and normalized by the K + L - 1 repetitions of each
    message.  A further relaxed form of the subset branch is reported
    alongside for comparison.
    """
    _require_multicell(cfg)
    L, K = cfg.L, cfg.K
    coop_tx = Fraction(sum(cfg.tx_antennas(l, k) for l in range(L) for k in range(K)))
    coop_rx = Fraction(sum(cfg.rx_antennas(l) for l in range(L)))
    total_rx = int(coop_rx)

    subset_sum = 0
    relaxed_sum = 0
    for l in range(L):
        mac_tx = sum(cfg.tx_antennas(l, q) for q in range(K))
        cross_rx = total_rx - cfg.rx_antennas(l)
        own_rx = cfg.rx_antennas(l)
        for k in range(K):
            cross_tx = sum(cfg.tx_antennas(p, k) for p in range(L) if p != l)
            a = max(mac_tx, cross_rx)
            b = max(cross_tx, own_rx)
            subset_sum += min(mac_tx + cross_tx, total_rx, a, b)
            relaxed_sum += min(a, b)

    denom = K + L - 1
    subset = Fraction(subset_sum, denom)
    relaxed = min(coop_tx, coop_rx, Fraction(relaxed_sum, denom))
    sigma_d = min(coop_tx, coop_rx, subset)
    return DofBoundReport(
        branches={
            "cooperative_tx": coop_tx,
            "cooperative_rx": coop_rx,
            "message_subset": subset,
            "message_subset_relaxed": relaxed,
        },
        sigma_d=sigma_d,
        config=cfg,
    )


def outer_bound_homogeneous(cfg: NetworkConfig) -> DofBoundReport:
    """Four-branch sum-DoF outer bound for homogeneous (M, N) networks.

    min( K*L*M, L*N, KL/(K+L-1) * max(K*M, (L-1)*N),
         KL/(K+L-1) * max((L-1)*M, N) ), exact.
    """
    _require_multicell(cfg)
    if not cfg.is_homogeneous:
        raise ConfigurationError("homogeneous bound needs a homogeneous antenna config")
    L, K, M, N = cfg.L, cfg.K, cfg.M, cfg.N
    scale = Fraction(K * L, K + L - 1)
    branches = {
        "cooperative_tx": Fraction(K * L * M),
        "cooperative_rx": Fraction(L * N),
        "cross_rx": scale * max(K * M, (L - 1) * N),
        "cross_tx": scale * max((L - 1) * M, N),
    }
    return DofBoundReport(branches=branches, sigma_d=min(branches.values()), config=cfg)


def outer_bound_hetnet(
    mac_tx_antennas: list[int],
    mac_rx_antennas: int,
    ic_tx_antennas: list[int],
    ic_rx_antennas: list[int],
) -> Fraction:
    """Sum-DoF outer bound of the hybrid network: one K-user uplink cell
    plus an (L-1)-pair interference channel.

    min( sum M_q + sum M_p,  N + sum N_p,
         max(sum M_q, sum N_p),  max(sum M_p, N) ), exact.
    """
    if not mac_tx_antennas:
        raise ConfigurationError("the multi-user cell needs at least one user")
    if not ic_tx_antennas or len(ic_tx_antennas) != len(ic_rx_antennas):
        raise ConfigurationError("the interference-channel side needs matched nonempty antenna lists")
    if min(mac_tx_antennas) < 1 or mac_rx_antennas < 1 or min(ic_tx_antennas) < 1 or min(ic_rx_antennas) < 1:
        raise ConfigurationError("antenna counts must be positive")
    mac_tx = sum(mac_tx_antennas)
    ic_tx = sum(ic_tx_antennas)
    ic_rx = sum(ic_rx_antennas)
    return Fraction(
        min(
            mac_tx + ic_tx,
            mac_rx_antennas + ic_rx,
            max(mac_tx, ic_rx),
            max(ic_tx, mac_rx_antennas),
        )
    )


def compare_dist_vs_shared(M: int) -> tuple[Fraction, Fraction, bool]:
    """Distributed transmission vs selecting one transmitter per user group
    that forwards the group's messages over perfect links (two cells, two
    users per cell, M = N antennas everywhere).

    Returns (distributed bound, shared-transmitter value, shared >= distributed).
    The shared-transmitter network is the square MIMO cross channel whose
    known optimum is 4M/3; the distributed side evaluates to the same 4M/3
    through the homogeneous bound, so sharing never loses.
    """
    if M < 1:
        raise ConfigurationError("M must be a positive integer")
    cfg = NetworkConfig(L=2, K=2, M=M, N=M)
    sigma_dist = outer_bound_homogeneous(cfg).sigma_d
    sigma_shared = Fraction(4 * M, 3)
    return sigma_dist, sigma_shared, sigma_dist <= sigma_shared


def feasibility_check(M: int, N: int, L: int, K: int) -> bool:
    """Necessary condition for any linear scheme to give each of the K*L
    users one interference-free dimension: M + N >= L*K + 1."""
    for name, v in (("M", M), ("N", N), ("L", L), ("K", K)):
        if v < 1:
            raise ConfigurationError(f"{name} must be a positive integer, got {v}")
    return M + N >= L * K + 1


def antenna_budget(gamma: int, L: int, K: int) -> int:
    """Total antenna budget of the generalized alignment scheme at null-space
    multiplicity gamma with one stream per user: the scheme uses exactly
    M + N = antenna_budget(gamma, L, K) + 1 antennas.

    Equals ((L-1)*gamma + 1) * (K + 1 - gamma) on 1 <= gamma <= K-1 and L*K
    at gamma = K; concave in gamma with the minimum L*K attained at both ends.
    """
    if L < 2 or K < 1:
        raise ConfigurationError(f"need L >= 2 and K >= 1, got L={L}, K={K}")
    if not 1 <= gamma <= K:
        raise ConfigurationError(f"gamma must lie in [1, {K}], got {gamma}")
    if gamma == K:
        return L * K
    return ((L - 1) * gamma + 1) * (K + 1 - gamma)
