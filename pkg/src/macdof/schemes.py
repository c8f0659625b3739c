"""Constructive linear schemes: transmit/receive zero forcing and null-space
interference alignment, each returning a design that a certificate checks
for exact interference nulling and stream decodability.

Conventions: combiners have orthonormal-block rows built from left null
bases (the free full-rank mixing matrix in front is fixed to identity, which
is the best-conditioned choice and provably does not change any dimension
condition); precoder columns are orthonormal, so the per-user transmit
covariance (rho/beta) T T* meets the power constraint with equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, FactorizationError, VerificationError
from .multiplicity import index_groups
from .network import ChannelSet, NetworkConfig
from .numerics import (
    intersect_null_spaces,
    left_null_basis,
    null_basis,
    numerical_rank,
    scaled_rank,
    trailing_null_basis,
)

# Zero-interference threshold, relative to the Frobenius norm of the raw
# channel.  Residuals in the borderline band are reported separately so
# numerics drift is distinguishable from construction bugs.
RESIDUAL_TOL = 1e-8
BORDERLINE_CEIL = 1e-6

TX_ZF = "tx_zf"
NSIA_TWO_CELL = "nsia_two_cell"
NSIA_GENERAL = "nsia_general"
RX_ZF = "rx_zf"

SCHEME_IDS = (TX_ZF, NSIA_TWO_CELL, NSIA_GENERAL, RX_ZF)


@dataclass(frozen=True)
class DimensionRule:
    """Antenna dimensions the generalized alignment scheme needs at a given
    null-space multiplicity: M = (K - gamma)*beta + beta and
    N = (L-1)*gamma*M + beta (gamma < K) or + K*beta (gamma = K)."""

    gamma: int
    M_required: int
    N_required: int


@dataclass(frozen=True)
class LinearDesign:
    """Per-user precoders and per-cell combiners produced by one scheme.

    precoders[(l, k)] is M x beta with orthonormal columns; combiners[m] is
    K*beta x N with full row rank.
    """

    scheme_id: str
    precoders: dict
    combiners: dict
    streams_per_user: int
    gamma: int | None = None


@dataclass(frozen=True)
class CellDiagnostics:
    cell: int
    combiner_rank: int
    decode_rank: int
    residual_max: float


@dataclass(frozen=True)
class SchemeCertificate:
    """Outcome of checking a design against its channel realization."""

    residual_max: float
    ranks_ok: bool
    achieved_streams: int
    per_cell: tuple[CellDiagnostics, ...]
    borderline_pairs: tuple[tuple[int, int, int], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.ranks_ok and self.residual_max <= RESIDUAL_TOL


def dimension_rule(L: int, K: int, beta: int, gamma: int) -> DimensionRule:
    if L < 2 or K < 1 or beta < 1:
        raise ConfigurationError(f"need L >= 2, K >= 1, beta >= 1; got L={L}, K={K}, beta={beta}")
    if not 1 <= gamma <= K:
        raise ConfigurationError(f"gamma must lie in [1, {K}], got {gamma}")
    M = (K - gamma) * beta + beta
    extra = beta if gamma < K else K * beta
    return DimensionRule(gamma=gamma, M_required=M, N_required=(L - 1) * gamma * M + extra)


def _require_uplink(channels: ChannelSet) -> NetworkConfig:
    if channels.direction != "uplink":
        raise ConfigurationError("linear schemes operate on uplink channel sets")
    return channels.cfg


def _check_dims(cfg: NetworkConfig, scheme: str, M: int, N: int, two_cell: bool = False) -> None:
    if two_cell and cfg.L != 2:
        raise ConfigurationError(f"{scheme} is a two-cell construction, got L={cfg.L}")
    if not cfg.is_homogeneous or cfg.M != M or cfg.N != N:
        raise ConfigurationError(
            f"{scheme} with K={cfg.K}, beta={cfg.beta} needs (M, N) = ({M}, {N}), "
            f"got ({cfg.M}, {cfg.N})"
        )


def tx_zero_forcing(channels: ChannelSet, cfg: NetworkConfig | None = None) -> LinearDesign:
    """Two-cell transmit zero forcing with M = K*beta + beta, N = K*beta.

    Each user precodes inside the null space of its cross channel, so the
    other cell sees nothing; combiners are identities.
    """
    _require_uplink(channels)
    cfg = cfg if cfg is not None else channels.cfg
    K, beta = cfg.K, cfg.beta
    _check_dims(cfg, TX_ZF, K * beta + beta, K * beta, two_cell=True)
    precoders = {}
    for l in range(2):
        other = 1 - l
        for k in range(K):
            basis = null_basis(channels.matrices[(other, l, k)])
            if basis.shape[1] < beta:
                raise VerificationError(
                    f"cross channel of user ({l},{k}) left a {basis.shape[1]}-dimensional "
                    f"null space, need {beta}"
                )
            precoders[(l, k)] = basis[:, :beta]
    combiners = {m: np.eye(K * beta, dtype=np.complex128) for m in range(2)}
    return LinearDesign(TX_ZF, precoders, combiners, beta)


def nsia_two_cell(channels: ChannelSet, cfg: NetworkConfig | None = None) -> LinearDesign:
    """Two-cell null-space alignment with M = K*beta, N = K*beta + beta.

    Each base station stacks the left null bases of its K cross channels
    into the combiner; every cross channel then collapses by beta dimensions
    and each interfering user finds a beta-dimensional precoder that the
    projected channel annihilates.
    """
    _require_uplink(channels)
    cfg = cfg if cfg is not None else channels.cfg
    K, beta = cfg.K, cfg.beta
    _check_dims(cfg, NSIA_TWO_CELL, K * beta, K * beta + beta, two_cell=True)
    combiners = {}
    for m in range(2):
        other = 1 - m
        blocks = []
        for k in range(K):
            basis = left_null_basis(channels.matrices[(m, other, k)])
            if basis.shape[1] != beta:
                raise VerificationError(
                    f"left null space of cross channel ({m},{other},{k}) has "
                    f"{basis.shape[1]} dimensions, expected {beta}"
                )
            blocks.append(basis.conj().T)
        combiners[m] = np.vstack(blocks)
    precoders = {}
    for l in range(2):
        other = 1 - l
        for k in range(K):
            h = channels.matrices[(other, l, k)]
            projected = combiners[other] @ h
            try:
                precoders[(l, k)] = trailing_null_basis(
                    projected, beta, float(np.linalg.norm(h, 2))
                )
            except FactorizationError as exc:
                raise VerificationError(
                    f"projected cross channel of user ({l},{k}) has no "
                    f"{beta}-dimensional null space: {exc}"
                ) from exc
    return LinearDesign(NSIA_TWO_CELL, precoders, combiners, beta)


def _aggregated_cross(channels: ChannelSet, m: int, k: int) -> np.ndarray:
    """Horizontal concatenation of user k's channels into cell m from every
    other cell, in increasing cell order."""
    cfg = channels.cfg
    return np.hstack([channels.matrices[(m, l, k)] for l in range(cfg.L) if l != m])


def nsia_general(channels: ChannelSet, cfg: NetworkConfig | None = None, gamma: int = 1) -> LinearDesign:
    """Generalized null-space alignment for L >= 2 cells via cross-channel
    aggregation, at the antenna dimensions of dimension_rule(L, K, beta, gamma).

    Per cell: aggregate each user index's L-1 cross channels side by side,
    intersect the left null spaces over the cyclic gamma-tuples, and stack
    the intersections into the combiner.  Each user's precoder is then drawn
    from the joint null space of its projected channels into all other cells
    at once (stacked vertically), so a single precoder silences every cell.
    That joint space is provably nonempty for L = 2 and for gamma = K; for
    L > 2 with gamma < K the stacked constraints generically overdetermine
    the precoder and construction fails with VerificationError.
    """
    _require_uplink(channels)
    cfg = cfg if cfg is not None else channels.cfg
    L, K, beta = cfg.L, cfg.K, cfg.beta
    rule = dimension_rule(L, K, beta, gamma)
    _check_dims(cfg, NSIA_GENERAL, rule.M_required, rule.N_required)
    M, N = rule.M_required, rule.N_required
    if N <= (L - 1) * M:
        raise ConfigurationError("aggregated construction needs N > (L-1)*M")

    mu = beta if gamma < K else K * beta
    groups = index_groups(K, gamma).groups
    combiners = {}
    for m in range(L):
        aggregated = [_aggregated_cross(channels, m, k) for k in range(K)]
        if gamma < K:
            blocks = []
            for group in groups:
                basis = intersect_null_spaces([aggregated[i - 1] for i in group])
                if basis.shape[1] != mu:
                    raise VerificationError(
                        f"cell {m}, tuple {group}: intersection dimension "
                        f"{basis.shape[1]}, expected {mu}"
                    )
                blocks.append(basis.conj().T)
            combiners[m] = np.vstack(blocks)
        else:
            basis = intersect_null_spaces(aggregated)
            if basis.shape[1] != mu:
                raise VerificationError(
                    f"cell {m}: full intersection dimension {basis.shape[1]}, expected {mu}"
                )
            combiners[m] = basis.conj().T
        for k in range(K):
            scale = float(np.linalg.norm(aggregated[k], 2))
            rank = scaled_rank(combiners[m] @ aggregated[k], scale)
            if rank != (K - gamma) * beta:
                raise VerificationError(
                    f"cell {m}: projected aggregated interferer {k} has rank {rank}, "
                    f"expected {(K - gamma) * beta}"
                )

    precoders = {}
    for l in range(L):
        for k in range(K):
            others = [m for m in range(L) if m != l]
            stacked = np.vstack([combiners[m] @ channels.matrices[(m, l, k)] for m in others])
            scale = max(float(np.linalg.norm(channels.matrices[(m, l, k)], 2)) for m in others)
            try:
                precoders[(l, k)] = trailing_null_basis(stacked, beta, scale)
            except FactorizationError as exc:
                raise VerificationError(
                    f"user ({l},{k}): no {beta}-dimensional precoder nulls all "
                    f"{L - 1} other cells at once; the stacked zero-interference "
                    f"constraints are overdetermined at M={M} ({exc})"
                ) from exc
    return LinearDesign(NSIA_GENERAL, precoders, combiners, beta, gamma=gamma)


def rx_zero_forcing(channels: ChannelSet, cfg: NetworkConfig | None = None) -> LinearDesign:
    """Receive zero forcing with M = beta, N = L*K*beta for any L >= 2.

    Each base station projects onto the left null space of all stacked
    out-of-cell channels; precoders are identities.
    """
    _require_uplink(channels)
    cfg = cfg if cfg is not None else channels.cfg
    L, K, beta = cfg.L, cfg.K, cfg.beta
    if L < 2:
        raise ConfigurationError(f"receive zero forcing needs L >= 2, got L={L}")
    _check_dims(cfg, RX_ZF, beta, L * K * beta)
    combiners = {}
    for m in range(L):
        cross = np.hstack(
            [channels.matrices[(m, l, k)] for l in range(L) if l != m for k in range(K)]
        )
        basis = left_null_basis(cross)
        if basis.shape[1] != K * beta:
            raise VerificationError(
                f"cell {m}: out-of-cell block leaves a {basis.shape[1]}-dimensional left "
                f"null space, expected {K * beta}"
            )
        combiners[m] = basis.conj().T
    precoders = {
        (l, k): np.eye(beta, dtype=np.complex128) for l in range(L) for k in range(K)
    }
    return LinearDesign(RX_ZF, precoders, combiners, beta)


def certify(design: LinearDesign, channels: ChannelSet) -> SchemeCertificate:
    """Check a design against one realization: interference residuals,
    precoder/combiner ranks, and per-cell decodability.

    achieved_streams is K*L*beta exactly when everything holds; failures are
    reported in the certificate, never raised.
    """
    cfg = channels.cfg
    L, K, beta = cfg.L, cfg.K, cfg.beta
    ranks_ok = True
    for t in design.precoders.values():
        if numerical_rank(t).rank != beta:
            ranks_ok = False

    residual_max = 0.0
    borderline = []
    per_cell = []
    for m in range(L):
        p = design.combiners[m]
        combiner_rank = numerical_rank(p).rank
        if combiner_rank != K * beta:
            ranks_ok = False
        cell_residual = 0.0
        for l in range(L):
            if l == m:
                continue
            for k in range(K):
                h = channels.matrices[(m, l, k)]
                num = float(np.linalg.norm(p @ h @ design.precoders[(l, k)]))
                res = num / float(np.linalg.norm(h))
                cell_residual = max(cell_residual, res)
                if RESIDUAL_TOL < res <= BORDERLINE_CEIL:
                    borderline.append((m, l, k))
        effective = np.hstack(
            [channels.matrices[(m, m, k)] @ design.precoders[(m, k)] for k in range(K)]
        )
        decode_rank = numerical_rank(p @ effective).rank
        if decode_rank != K * beta:
            ranks_ok = False
        per_cell.append(
            CellDiagnostics(
                cell=m,
                combiner_rank=combiner_rank,
                decode_rank=decode_rank,
                residual_max=cell_residual,
            )
        )
        residual_max = max(residual_max, cell_residual)

    achieved = K * L * beta if (ranks_ok and residual_max <= RESIDUAL_TOL) else 0
    return SchemeCertificate(
        residual_max=residual_max,
        ranks_ok=ranks_ok,
        achieved_streams=achieved,
        per_cell=tuple(per_cell),
        borderline_pairs=tuple(borderline),
    )


def build_scheme(scheme_id: str, channels: ChannelSet, gamma: int | None = None) -> LinearDesign:
    """Dispatch a scheme by identifier; gamma only applies to nsia_general."""
    if scheme_id == TX_ZF:
        return tx_zero_forcing(channels)
    if scheme_id == NSIA_TWO_CELL:
        return nsia_two_cell(channels)
    if scheme_id == NSIA_GENERAL:
        if gamma is None:
            raise ConfigurationError("nsia_general needs a gamma value")
        return nsia_general(channels, gamma=gamma)
    if scheme_id == RX_ZF:
        return rx_zero_forcing(channels)
    raise ConfigurationError(f"unknown scheme {scheme_id!r}; known: {SCHEME_IDS}")


def required_dimensions(scheme_id: str, L: int, K: int, beta: int, gamma: int | None = None) -> tuple[int, int]:
    """(M, N) a scheme needs for the given geometry; ConfigurationError if
    the scheme does not apply."""
    if scheme_id == TX_ZF:
        if L != 2:
            raise ConfigurationError("tx_zf is a two-cell construction")
        return K * beta + beta, K * beta
    if scheme_id == NSIA_TWO_CELL:
        if L != 2:
            raise ConfigurationError("nsia_two_cell is a two-cell construction")
        return K * beta, K * beta + beta
    if scheme_id == NSIA_GENERAL:
        if gamma is None:
            raise ConfigurationError("nsia_general needs a gamma value")
        rule = dimension_rule(L, K, beta, gamma)
        return rule.M_required, rule.N_required
    if scheme_id == RX_ZF:
        if L < 2:
            raise ConfigurationError("rx_zf needs L >= 2")
        return beta, L * K * beta
    raise ConfigurationError(f"unknown scheme {scheme_id!r}; known: {SCHEME_IDS}")
