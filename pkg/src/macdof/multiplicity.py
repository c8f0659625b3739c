"""Geometric and algebraic multiplicity of shared left null spaces.

For K independently drawn full-rank n x m matrices (n > m), the geometric
multiplicity is the largest tuple size gamma for which the left null spaces
of any gamma of them still intersect nontrivially, and the algebraic
multiplicity mu is the dimension of that intersection.  Closed forms:
gamma = min(ceil((n - m) / m), K) and mu = n - gamma * m.  The numeric
verifier re-derives both from random samples via the subspace recursion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, VerificationError
from .numerics import complex_gaussian, intersect_null_spaces, numerical_rank

# The multiplicity of a nondegenerate ensemble does not depend on which
# gamma-tuple is inspected, so sampling tuples suffices for large ensembles.
TUPLE_SAMPLE_CAP = 50

_REDRAW_CAP = 20


@dataclass(frozen=True)
class MultiplicityReport:
    n: int
    m: int
    K: int
    gamma: int
    mu: int
    verified_numerically: bool


@dataclass(frozen=True)
class IndexGroups:
    """Cyclic 1-based index groups: group k is {pi_k, ..., pi_{gamma+k-1}}
    with pi_i = ((i - 1) mod K) + 1, so every index appears gamma times."""

    K: int
    gamma: int
    groups: tuple[tuple[int, ...], ...]


def multiplicity_formula(n: int, m: int, K: int) -> MultiplicityReport:
    """Closed-form multiplicities; no sampling involved."""
    if m < 1 or K < 1:
        raise ConfigurationError(f"need m >= 1 and K >= 1, got m={m}, K={K}")
    if n <= m:
        raise ConfigurationError(f"geometric multiplicity needs n > m, got n={n}, m={m}")
    gamma = min(-((n - m) // -m), K)
    mu = n - gamma * m
    return MultiplicityReport(n=n, m=m, K=K, gamma=gamma, mu=mu, verified_numerically=False)


def index_groups(K: int, gamma: int) -> IndexGroups:
    """The K cyclic gamma-tuples covering every index exactly gamma times."""
    if K < 1:
        raise ConfigurationError(f"K must be positive, got {K}")
    if not 1 <= gamma <= K:
        raise ConfigurationError(f"gamma must lie in [1, {K}], got {gamma}")
    groups = tuple(
        tuple(((i - 1) % K) + 1 for i in range(k, gamma + k))
        for k in range(1, K + 1)
    )
    return IndexGroups(K=K, gamma=gamma, groups=groups)


def _sample_tuples(K: int, size: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    import math

    total = math.comb(K, size)
    if total <= TUPLE_SAMPLE_CAP:
        return list(itertools.combinations(range(K), size))
    chosen = set()
    while len(chosen) < TUPLE_SAMPLE_CAP:
        pick = tuple(sorted(rng.choice(K, size=size, replace=False).tolist()))
        chosen.add(pick)
    return sorted(chosen)


def _intersection_dim(mats, expect_rows: int) -> int:
    basis = intersect_null_spaces(mats)
    assert basis.shape[0] == expect_rows
    return basis.shape[1]


def multiplicity_numeric(n: int, m: int, K: int, seed: int = 0) -> MultiplicityReport:
    """Verify the closed-form multiplicities on random full-rank samples.

    Draws K complex Gaussian n x m matrices, intersects the left null spaces
    of every gamma-tuple (all of them, or TUPLE_SAMPLE_CAP sampled ones) and
    checks the dimension equals mu; when gamma < K it additionally checks
    that every (gamma+1)-tuple intersects trivially.  A dimension mismatch
    raises VerificationError naming the offending tuple.  Draws whose
    singular values sit too close to the rank tolerance are rejected and
    redrawn so borderline numerics never masquerade as a counterexample.
    """
    report = multiplicity_formula(n, m, K)
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, n, m, K])

    mats = []
    for _ in range(K):
        for attempt in range(_REDRAW_CAP + 1):
            h = complex_gaussian(rng, n, m)
            decision = numerical_rank(h)
            smallest = decision.singular_values[min(n, m) - 1]
            if decision.rank == m and smallest > 10 * decision.tolerance:
                mats.append(h)
                break
        else:
            raise VerificationError(f"could not draw a well-conditioned {n}x{m} sample")

    for tup in _sample_tuples(K, report.gamma, rng):
        dim = _intersection_dim([mats[i] for i in tup], n)
        if dim != report.mu:
            raise VerificationError(
                f"tuple {tup}: intersection dimension {dim}, expected mu={report.mu} "
                f"(n={n}, m={m}, K={K}, gamma={report.gamma})"
            )
    if report.gamma < K:
        for tup in _sample_tuples(K, report.gamma + 1, rng):
            dim = _intersection_dim([mats[i] for i in tup], n)
            if dim != 0:
                raise VerificationError(
                    f"tuple {tup}: ({report.gamma + 1})-fold intersection has dimension "
                    f"{dim}, expected 0 (n={n}, m={m}, K={K})"
                )
    return MultiplicityReport(n=n, m=m, K=K, gamma=report.gamma, mu=report.mu, verified_numerically=True)
