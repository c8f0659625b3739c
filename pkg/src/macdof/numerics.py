"""Complex dense linear-algebra kernel.

Everything else in the package is built on the handful of primitives here:
SVD, numerical rank with an explicit tolerance rule, orthonormal null-space
and left-null-space bases, iterative intersection of left null spaces, and
Hermitian eigendecomposition.  All functions are pure and operate on
complex128 ndarrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, ContractViolationError, FactorizationError

_EPS = float(np.finfo(np.float64).eps)


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce input to a finite 2-D complex128 array.

    Raises ContractViolationError on NaN/Inf entries or wrong dimensionality.
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise ContractViolationError(f"{name} must be 2-D, got shape {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ContractViolationError(f"{name} contains non-finite entries")
    return arr


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """I.i.d. unit-variance complex Gaussian matrix.

    Real and imaginary parts are independent N(0, 1/2), so E|entry|^2 = 1.
    """
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) * np.sqrt(0.5)


@dataclass(frozen=True)
class RankDecision:
    """Numerical rank of a matrix together with the evidence for it.

    tolerance follows the standard rule max(rows, cols) * eps * sigma_max,
    falling back to bare machine epsilon for an (effectively) zero matrix so
    that residual-level products are ranked zero instead of full.
    """

    rank: int
    singular_values: tuple[float, ...]
    tolerance: float


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD a = U @ diag(S) @ V*, returning (U, S, V).

    U is rows x rows, V is cols x cols, S has min(rows, cols) nonincreasing
    entries.  Non-convergence of the underlying factorization is surfaced as
    FactorizationError.
    """
    arr = as_cmatrix(a)
    try:
        u, s, vh = np.linalg.svd(arr, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge for shape {arr.shape}") from exc
    return u, s, vh.conj().T


def rank_tolerance(singular_values: np.ndarray, shape: tuple[int, int]) -> float:
    smax = float(singular_values[0]) if len(singular_values) else 0.0
    if smax == 0.0:
        return _EPS
    return max(shape) * _EPS * smax


def numerical_rank(a) -> RankDecision:
    """Rank = number of singular values strictly above the tolerance rule."""
    arr = as_cmatrix(a)
    _, s, _ = svd(arr)
    tol = rank_tolerance(s, arr.shape)
    rank = int(np.sum(s > tol))
    return RankDecision(rank=rank, singular_values=tuple(float(x) for x in s), tolerance=tol)


def null_basis(a) -> np.ndarray:
    """Orthonormal basis of null(a) = {x : a x = 0}, shape cols x (cols - rank)."""
    arr = as_cmatrix(a)
    if arr.shape[0] < 1:
        raise ContractViolationError("null_basis needs at least one row")
    u, s, v = svd(arr)
    tol = rank_tolerance(s, arr.shape)
    rank = int(np.sum(s > tol))
    return np.ascontiguousarray(v[:, rank:])


def left_null_basis(a) -> np.ndarray:
    """Orthonormal basis N with N* a = 0, shape rows x (rows - rank)."""
    arr = as_cmatrix(a)
    u, s, v = svd(arr)
    tol = rank_tolerance(s, arr.shape)
    rank = int(np.sum(s > tol))
    return np.ascontiguousarray(u[:, rank:])


def intersect_null_spaces(mats) -> np.ndarray:
    """Orthonormal basis of the intersection of the left null spaces of mats.

    Computed by the product recursion: start from the left null basis of the
    first matrix and repeatedly restrict by the null space of each following
    matrix seen through the current basis.  The result G satisfies
    mats[i]* @ G = 0 for every i.  For nondegenerate n x m inputs the column
    count is n - len(mats) * m when positive; if an intermediate restriction
    is empty the recursion stops and an n x 0 matrix is returned.
    """
    mats = [as_cmatrix(m, f"mats[{i}]") for i, m in enumerate(mats)]
    if not mats:
        raise ConfigurationError("intersect_null_spaces needs a nonempty list")
    n = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != n:
            raise ConfigurationError(
                f"row-dimension mismatch: mats[{i}] has {m.shape[0]} rows, expected {n}"
            )
        if m.shape[0] <= m.shape[1]:
            raise ContractViolationError(
                f"mats[{i}] must be strictly tall, got shape {m.shape}"
            )
    gamma = left_null_basis(mats[0])
    for m in mats[1:]:
        if gamma.shape[1] == 0:
            break
        z = null_basis(m.conj().T @ gamma)
        gamma = gamma @ z
    return gamma


def trailing_null_basis(a, dim: int, scale: float, rel_tol: float = 1e-9) -> np.ndarray:
    """The dim least-dominant right-singular directions of a, checked to be
    numerically null relative to an external scale.

    Products of factorization outputs (e.g. a projected channel) carry
    round-off at the scale of their factors, which can exceed a tolerance
    derived from the product's own largest singular value; callers that know
    the null dimension by construction pass that dimension and the factor
    scale instead.  Raises FactorizationError when the selected directions
    are not null to rel_tol * scale.
    """
    arr = as_cmatrix(a)
    cols = arr.shape[1]
    if not 1 <= dim <= cols:
        raise ContractViolationError(f"requested {dim} null directions from {cols} columns")
    _, s, v = svd(arr)
    idx = cols - dim
    worst = float(s[idx]) if idx < len(s) else 0.0
    if worst > rel_tol * max(scale, _EPS):
        raise FactorizationError(
            f"requested {dim} null directions but the {dim}-th smallest singular value "
            f"is {worst:.3e} against scale {scale:.3e}"
        )
    return np.ascontiguousarray(v[:, idx:])


def hermitian_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, values nondecreasing.

    The input must be Hermitian within 1e-10 relative Frobenius error,
    otherwise ContractViolationError is raised.
    """
    arr = as_cmatrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ContractViolationError(f"hermitian_eig needs a square matrix, got {arr.shape}")
    scale = max(1.0, float(np.linalg.norm(arr)))
    if np.linalg.norm(arr - arr.conj().T) > 1e-10 * scale:
        raise ContractViolationError("matrix is not Hermitian within 1e-10 relative")
    try:
        values, vectors = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("Hermitian eigendecomposition failed") from exc
    return values, vectors


def scaled_rank(product: np.ndarray, scale: float) -> int:
    """Rank of a product matrix judged against the scale of its factors.

    Used where a construction makes some singular values exactly zero in
    theory: values below 1e-8 * scale count as zero, which keeps residual
    round-off from inflating the rank.
    """
    arr = as_cmatrix(product, "product")
    if min(arr.shape) == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(s > 1e-8 * max(scale, _EPS)))


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Spectral distance between the column spaces of two orthonormal bases."""
    pa = a @ a.conj().T
    pb = b @ b.conj().T
    return float(np.linalg.norm(pa - pb, 2))
