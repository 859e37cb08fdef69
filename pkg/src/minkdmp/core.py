"""Dense complex-matrix foundation.

Minkowski metric and adjoint, numerical rank and index, the
Hartwig-Spindelboeck decomposition, full-rank factorizations and the chained
factorizations used by the Drazin and m-DMP formulas.

Matrices are plain 2-D numpy arrays. Real input stays real; complex input is
handled everywhere (``.conj().T`` is used for every adjoint).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NearSingularFactor, NilpotentTermination, ShapeMismatch, ZeroMatrix

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "HSDecomposition",
    "MetricPartition",
    "FullRankChain",
    "as_matrix",
    "as_vector",
    "minkowski_metric",
    "minkowski_adjoint",
    "numeric_rank",
    "matrix_index",
    "matrix_power",
    "hs_decompose",
    "metric_partition",
    "delta_matrix",
    "full_rank_factor",
    "full_rank_chain",
    "rel_residual",
    "guarded_inv",
    "range_basis",
    "null_basis",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy shared by every routine.

    Attributes
    ----------
    rank_rel_tol : float
        Singular values ``s > rank_rel_tol * s_max`` count toward the rank.
    eq_rel_tol : float
        Relative Frobenius residual accepted by equation checks.
    cond_max : float
        Largest 2-norm condition number accepted before a factor is declared
        singular.
    """

    rank_rel_tol: float = 1e-10
    eq_rel_tol: float = 1e-8
    cond_max: float = 1e12

    def __post_init__(self):
        if not (0 < self.rank_rel_tol < 1):
            raise ValueError("rank_rel_tol must lie in (0, 1)")
        if not self.eq_rel_tol > 0:
            raise ValueError("eq_rel_tol must be positive")
        if not self.cond_max > 0:
            raise ValueError("cond_max must be positive")

    def replace(self, **changes) -> "Tolerances":
        return Tolerances(**{**self.__dict__, **changes})


DEFAULT_TOL = Tolerances()


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Validate ``A`` as a finite 2-D matrix (real or complex)."""
    M = np.asarray(A)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ShapeMismatch(f"{name} must be a non-empty 2-D matrix, got shape {M.shape}")
    if not np.issubdtype(M.dtype, np.complexfloating):
        M = M.astype(float)
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return M


def as_vector(b, n: int, name: str = "b") -> np.ndarray:
    v = np.asarray(b)
    if v.ndim == 2 and 1 in v.shape:
        v = v.reshape(-1)
    if v.ndim != 1 or v.shape[0] != n:
        raise ShapeMismatch(f"{name} must be a vector of length {n}, got shape {v.shape}")
    if not np.issubdtype(v.dtype, np.complexfloating):
        v = v.astype(float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return v


def _require_square(A: np.ndarray, name: str = "A") -> int:
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {A.shape}")
    return A.shape[0]


def minkowski_metric(n: int) -> np.ndarray:
    """Return ``G = diag(1, -1, ..., -1)`` of order ``n``."""
    if n < 1:
        raise ValueError("metric order must be >= 1")
    g = -np.ones(n)
    g[0] = 1.0
    return np.diag(g)


def _metric_signs(n: int) -> np.ndarray:
    g = -np.ones(n)
    g[0] = 1.0
    return g


def minkowski_adjoint(A) -> np.ndarray:
    """Minkowski adjoint ``G_n A* G_m`` of an ``m x n`` matrix.

    The metrics are diagonal, so the triple product reduces to sign flips of
    the first row and first column of ``A*``.
    """
    A = as_matrix(A)
    m, n = A.shape
    return _metric_signs(n)[:, None] * A.conj().T * _metric_signs(m)[None, :]


def rel_residual(lhs, rhs) -> tuple[float, float]:
    """Absolute and relative Frobenius residual ``||lhs - rhs|| / max(1, ||rhs||)``."""
    diff = float(np.linalg.norm(np.asarray(lhs) - np.asarray(rhs)))
    return diff, diff / max(1.0, float(np.linalg.norm(rhs)))


def numeric_rank(A, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> int:
    """Number of singular values above ``rank_rel_tol * s_max``.

    ``scale`` replaces ``s_max`` as the reference magnitude. Callers ranking
    products such as ``A^j`` pass ``||A||^j`` so that rounding noise in a
    product which is exactly zero is not mistaken for rank.
    """
    A = np.asarray(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = s[0] if scale is None else max(scale, s[0])
    if ref == 0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * ref))


def matrix_power(A: np.ndarray, k: int) -> np.ndarray:
    return np.linalg.matrix_power(A, k)


def matrix_index(A, tol: Tolerances = DEFAULT_TOL) -> int:
    """Smallest ``k >= 0`` with ``rank(A^(k+1)) == rank(A^k)``."""
    A = as_matrix(A)
    n = _require_square(A)
    norm = float(np.linalg.norm(A, 2))
    if norm == 0:
        return 1
    prev_rank, power = n, np.eye(n, dtype=A.dtype)
    for k in range(n + 1):
        power = power @ A
        r = numeric_rank(power, tol, scale=norm ** (k + 1))
        if r == prev_rank:
            return k
        prev_rank = r
    return n


def guarded_inv(
    M, tol: Tolerances, what: str, exc=NearSingularFactor, scale: float | None = None
) -> np.ndarray:
    """Invert a square matrix, raising ``exc`` when its condition exceeds cond_max.

    With ``scale`` the condition is measured as ``max(sigma_max, scale) / sigma_min``,
    so a block that should be of size ``scale`` but is tiny counts as singular
    even when it is perfectly conditioned relative to itself (e.g. ``1 x 1``).
    """
    M = np.asarray(M)
    if not M.size:
        return np.linalg.inv(M)
    s = np.linalg.svd(M, compute_uv=False)
    ref = s[0] if scale is None else max(s[0], scale)
    cond = ref / s[-1] if s[-1] > 0 else np.inf
    if not np.isfinite(cond) or cond > tol.cond_max:
        raise exc(f"{what} is numerically singular (cond={cond:.3e})", cond=float(cond))
    return np.linalg.inv(M)


def range_basis(A, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the column space, from the SVD."""
    A = np.asarray(A)
    r = numeric_rank(A, tol, scale)
    W = np.linalg.svd(A)[0]
    return W[:, :r]


def null_basis(A, tol: Tolerances = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis of the null space, from the SVD."""
    A = np.asarray(A)
    r = numeric_rank(A, tol, scale)
    Vh = np.linalg.svd(A)[2]
    return Vh[r:].conj().T


@dataclass(frozen=True)
class HSDecomposition:
    """``A = U [[Sigma K, Sigma L], [0, 0]] U*`` with ``KK* + LL* = I_r``."""

    U: np.ndarray
    Sigma: np.ndarray
    K: np.ndarray
    L: np.ndarray
    r: int

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def SigmaK(self) -> np.ndarray:
        return self.Sigma[:, None] * self.K

    @property
    def SigmaL(self) -> np.ndarray:
        return self.Sigma[:, None] * self.L

    @property
    def KL(self) -> np.ndarray:
        return np.hstack([self.K, self.L])

    def reconstruct(self) -> np.ndarray:
        n, r = self.n, self.r
        core = np.zeros((n, n), dtype=np.result_type(self.U, self.K, float))
        core[:r, :r] = self.SigmaK
        core[:r, r:] = self.SigmaL
        return self.U @ core @ self.U.conj().T


def hs_decompose(A, tol: Tolerances = DEFAULT_TOL) -> HSDecomposition:
    """Hartwig-Spindelboeck decomposition via one SVD.

    With ``A = W diag(s) V*`` take ``U = W``; then ``U* A U = diag(s) V* U`` and
    ``(K L)`` is the first ``r`` rows of ``V* U``.
    """
    A = as_matrix(A)
    _require_square(A)
    W, s, Vh = np.linalg.svd(A)
    r = numeric_rank(A, tol)
    if r == 0:
        raise ZeroMatrix("Hartwig-Spindelboeck decomposition needs rank(A) >= 1")
    KL = Vh[:r] @ W
    return HSDecomposition(U=W, Sigma=s[:r].copy(), K=KL[:, :r], L=KL[:, r:], r=r)


@dataclass(frozen=True)
class MetricPartition:
    """Blocks of ``U* G U = [[G1, G2], [G2*, G4]]``."""

    G1: np.ndarray
    G2: np.ndarray
    G4: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.block([[self.G1, self.G2], [self.G2.conj().T, self.G4]])


def metric_partition(dec: HSDecomposition, n: int | None = None) -> MetricPartition:
    n = dec.n if n is None else n
    if n != dec.n:
        raise ShapeMismatch(f"decomposition is of order {dec.n}, not {n}")
    U, r = dec.U, dec.r
    UGU =(U.conj().T * _metric_signs(n)[None, :]) @ U
    return MetricPartition(G1=UGU[:r, :r], G2=UGU[:r, r:], G4=UGU[r:, r:])


def delta_matrix(dec: HSDecomposition, n: int | None = None, metric=None) -> np.ndarray:
    """``Delta = (K L) U* G U (K L)*``.

    ``metric`` substitutes another Hermitian matrix for ``G`` (the identity
    gives the Euclidean value ``KK* + LL*``).
    """
    n = dec.n if n is None else n
    G = minkowski_metric(n) if metric is None else np.asarray(metric)
    U, KL = dec.U, dec.KL
    return KL @ (U.conj().T @ G @ U) @ KL.conj().T


def full_rank_factor(A, tol: Tolerances = DEFAULT_TOL, scale: float | None = None):
    """SVD-based full-rank factorization ``A = B C``.

    ``B`` is the leading left singular vectors scaled by the singular values,
    ``C`` the leading right singular vectors (conjugate-transposed).
    """
    A = np.asarray(A)
    W, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = numeric_rank(A, tol, scale)
    if r == 0:
        raise ZeroMatrix("full-rank factorization of a zero matrix")
    return W[:, :r] * s[:r], Vh[:r]


@dataclass(frozen=True)
class FullRankChain:
    """``A = B1 C1`` and ``C_i B_i = B_(i+1) C_(i+1)`` until ``C_k B_k`` is nonsingular."""

    B: list = field(default_factory=list)
    C: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.B)

    def left(self, upto: int | None = None) -> np.ndarray:
        """``B1 B2 ... B_upto``."""
        out = self.B[0]
        for Bi in self.B[1:upto]:
            out = out @ Bi
        return out

    def right(self, start: int = 1) -> np.ndarray:
        """``C_k ... C_start`` (1-based ``start``); identity when ``start > k``."""
        out = np.eye(self.C[-1].shape[0], dtype=self.C[-1].dtype)
        for Ci in reversed(self.C[start - 1:]):
            out = out @ Ci
        return out

    def core(self) -> np.ndarray:
        """The nonsingular terminal factor ``C_k B_k``."""
        return self.C[-1] @ self.B[-1]


def full_rank_chain(A, tol: Tolerances = DEFAULT_TOL) -> FullRankChain:
    """Chain of full-rank factorizations (Cline).

    Stops at the first ``C_k B_k`` that is nonsingular; for singular ``A`` its
    length equals ``Ind(A)``. A nonsingular ``A`` yields a chain of length one.
    Raises ``NilpotentTermination`` when some ``C_i B_i`` vanishes (``A^k = 0``).
    """
    A = as_matrix(A)
    _require_square(A)
    scale = float(np.linalg.norm(A, 2))
    if scale == 0:
        raise NilpotentTermination("A = 0 has no full-rank factorization", step=0)
    Bs, Cs = [], []
    B, C = full_rank_factor(A, tol)
    for step in range(1, A.shape[0] + 2):
        Bs.append(B)
        Cs.append(C)
        M = C @ B
        r = numeric_rank(M, tol, scale=scale)
        if r == M.shape[0]:
            return FullRankChain(B=Bs, C=Cs)
        if r == 0:
            raise NilpotentTermination(
                f"C_{step} B_{step} vanished: A is nilpotent", step=step
            )
        B, C = full_rank_factor(M, tol, scale=scale)
    raise RuntimeError("full-rank chain did not stabilize")  # pragma: no cover
