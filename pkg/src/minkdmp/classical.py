"""Euclidean generalized inverses: Moore-Penrose, Drazin, group and DMP."""

from __future__ import annotations

import enum

import numpy as np

from .core import (
    DEFAULT_TOL,
    HSDecomposition,
    Tolerances,
    _require_square,
    as_matrix,
    full_rank_chain,
    guarded_inv,
    matrix_index,
    numeric_rank,
)
from .errors import IndexTooLarge, NilpotentTermination

__all__ = [
    "GinvKind",
    "moore_penrose",
    "drazin",
    "drazin_hs",
    "group_inverse",
    "dmp",
]


class GinvKind(str, enum.Enum):
    MoorePenrose = "mp"
    Drazin = "drazin"
    Group = "group"
    DMP = "dmp"
    Minkowski = "minkowski"
    MDMP = "mdmp"
    DualMDMP = "dual-mdmp"
    MCore = "mcore"


def moore_penrose(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse by reciprocal singular values above the rank cutoff."""
    A = as_matrix(A)
    W, s, Vh = np.linalg.svd(A, full_matrices=False)
    r = numeric_rank(A, tol)
    return (Vh[:r].conj().T / s[:r]) @ W[:, :r].conj().T


def drazin(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Drazin inverse from the chain of full-rank factorizations.

    ``A^D = B1...Bk (Ck Bk)^-(k+1) Ck...C1``. Nonsingular input returns
    ``A^-1`` and nilpotent input returns the zero matrix.
    """
    A = as_matrix(A)
    n = _require_square(A)
    if numeric_rank(A, tol) == n:
        return guarded_inv(A, tol, "A")
    try:
        chain = full_rank_chain(A, tol)
    except NilpotentTermination:
        return np.zeros_like(A)
    core_inv = guarded_inv(chain.core(), tol, "C_k B_k")
    return chain.left() @ np.linalg.matrix_power(core_inv, chain.k + 1) @ chain.right(1)


def drazin_hs(dec: HSDecomposition, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Drazin inverse assembled from a Hartwig-Spindelboeck decomposition.

    ``A^D = U [[(SK)^D, ((SK)^D)^2 SL], [0, 0]] U*`` where ``(SK)^D`` is the
    Drazin inverse of the ``r x r`` block ``Sigma K``.
    """
    n, r, U = dec.n, dec.r, dec.U
    SKd = drazin(dec.SigmaK, tol)
    core = np.zeros((n, n), dtype=np.result_type(U, SKd, float))
    core[:r, :r] = SKd
    core[:r, r:] = SKd @ SKd @ dec.SigmaL
    return U @ core @ U.conj().T


def group_inverse(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    A = as_matrix(A)
    k = matrix_index(A, tol)
    if k > 1:
        raise IndexTooLarge(f"group inverse needs Ind(A) <= 1, got {k}", index=k)
    return drazin(A, tol)


def dmp(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """DMP inverse ``A^D A A^+``."""
    A = as_matrix(A)
    return drazin(A, tol) @ A @ moore_penrose(A, tol)
