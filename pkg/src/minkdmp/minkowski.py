"""Minkowski inverse, m-DMP inverse (four routes), dual m-DMP and m-core inverses."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .classical import drazin
from .core import (
    DEFAULT_TOL,
    HSDecomposition,
    MetricPartition,
    Tolerances,
    _require_square,
    as_matrix,
    delta_matrix,
    full_rank_chain,
    full_rank_factor,
    guarded_inv,
    hs_decompose,
    matrix_index,
    metric_partition,
    minkowski_adjoint,
    minkowski_metric,
    numeric_rank,
    rel_residual,
)
from .errors import (
    IndexTooLarge,
    NearSingularFactor,
    NilpotentTermination,
    NotExists,
    SingularDelta,
    SingularG1,
    ZeroPower,
)

__all__ = [
    "ExistenceReport",
    "minkowski_exists",
    "minkowski_inverse",
    "minkowski_inverse_hs",
    "mdmp",
    "mdmp_hs",
    "mdmp_hs_forms",
    "mdmp_fullrank",
    "mdmp_composite",
    "dual_mdmp",
    "dual_mdmp_hs",
    "m_core",
    "projector_AAdm",
    "projector_AdmA",
    "MDMP_ROUTES",
]


@dataclass(frozen=True)
class ExistenceReport:
    exists: bool
    rank_A: int
    rank_AAs: int
    rank_AsA: int
    rank_AsAAs: int

    def to_dict(self) -> dict:
        return asdict(self)


def minkowski_exists(A, tol: Tolerances = DEFAULT_TOL) -> ExistenceReport:
    """Rank test for the existence of the Minkowski inverse.

    ``A^m`` exists iff ``rank(A~ A A~) == rank(A)``, equivalently
    ``rank(A A~) == rank(A~ A) == rank(A)``.
    """
    A = as_matrix(A)
    As = minkowski_adjoint(A)
    s = float(np.linalg.norm(A, 2))
    AAs, AsA = A @ As, As @ A
    report = ExistenceReport(
        exists=False,
        rank_A=numeric_rank(A, tol),
        rank_AAs=numeric_rank(AAs, tol, scale=s * s),
        rank_AsA=numeric_rank(AsA, tol, scale=s * s),
        rank_AsAAs=numeric_rank(AsA @ As, tol, scale=s**3),
    )
    exists = report.rank_AsAAs == report.rank_A
    return ExistenceReport(**{**asdict(report), "exists": exists})


def _require_exists(A, tol: Tolerances) -> ExistenceReport:
    report = minkowski_exists(A, tol)
    if not report.exists:
        raise NotExists(
            "the Minkowski inverse does not exist: rank(A~ A A~) = "
            f"{report.rank_AsAAs} != rank(A) = {report.rank_A}",
            report=report,
        )
    return report


def minkowski_inverse(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Minkowski inverse ``C~ (C C~)^-1 (B~ B)^-1 B~`` from a full-rank factorization."""
    A = as_matrix(A)
    report = _require_exists(A, tol)
    if report.rank_A == 0:
        return np.zeros(A.T.shape, dtype=A.dtype)
    B, C = full_rank_factor(A, tol)
    Bs, Cs = minkowski_adjoint(B), minkowski_adjoint(C)
    CCs_inv = guarded_inv(C @ Cs, tol, "C C~", scale=1.0)
    BsB_inv = guarded_inv(Bs @ B, tol, "B~ B", scale=float(np.linalg.norm(B, 2)) ** 2)
    return Cs @ CCs_inv @ BsB_inv @ Bs


def _hs_inverses(dec: HSDecomposition, part: MetricPartition, tol: Tolerances):
    Delta = delta_matrix(dec)
    # both are compressions of unitary-scale matrices, so their natural size is 1
    Delta_inv = guarded_inv(Delta, tol, "Delta", exc=SingularDelta, scale=1.0)
    G1_inv = guarded_inv(part.G1, tol, "G1", exc=SingularG1, scale=1.0)
    return Delta_inv, G1_inv


def minkowski_inverse_hs(
    dec: HSDecomposition, tol: Tolerances = DEFAULT_TOL, part: MetricPartition | None = None
) -> np.ndarray:
    """Canonical form ``G U [[K*(G1 S Delta)^-1, 0], [L*(G1 S Delta)^-1, 0]] U* G``."""
    part = metric_partition(dec) if part is None else part
    Delta_inv, G1_inv = _hs_inverses(dec, part, tol)
    n, r, U = dec.n, dec.r, dec.U
    # (G1 S Delta)^-1 = Delta^-1 S^-1 G1^-1
    core_inv = Delta_inv @ (G1_inv / dec.Sigma[:, None])
    block = np.zeros((n, n), dtype=np.result_type(U, core_inv, float))
    block[:, :r] = dec.KL.conj().T @ core_inv
    G = minkowski_metric(n)
    return G @ U @ block @ U.conj().T @ G


def mdmp(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """m-DMP inverse ``A^D A A^m`` (the definitional route).

    Nilpotent ``A`` gives the zero matrix.
    """
    A = as_matrix(A)
    _require_square(A)
    _require_exists(A, tol)
    return drazin(A, tol) @ A @ minkowski_inverse(A, tol)


def mdmp_hs_forms(
    dec: HSDecomposition, part: MetricPartition | None = None, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Both block forms of the m-DMP inverse from a Hartwig-Spindelboeck decomposition.

    Returns ``U [[(SK)^D G1^-1, 0], [0, 0]] U* G`` and
    ``U [[(SK)^D, (SK)^D G1^-1 G2], [0, 0]] U*``.
    """
    part = metric_partition(dec) if part is None else part
    _, G1_inv = _hs_inverses(dec, part, tol)
    n, r, U = dec.n, dec.r, dec.U
    SKd = drazin(dec.SigmaK, tol)
    dtype = np.result_type(U, SKd, G1_inv, float)

    first = np.zeros((n, n), dtype=dtype)
    first[:r, :r] = SKd @ G1_inv
    first = U @ first @ U.conj().T @ minkowski_metric(n)

    second = np.zeros((n, n), dtype=dtype)
    second[:r, :r] = SKd
    second[:r, r:] = SKd @ G1_inv @ part.G2
    second = U @ second @ U.conj().T
    return first, second


def mdmp_hs(
    dec: HSDecomposition, part: MetricPartition | None = None, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    first, second = mdmp_hs_forms(dec, part, tol)
    _, rel = rel_residual(first, second)
    if rel > 10 * tol.eq_rel_tol:
        raise NearSingularFactor(
            f"the two block forms disagree (relative residual {rel:.3e})", residual=rel
        )
    return first


def mdmp_fullrank(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Chain formula ``B1...Bk (CkBk)^-k Ck...C2 (B1~ B1)^-1 B1~``.

    Raises ``ZeroPower`` when ``A^k = 0``, where the formula is undefined.
    """
    A = as_matrix(A)
    _require_square(A)
    report = _require_exists(A, tol)
    if report.rank_A == 0:
        raise ZeroPower("A = 0: the chain formula is undefined")
    try:
        chain = full_rank_chain(A, tol)
    except NilpotentTermination as exc:
        raise ZeroPower("A^k = 0: the chain formula is undefined", step=exc.details.get("step"))
    k = chain.k
    B1 = chain.B[0]
    B1s = minkowski_adjoint(B1)
    core_inv = guarded_inv(chain.core(), tol, "C_k B_k")
    BsB_inv = guarded_inv(B1s @ B1, tol, "B1~ B1")
    return chain.left() @ np.linalg.matrix_power(core_inv, k) @ chain.right(2) @ BsB_inv @ B1s


def mdmp_composite(A, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """``A A^m (I - Abar A A^m)^D`` and ``(I - Abar A A^m)^D A A^m`` with ``Abar = I - A``."""
    A = as_matrix(A)
    n = _require_square(A)
    P = A @ minkowski_inverse(A, tol)
    eye = np.eye(n)
    T = eye - (eye - A) @ P
    Td = drazin(T, tol)
    return P @ Td, Td @ P


def dual_mdmp(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Dual m-DMP inverse ``A^m A A^D``."""
    A = as_matrix(A)
    _require_square(A)
    return minkowski_inverse(A, tol) @ A @ drazin(A, tol)


def dual_mdmp_hs(dec: HSDecomposition, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Block form ``G U [[K*; L*] Delta^-1 [K (SK)^D, K ((SK)^D)^2 SL]] U*``."""
    part = metric_partition(dec)
    Delta_inv, _ = _hs_inverses(dec, part, tol)
    SKd = drazin(dec.SigmaK, tol)
    row = np.hstack([dec.K @ SKd, dec.K @ SKd @ SKd @ dec.SigmaL])
    block = dec.KL.conj().T @ Delta_inv @ row
    return minkowski_metric(dec.n) @ dec.U @ block @ dec.U.conj().T


def m_core(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """m-core inverse, the index-one case of the m-DMP inverse."""
    A = as_matrix(A)
    k = matrix_index(A, tol)
    if k > 1:
        raise IndexTooLarge(f"m-core inverse needs Ind(A) <= 1, got {k}", index=k)
    return mdmp(A, tol)


def projector_AAdm(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``A A^(D,m)``: projector onto R(A^k) along N(A^k A^m)."""
    A = as_matrix(A)
    return A @ mdmp(A, tol)


def projector_AdmA(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``A^(D,m) A``, which equals ``A^D A``."""
    A = as_matrix(A)
    return mdmp(A, tol) @ A


def _route_hs(A, tol=DEFAULT_TOL):
    return mdmp_hs(hs_decompose(A, tol), tol=tol)


def _route_fullrank(A, tol=DEFAULT_TOL):
    return mdmp_fullrank(A, tol)


MDMP_ROUTES = {
    "definitional": mdmp,
    "hs": _route_hs,
    "fullrank": _route_fullrank,
    "composite-left": lambda A, tol=DEFAULT_TOL: mdmp_composite(A, tol)[0],
    "composite-right": lambda A, tol=DEFAULT_TOL: mdmp_composite(A, tol)[1],
}
