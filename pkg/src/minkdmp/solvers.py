"""Linear systems solved with the m-DMP inverse.

* :func:`solve_projected` -- general solution of ``A^k x = A^k A^m b``.
* :func:`least_norm_min` -- ``min ||(A A^+)~ A x - b||`` over ``x`` in ``R(A^k)``.
* :func:`cramer_solve` -- condensed Cramer's rule on the bordered matrix
  ``A^k + V (W V)^-1 W``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import drazin, moore_penrose
from .core import (
    DEFAULT_TOL,
    Tolerances,
    _require_square,
    as_matrix,
    as_vector,
    guarded_inv,
    hs_decompose,
    matrix_index,
    metric_partition,
    minkowski_adjoint,
    minkowski_metric,
    numeric_rank,
    range_basis,
)
from .errors import ConditionFailed, FullRank, ShapeMismatch, SingularBordered, SingularWV
from .minkowski import _require_exists, mdmp, mdmp_hs, minkowski_inverse

__all__ = [
    "SolveResult",
    "MinResult",
    "ComplementBases",
    "solve_projected",
    "least_norm_min",
    "build_complement_bases",
    "bordered_matrix",
    "cramer_solve",
]


@dataclass
class SolveResult:
    particular: np.ndarray
    homogeneous_projector: np.ndarray
    unique_on_rangeAk: bool
    residual: float
    x: np.ndarray | None = None
    x_residual: float | None = None

    def to_dict(self) -> dict:
        out = {
            "particular": _vec(self.particular),
            "unique_on_rangeAk": self.unique_on_rangeAk,
            "residual": self.residual,
        }
        if self.x is not None:
            out.update(x=_vec(self.x), x_residual=self.x_residual)
        return out


@dataclass
class MinResult:
    x: np.ndarray
    min_value: float
    b1: np.ndarray
    b2: np.ndarray
    condition_ok: bool
    objective: float
    membership_residual: float

    def to_dict(self) -> dict:
        return {
            "x": _vec(self.x),
            "min_value": self.min_value,
            "objective": self.objective,
            "b1": _vec(self.b1),
            "b2": _vec(self.b2),
            "condition_ok": self.condition_ok,
            "membership_residual": self.membership_residual,
        }


@dataclass(frozen=True)
class ComplementBases:
    """``R(V) = N(A^k)`` and ``N(W) = R(A^k)``; ``t = rank(A^k)``."""

    V: np.ndarray
    W: np.ndarray
    t: int

    def projector(self, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        """``E = V (W V)^-1 W``."""
        WV_inv = guarded_inv(self.W @ self.V, tol, "W V", exc=SingularWV)
        return self.V @ WV_inv @ self.W


def _vec(v):
    v = np.asarray(v)
    if np.iscomplexobj(v) and np.any(v.imag):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(z) for z in v.real]


def _power_data(A, tol):
    k = matrix_index(A, tol)
    Ak = np.linalg.matrix_power(A, k)
    scale = float(np.linalg.norm(A, 2)) ** k
    return k, Ak, scale


def solve_projected(A, b, v=None, tol: Tolerances = DEFAULT_TOL) -> SolveResult:
    """Solve ``A^k x = A^k A^m b``.

    ``particular = A^(D,m) b`` is the unique solution in ``R(A^k)``; with ``v``
    the general solution ``particular + (I - A^(D,m) A) v`` is also returned.
    """
    A = as_matrix(A)
    n = _require_square(A)
    b = as_vector(b, n)
    _require_exists(A, tol)
    k, Ak, scale = _power_data(A, tol)
    X = mdmp(A, tol)
    rhs = Ak @ (minkowski_inverse(A, tol) @ b)
    particular = X @ b
    residual = float(np.linalg.norm(Ak @ particular - rhs))

    Q = range_basis(Ak, tol, scale=scale)
    outside = float(np.linalg.norm(particular - Q @ (Q.conj().T @ particular)))
    in_range = outside <= tol.eq_rel_tol * max(1.0, float(np.linalg.norm(particular)))

    result = SolveResult(
        particular=particular,
        homogeneous_projector=np.eye(n) - X @ A,
        unique_on_rangeAk=bool(in_range),
        residual=residual,
    )
    if v is not None:
        v = as_vector(v, n, "v")
        x = particular + result.homogeneous_projector @ v
        result.x = x
        result.x_residual = float(np.linalg.norm(Ak @ x - rhs))
    return result


def least_norm_min(A, b, tol: Tolerances = DEFAULT_TOL) -> MinResult:
    """Minimize ``||(A A^+)~ A x - b||_F`` over ``x`` in ``R(A^k)``.

    ``b`` is split as ``(b1; b2) = U* G b`` with the ``U`` of the
    Hartwig-Spindelboeck decomposition. When ``G1^-1 b1`` lies in
    ``R((Sigma K)^D)`` the minimum is ``||b2||`` and is attained only at
    ``x = A^(D,m) b``. Otherwise ``ConditionFailed`` is raised.
    """
    A = as_matrix(A)
    n = _require_square(A)
    b = as_vector(b, n)
    _require_exists(A, tol)
    dec = hs_decompose(A, tol)
    r = dec.r
    if r == n:
        raise FullRank("the minimum problem needs rank(A) < n", rank=r)
    part = metric_partition(dec)
    G = minkowski_metric(n)
    c = dec.U.conj().T @ (G @ b)
    b1, b2 = c[:r], c[r:]

    y = np.linalg.solve(part.G1, b1)
    SKd = drazin(dec.SigmaK, tol)
    Q = range_basis(SKd, tol)
    y_norm = float(np.linalg.norm(y))
    membership = float(np.linalg.norm(y - Q @ (Q.conj().T @ y))) / y_norm if y_norm else 0.0
    if membership > tol.eq_rel_tol:
        raise ConditionFailed(
            "G1^-1 b1 is not in the range of (Sigma K)^D "
            f"(relative residual {membership:.3e})",
            membership_residual=membership,
        )

    x = mdmp_hs(dec, part, tol) @ b
    AAp = A @ moore_penrose(A, tol)
    objective = float(np.linalg.norm(minkowski_adjoint(AAp) @ A @ x - b))
    return MinResult(
        x=x,
        min_value=float(np.linalg.norm(b2)),
        b1=b1,
        b2=b2,
        condition_ok=True,
        objective=objective,
        membership_residual=membership,
    )


def build_complement_bases(A, tol: Tolerances = DEFAULT_TOL) -> ComplementBases:
    """Orthonormal ``V`` spanning ``N(A^k)`` and ``W`` annihilating ``R(A^k)``.

    Both come from one SVD ``A^k = P S Q*``: ``V = Q[:, t:]``,
    ``W = P[:, t:]*``. ``W V`` is nonsingular because ``R(A^k)`` and
    ``N(A^k)`` are complementary, but it is not the identity in general.
    """
    A = as_matrix(A)
    n = _require_square(A)
    k, Ak, scale = _power_data(A, tol)
    t = numeric_rank(Ak, tol, scale=scale)
    if t == n:
        raise FullRank("A^k is nonsingular; no complement bases needed", rank=t)
    P, _, Qh = np.linalg.svd(Ak)
    bases = ComplementBases(V=Qh[t:].conj().T, W=P[:, t:].conj().T, t=t)
    guarded_inv(bases.W @ bases.V, tol, "W V", exc=SingularWV)
    return bases


def _validate_bases(Ak, bases: ComplementBases, t: int, scale: float, tol: Tolerances) -> None:
    n = Ak.shape[0]
    V, W = np.asarray(bases.V), np.asarray(bases.W)
    if V.shape != (n, n - t) or W.shape != (n - t, n):
        raise ShapeMismatch(f"need V of shape {(n, n - t)} and W of shape {(n - t, n)}")
    ref = max(scale, 1.0)
    if np.linalg.norm(Ak @ V) > tol.eq_rel_tol * ref * max(1.0, np.linalg.norm(V)):
        raise ConditionFailed("R(V) is not contained in N(A^k)")
    if np.linalg.norm(W @ Ak) > tol.eq_rel_tol * ref * max(1.0, np.linalg.norm(W)):
        raise ConditionFailed("N(W) does not contain R(A^k)")
    if numeric_rank(V, tol) != n - t or numeric_rank(W, tol) != n - t:
        raise ConditionFailed("V and W must have full rank n - t")


def bordered_matrix(A, bases: ComplementBases | None = None, tol: Tolerances = DEFAULT_TOL):
    """``(A^k + E, E)`` with ``E = V (W V)^-1 W`` (``E = 0`` when ``A^k`` is nonsingular)."""
    A = as_matrix(A)
    n = _require_square(A)
    k, Ak, scale = _power_data(A, tol)
    t = numeric_rank(Ak, tol, scale=scale)
    if t == n:
        E = np.zeros((n, n))
    else:
        if bases is None:
            bases = build_complement_bases(A, tol)
        _validate_bases(Ak, bases, t, scale, tol)
        E = bases.projector(tol)
    return Ak + E, E


def cramer_solve(A, b, bases: ComplementBases | None = None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Components of ``A^(D,m) b`` as determinant ratios.

    ``x_i = det((A^k + E)(i -> A^k A^m b)) / det(A^k + E)`` where ``(i -> c)``
    replaces column ``i``. Bases are built from the SVD of ``A^k`` when omitted.
    """
    A = as_matrix(A)
    n = _require_square(A)
    b = as_vector(b, n)
    _require_exists(A, tol)
    M, _ = bordered_matrix(A, bases, tol)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > tol.cond_max:
        raise SingularBordered(f"A^k + E is numerically singular (cond={cond:.3e})", cond=float(cond))
    k = matrix_index(A, tol)
    rhs = np.linalg.matrix_power(A, k) @ (minkowski_inverse(A, tol) @ b)
    denom = np.linalg.det(M)
    x = np.empty(n, dtype=np.result_type(M, rhs, float))
    for i in range(n):
        Mi = M.copy().astype(x.dtype)
        Mi[:, i] = rhs
        x[i] = np.linalg.det(Mi) / denom
    return x
