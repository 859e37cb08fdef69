"""Limit and integral representations of the m-DMP and Minkowski inverses.

The limit forms are evaluated along a geometric schedule ``lambda_j`` and
declared converged once successive iterates agree to ``conv_tol``. The integral
form is evaluated with composite Gauss-Legendre panels after an explicit check
that the exponent matrix is positive stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import (
    DEFAULT_TOL,
    Tolerances,
    _require_square,
    as_matrix,
    full_rank_chain,
    full_rank_factor,
    guarded_inv,
    matrix_index,
    minkowski_adjoint,
)
from .errors import (
    NilpotentTermination,
    NoConvergence,
    SingularShift,
    SpectrumNotStable,
    ZeroMatrix,
    ZeroPower,
)
from .minkowski import _require_exists, minkowski_inverse

__all__ = [
    "LimitSchedule",
    "LimitResult",
    "QuadratureConfig",
    "LIMIT_FORMULAS",
    "limit_term",
    "mdmp_limit",
    "minkowski_limit",
    "integrate_exp",
    "integral_closed_form",
    "mdmp_integral",
]

# A^k (lam I + A^m A^(k+1))^-1 A^m, A^k A^m (lam I + A^(k+1) A^m)^-1,
# (lam I + A^k)^-1 A^k A^m, (lam I + A^k)^-1 A^k (lam I + A~ A)^-1 A~
LIMIT_FORMULAS = ("left-shift", "right-shift", "power-shift", "double-shift")

LAMBDA_FLOOR = 1e-14


@dataclass(frozen=True)
class LimitSchedule:
    lambda_start: float = 1e-2
    decay: float = 0.1
    max_steps: int = 10
    conv_tol: float = 1e-8

    def __post_init__(self):
        if self.lambda_start <= 0 or not (0 < self.decay < 1) or self.max_steps < 1:
            raise ValueError("need lambda_start > 0, 0 < decay < 1 and max_steps >= 1")
        if self.conv_tol <= 0:
            raise ValueError("conv_tol must be positive")
        if self.lambda_start * self.decay**self.max_steps <= LAMBDA_FLOOR:
            raise ValueError(f"schedule reaches below the lambda floor {LAMBDA_FLOOR}")

    def lambdas(self) -> np.ndarray:
        return self.lambda_start * self.decay ** np.arange(self.max_steps + 1)


@dataclass
class LimitResult:
    value: np.ndarray
    lambdas_used: list = field(default_factory=list)
    residual_trace: list = field(default_factory=list)
    converged: bool = False
    skipped: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lambdas_used": list(map(float, self.lambdas_used)),
            "residual_trace": list(map(float, self.residual_trace)),
            "converged": self.converged,
            "skipped": list(map(float, self.skipped)),
        }


@dataclass(frozen=True)
class QuadratureConfig:
    """Discretization of the integral over ``[0, t_max]``.

    ``t_max=None`` selects ``40 / min Re(eig)``. Panel width is further capped
    at ``2 / spectral_radius`` so every panel resolves the fastest mode.
    """

    t_max: float | None = None
    panels: int = 64
    spectral_margin: float = 1e-6
    order: int = 16
    max_panels: int = 2_000_000

    def __post_init__(self):
        if self.panels < 8:
            raise ValueError("panels must be >= 8")
        if self.t_max is not None and self.t_max <= 0:
            raise ValueError("t_max must be positive")
        if self.spectral_margin <= 0:
            raise ValueError("spectral_margin must be positive")


def _shift_solve(lam, M, rhs, tol: Tolerances, left: bool = True):
    """``(lam I + M)^-1 rhs`` (``left``) or ``rhs (lam I + M)^-1``."""
    S = lam * np.eye(M.shape[0]) + M
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > tol.cond_max:
        raise SingularShift(f"lambda I + M is singular at lambda={lam:.3e}", lam=float(lam), cond=float(cond))
    if left:
        return np.linalg.solve(S, rhs)
    return np.linalg.solve(S.T, rhs.T).T


def _reduced_factors(A, k, tol):
    """Full-rank factors ``A^k = F H`` (empty when ``A^k = 0``)."""
    Ak = np.linalg.matrix_power(A, k)
    norm = float(np.linalg.norm(A, 2))
    try:
        return full_rank_factor(Ak, tol, scale=norm**k)
    except ZeroMatrix:
        n = A.shape[0]
        return np.zeros((n, 0), dtype=A.dtype), np.zeros((0, n), dtype=A.dtype)


def _minkowski_shift(lam, B, C, tol):
    """``(lam I + A~ A)^-1 A~`` for ``A = B C``, as ``C~ (lam I + B~ B C C~)^-1 B~``."""
    Bs, Cs = minkowski_adjoint(B), minkowski_adjoint(C)
    return Cs @ _shift_solve(lam, Bs @ B @ C @ Cs, Bs, tol)


def limit_term(
    A,
    formula: str,
    lam: float,
    tol: Tolerances = DEFAULT_TOL,
    *,
    k: int | None = None,
    Am=None,
    reduced: bool = True,
) -> np.ndarray:
    """Evaluate one limit expression at a fixed ``lam``.

    With ``reduced=True`` the ``n x n`` shifted inverse is moved onto the
    ``t x t`` factor of ``A^k = F H`` by the push-through identity
    ``F H (lam I + Z F H)^-1 = F (lam I + H Z F)^-1 H``. The value is the same
    but the shifted matrix stays well conditioned as ``lam -> 0``; the direct
    form loses about ``eps / lam`` to cancellation.
    """
    A = as_matrix(A)
    if formula not in LIMIT_FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; choose from {LIMIT_FORMULAS}")
    k = matrix_index(A, tol) if k is None else k
    if formula != "double-shift" and Am is None:
        Am = minkowski_inverse(A, tol)
    if not reduced:
        return _direct_term(A, formula, lam, tol, k, Am)
    F, H = _reduced_factors(A, k, tol)
    if F.shape[1] == 0:
        return np.zeros(A.shape, dtype=np.result_type(A, float))
    if formula == "double-shift":
        B, C = full_rank_factor(A, tol)
        return F @ _shift_solve(lam, H @ F, H @ _minkowski_shift(lam, B, C, tol), tol)
    HAm = H @ Am
    if formula == "power-shift":
        return F @ _shift_solve(lam, H @ F, HAm, tol)
    # left- and right-shift share the reduced form F (lam I + H A^m A F)^-1 H A^m
    return F @ _shift_solve(lam, HAm @ A @ F, HAm, tol)


def _direct_term(A, formula, lam, tol, k, Am):
    Ak = np.linalg.matrix_power(A, k)
    if formula == "double-shift":
        As = minkowski_adjoint(A)
        return _shift_solve(lam, Ak, Ak @ _shift_solve(lam, As @ A, As, tol), tol)
    if formula == "left-shift":
        return Ak @ _shift_solve(lam, Am @ Ak @ A, Am, tol)
    if formula == "right-shift":
        return _shift_solve(lam, Ak @ A @ Am, Ak @ Am, tol, left=False)
    return _shift_solve(lam, Ak, Ak @ Am, tol)


def _run_schedule(evaluate, sched: LimitSchedule, what: str) -> LimitResult:
    result = LimitResult(value=None)
    prev = None
    for lam in sched.lambdas():
        try:
            X = evaluate(lam)
        except SingularShift:
            result.skipped.append(float(lam))
            continue
        result.lambdas_used.append(float(lam))
        if prev is not None:
            diff = float(np.linalg.norm(X - prev))
            result.residual_trace.append(diff / max(float(np.linalg.norm(X)), np.finfo(float).tiny))
            tail = result.residual_trace[-3:]
            settled = all(a >= b for a, b in zip(tail, tail[1:]))
            if diff <= sched.conv_tol * float(np.linalg.norm(X)) and settled:
                result.value, result.converged = X, True
                return result
        prev = X
    result.value = prev
    raise NoConvergence(f"{what} did not converge along the lambda schedule", result=result)


def mdmp_limit(
    A, formula: str = "left-shift", sched: LimitSchedule = LimitSchedule(), tol: Tolerances = DEFAULT_TOL
) -> LimitResult:
    """m-DMP inverse as the ``lambda -> 0`` limit of one of ``LIMIT_FORMULAS``."""
    A = as_matrix(A)
    _require_square(A)
    _require_exists(A, tol)
    if formula not in LIMIT_FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; choose from {LIMIT_FORMULAS}")
    k = matrix_index(A, tol)
    Am = None if formula == "double-shift" else minkowski_inverse(A, tol)
    return _run_schedule(
        lambda lam: limit_term(A, formula, lam, tol, k=k, Am=Am), sched, f"{formula} limit"
    )


def minkowski_limit(A, sched: LimitSchedule = LimitSchedule(), tol: Tolerances = DEFAULT_TOL) -> LimitResult:
    """Minkowski inverse as ``lim (lam I + A~ A)^-1 A~``."""
    A = as_matrix(A)
    _require_exists(A, tol)
    if not np.any(A):
        return LimitResult(value=np.zeros(A.T.shape), converged=True)
    B, C = full_rank_factor(A, tol)
    return _run_schedule(lambda lam: _minkowski_shift(lam, B, C, tol), sched, "Minkowski limit")


def _check_spectrum(X, q: QuadratureConfig) -> np.ndarray:
    eig = np.linalg.eigvals(X)
    if eig.size == 0 or np.min(eig.real) <= q.spectral_margin:
        raise SpectrumNotStable(
            "exp(-X t) does not decay: min real part of the spectrum is "
            f"{np.min(eig.real) if eig.size else float('nan'):.3e}",
            eigenvalues=[[float(z.real), float(z.imag)] for z in eig],
        )
    return eig


def integrate_exp(X, q: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """``int_0^t_max exp(-X t) dt`` by composite Gauss-Legendre on equal panels.

    Panels share one width ``h``, so node exponentials are ``E(a) expm(-X h tau_i)``
    with ``E(a + h) = E(a) expm(-X h)`` propagated panel to panel.
    """
    X = np.asarray(X)
    eig = _check_spectrum(X, q)
    mu, rho = float(np.min(eig.real)), float(np.max(np.abs(eig)))
    t_max = 40.0 / mu if q.t_max is None else q.t_max
    n_panels = max(q.panels, int(np.ceil(t_max * rho / 2.0)))
    if n_panels > q.max_panels:
        raise SpectrumNotStable(
            f"spectrum too stiff for the panel budget (needs {n_panels} panels)",
            eigenvalues=[[float(z.real), float(z.imag)] for z in eig],
        )
    h = t_max / n_panels
    nodes, weights = np.polynomial.legendre.leggauss(q.order)
    offsets = 0.5 * h * (nodes + 1.0)
    # sum_i w_i exp(-X h tau_i), shared by every panel
    local = sum(0.5 * h * w * scipy.linalg.expm(-X * t) for w, t in zip(weights, offsets))
    step = scipy.linalg.expm(-X * h)
    dtype = np.result_type(X, float)
    E = np.eye(X.shape[0], dtype=dtype)
    total = np.zeros_like(E)
    for _ in range(n_panels):
        total += E @ local
        E = E @ step
    return total


def _integral_pieces(A, tol: Tolerances):
    A = as_matrix(A)
    _require_square(A)
    report = _require_exists(A, tol)
    if report.rank_A == 0:
        raise ZeroPower("A = 0: the integral representation is undefined")
    try:
        chain = full_rank_chain(A, tol)
    except NilpotentTermination:
        raise ZeroPower("A^k = 0: the integral representation is undefined")
    core_inv = guarded_inv(chain.core(), tol, "C_k B_k")
    M = chain.left() @ np.linalg.matrix_power(core_inv, chain.k) @ chain.right(2)
    B1 = chain.B[0]
    B1s = minkowski_adjoint(B1)
    return M, B1s @ B1, B1s


def integral_closed_form(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``M (B1~ B1)^-1 B1~``, the value the integral converges to."""
    M, X, B1s = _integral_pieces(A, tol)
    return M @ guarded_inv(X, tol, "B1~ B1") @ B1s


def mdmp_integral(A, q: QuadratureConfig = QuadratureConfig(), tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``int_0^inf M exp(-B1~ B1 t) B1~ dt`` with ``M = B1...Bk (CkBk)^-k Ck...C2``.

    Raises ``SpectrumNotStable`` unless every eigenvalue of ``B1~ B1`` has
    real part above ``q.spectral_margin``; the integral diverges otherwise.
    """
    M, X, B1s = _integral_pieces(A, tol)
    return M @ integrate_exp(X, q) @ B1s
