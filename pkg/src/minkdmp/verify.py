"""Residual checks for defining equation systems and characterizations.

Each check returns an :class:`EquationReport`: one line per equation with its
absolute and relative Frobenius residual. Subspace inclusions are measured by
the part of the candidate that falls outside the target subspace, computed
against an orthonormal basis obtained at ``rank_rel_tol``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .classical import drazin
from .core import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    full_rank_factor,
    matrix_index,
    minkowski_adjoint,
    null_basis,
    numeric_rank,
    range_basis,
    rel_residual,
)
from .errors import ShapeMismatch
from .minkowski import _require_exists, mdmp, minkowski_exists, minkowski_inverse

__all__ = [
    "EquationResidual",
    "EquationReport",
    "check_penrose",
    "check_minkowski",
    "check_drazin",
    "check_mdmp_system",
    "check_characterizations",
    "property_suite",
    "oblique_projector",
    "random_instance",
    "random_instances",
]


@dataclass(frozen=True)
class EquationResidual:
    label: str
    absolute: float
    relative: float

    def to_dict(self) -> dict:
        return {"label": self.label, "absolute": self.absolute, "relative": self.relative}


@dataclass
class EquationReport:
    system_name: str
    tolerance: float
    per_equation: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.relative <= self.tolerance for e in self.per_equation)

    def failed_labels(self) -> list[str]:
        return [e.label for e in self.per_equation if e.relative > self.tolerance]

    def add(self, label: str, lhs, rhs) -> None:
        self.per_equation.append(EquationResidual(label, *rel_residual(lhs, rhs)))

    def add_value(self, label: str, absolute: float, relative: float | None = None) -> None:
        rel = absolute if relative is None else relative
        self.per_equation.append(EquationResidual(label, float(absolute), float(rel)))

    def to_dict(self) -> dict:
        return {
            "system_name": self.system_name,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "per_equation": [e.to_dict() for e in self.per_equation],
            "notes": self.notes,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _conform(A, X, square: bool = False):
    A, X = as_matrix(A, "A"), as_matrix(X, "X")
    if X.shape != A.T.shape:
        raise ShapeMismatch(f"X must have shape {A.T.shape}, got {X.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"A must be square, got shape {A.shape}")
    return A, X


def _power(A, k):
    return np.linalg.matrix_power(A, k)


def _outside_range(X, basis) -> tuple[float, float]:
    """Size of the component of ``X``'s columns orthogonal to ``span(basis)``."""
    resid = X - basis @ (basis.conj().T @ X)
    a = float(np.linalg.norm(resid))
    return a, a / max(1.0, float(np.linalg.norm(X)))


def _on_null(X, null) -> tuple[float, float]:
    """Size of ``X`` restricted to the subspace spanned by ``null``."""
    a = float(np.linalg.norm(X @ null))
    return a, a / max(1.0, float(np.linalg.norm(X)))


def oblique_projector(range_of, null_of, tol: Tolerances = DEFAULT_TOL, scales=(None, None)):
    """Projector onto ``R(range_of)`` along ``N(null_of)``.

    Uses ``T (Z* T)^-1 Z*`` with ``T`` a basis of the range and ``Z`` a basis
    of ``R(null_of*)``; the two subspaces must be complementary.
    """
    T = range_basis(range_of, tol, scales[0])
    Z = range_basis(np.asarray(null_of).conj().T, tol, scales[1])
    if T.shape[1] != Z.shape[1]:
        raise ShapeMismatch("range and null space are not complementary")
    if T.shape[1] == 0:
        n = np.asarray(range_of).shape[0]
        return np.zeros((n, n))
    return T @ np.linalg.solve(Z.conj().T @ T, Z.conj().T)


def check_penrose(A, X, tol: Tolerances = DEFAULT_TOL) -> EquationReport:
    A, X = _conform(A, X)
    rep = EquationReport("penrose", tol.eq_rel_tol)
    AX, XA = A @ X, X @ A
    rep.add("AXA=A", AX @ A, A)
    rep.add("XAX=X", XA @ X, X)
    rep.add("(AX)*=AX", AX.conj().T, AX)
    rep.add("(XA)*=XA", XA.conj().T, XA)
    return rep


def check_minkowski(A, X, tol: Tolerances = DEFAULT_TOL) -> EquationReport:
    A, X = _conform(A, X)
    rep = EquationReport("minkowski", tol.eq_rel_tol)
    AX, XA = A @ X, X @ A
    rep.add("AXA=A", AX @ A, A)
    rep.add("XAX=X", XA @ X, X)
    rep.add("(AX)~=AX", minkowski_adjoint(AX), AX)
    rep.add("(XA)~=XA", minkowski_adjoint(XA), XA)
    return rep


def check_drazin(A, X, tol: Tolerances = DEFAULT_TOL) -> EquationReport:
    A, X = _conform(A, X, square=True)
    k = matrix_index(A, tol)
    rep = EquationReport("drazin", tol.eq_rel_tol, notes={"index": k})
    Ak = _power(A, k)
    rep.add("XAX=X", X @ A @ X, X)
    rep.add("AX=XA", A @ X, X @ A)
    rep.add("A^(k+1)X=A^k", Ak @ A @ X, Ak)
    return rep


def check_mdmp_system(A, X, tol: Tolerances = DEFAULT_TOL) -> EquationReport:
    """Residuals of ``XAX = X``, ``XA = A^D A``, ``A^k X = A^k A^m``."""
    A, X = _conform(A, X, square=True)
    _require_exists(A, tol)
    k = matrix_index(A, tol)
    Ak, AD, Am = _power(A, k), drazin(A, tol), minkowski_inverse(A, tol)
    rep = EquationReport("mdmp", tol.eq_rel_tol, notes={"index": k})
    rep.add("XAX=X", X @ A @ X, X)
    rep.add("XA=A^D A", X @ A, AD @ A)
    rep.add("A^k X=A^k A^m", Ak @ X, Ak @ Am)
    return rep


def check_characterizations(A, X, tol: Tolerances = DEFAULT_TOL) -> list[EquationReport]:
    """Equivalent characterizations of the m-DMP inverse, one report per clause.

    Every clause passes iff ``X`` is the m-DMP inverse of ``A``.
    """
    A, X = _conform(A, X, square=True)
    _require_exists(A, tol)
    k = matrix_index(A, tol)
    norm = float(np.linalg.norm(A, 2))
    Ak, AD, Am = _power(A, k), drazin(A, tol), minkowski_inverse(A, tol)
    AkAm = Ak @ Am
    range_Ak = range_basis(Ak, tol, scale=norm**k)
    null_AkAm = null_basis(AkAm, tol, scale=norm**k * float(np.linalg.norm(Am, 2)))
    eq = tol.eq_rel_tol

    def report(name):
        return EquationReport(name, eq, notes={"index": k})

    reports = []

    rep = report("range-inclusion/drazin-product")
    rep.add_value("R(X)<=R(A^k)", *_outside_range(X, range_Ak))
    rep.add("A^D X=A^D A^m", AD @ X, AD @ Am)
    reports.append(rep)

    rep = report("range-inclusion/power-product")
    rep.add_value("R(X)<=R(A^k)", *_outside_range(X, range_Ak))
    rep.add("A^k X=A^k A^m", Ak @ X, AkAm)
    reports.append(rep)

    rep = report("null-inclusion/core-projector")
    rep.add_value("N(A^k A^m)<=N(X)", *_on_null(X, null_AkAm))
    rep.add("XA=AA^D", X @ A, A @ AD)
    reports.append(rep)

    rep = report("null-inclusion/power-identity")
    rep.add_value("N(A^k A^m)<=N(X)", *_on_null(X, null_AkAm))
    rep.add("XA^(k+1)=A^k", X @ Ak @ A, Ak)
    reports.append(rep)

    AX, AX2 = A @ X, A @ X @ X
    rep = report("square-identity/product")
    rep.add("AX^2=X", AX2, X)
    rep.add("AX=A^2 A^D A^m", AX, A @ A @ AD @ Am)
    reports.append(rep)

    P = oblique_projector(Ak, AD @ Am, tol, scales=(norm**k, None))
    rep = report("square-identity/projector")
    rep.add("AX^2=X", AX2, X)
    rep.add("AX=P[R(A^k),N(A^D A^m)]", AX, P)
    reports.append(rep)

    rep = report("square-identity/power-product")
    rep.add("AX^2=X", AX2, X)
    rep.add("A^k X=A^k A^m", Ak @ X, AkAm)
    reports.append(rep)
    return reports


def property_suite(A, tol: Tolerances = DEFAULT_TOL) -> EquationReport:
    """Rank, projector and power identities of the m-DMP inverse.

    The commutation probe records whether ``A X = X A`` and whether
    ``X = A^D``; the two booleans must agree.
    """
    A = as_matrix(A)
    _require_exists(A, tol)
    k = matrix_index(A, tol)
    norm = float(np.linalg.norm(A, 2))
    X = mdmp(A, tol)
    Ak, AD, Am = _power(A, k), drazin(A, tol), minkowski_inverse(A, tol)
    rep = EquationReport("mdmp-properties", tol.eq_rel_tol, notes={"index": k})

    rank_X = numeric_rank(X, tol)
    rank_Ak = numeric_rank(Ak, tol, scale=norm**k)
    rep.add_value("rank(X)=rank(A^k)", abs(rank_X - rank_Ak))
    rep.notes.update(rank_X=rank_X, rank_Ak=rank_Ak)

    AX, XA = A @ X, X @ A
    rep.add("(AX)^2=AX", AX @ AX, AX)
    rep.add("(XA)^2=XA", XA @ XA, XA)
    rep.add("XA=A^D A", XA, AD @ A)

    ADAm = AD @ Am
    for l in range(1, 5):
        if l % 2 == 0:
            rhs = np.linalg.matrix_power(ADAm, l // 2)
        else:
            rhs = A @ np.linalg.matrix_power(ADAm, (l + 1) // 2)
        rep.add(f"X^{l} power law", np.linalg.matrix_power(X, l), rhs)

    rep.add("X=(A^2 A^m)^D", drazin(A @ A @ Am, tol), X)
    rep.add("((X^D)^D)=X", drazin(drazin(X, tol), tol), X)

    decide = 10 * tol.eq_rel_tol
    commutes = rel_residual(AX, XA)[1] <= decide
    equals_drazin = rel_residual(X, AD)[1] <= decide
    rep.notes.update(commutes=commutes, equals_drazin=equals_drazin)
    rep.add_value("commutes <=> X=A^D", 0.0 if commutes == equals_drazin else 1.0)
    return rep


# -- random valid instances ---------------------------------------------------

def _haar_unitary(n, rng, complex_entries=True):
    Z = rng.standard_normal((n, n))
    if complex_entries:
        Z = Z + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def _nilpotent_block(sizes, rng):
    m = sum(sizes)
    N = np.zeros((m, m))
    pos = 0
    for s in sizes:
        for i in range(s - 1):
            N[pos + i, pos + i + 1] = rng.uniform(0.5, 1.5)
        pos += s
    return N


def random_instance(
    n: int,
    index: int,
    rng,
    tol: Tolerances = DEFAULT_TOL,
    complex_entries: bool = True,
    max_cond: float = 1e6,
    max_tries: int = 200,
) -> np.ndarray:
    """Draw an ``n x n`` matrix of the given index whose Minkowski inverse exists.

    ``A = S diag(C, N) S^-1`` with ``C`` an invertible upper-triangular core,
    ``N`` nilpotent Jordan blocks (largest of size ``index``) and ``S`` a
    well-conditioned similarity. Candidates are rejected unless the existence
    rank test passes, the index is recovered numerically and the full-rank
    factors ``C C~`` and ``B~ B`` have condition numbers below ``max_cond``.
    """
    rng = np.random.default_rng(rng)
    if index < 0 or index >= n:
        raise ValueError("need 0 <= index < n so that A^k != 0")
    for _ in range(max_tries):
        if index == 0:
            sizes = []
        else:
            m_nil = int(rng.integers(index, n))
            sizes = [index]
            rest = m_nil - index
            while rest > 0:
                s = int(rng.integers(1, min(index, rest) + 1))
                sizes.append(s)
                rest -= s
        m_core = n - sum(sizes)
        mag = rng.uniform(0.5, 2.0, m_core)
        if complex_entries:
            diag = mag * np.exp(2j * np.pi * rng.uniform(size=m_core))
            Cc = np.triu(rng.standard_normal((m_core, m_core)) + 1j * rng.standard_normal((m_core, m_core)), 1)
        else:
            diag = mag * rng.choice([-1.0, 1.0], m_core)
            Cc = np.triu(rng.standard_normal((m_core, m_core)), 1)
        Cc = 0.5 * Cc + np.diag(diag)
        J = np.zeros((n, n), dtype=complex if complex_entries else float)
        J[:m_core, :m_core] = Cc
        if sizes:
            J[m_core:, m_core:] = _nilpotent_block(sizes, rng)
        U1 = _haar_unitary(n, rng, complex_entries)
        U2 = _haar_unitary(n, rng, complex_entries)
        sv = rng.uniform(0.5, 2.0, n)
        S = (U1 * sv) @ U2.conj().T
        S_inv = U2 @ (U1.conj().T / sv[:, None])
        A = S @ J @ S_inv
        if not complex_entries:
            A = A.real
        if matrix_index(A, tol) != index:
            continue
        if not minkowski_exists(A, tol).exists:
            continue
        B, C = full_rank_factor(A, tol)
        if np.linalg.cond(C @ minkowski_adjoint(C)) > max_cond:
            continue
        if np.linalg.cond(minkowski_adjoint(B) @ B) > max_cond:
            continue
        return A
    raise RuntimeError(f"no valid instance found in {max_tries} tries (n={n}, index={index})")


def random_instances(count: int, seed: int = 0, sizes=range(3, 9), indices=(1, 2, 3), tol=DEFAULT_TOL):
    """Seeded list of ``(n, index, A)`` cycling over the requested sizes and indices."""
    rng = np.random.default_rng(seed)
    combos = [(n, q) for n in sizes for q in indices if q < n]
    out = []
    for i in range(count):
        n, q = combos[i % len(combos)]
        out.append((n, q, random_instance(n, q, rng, tol)))
    return out
