"""Published worked examples as regression fixtures.

Matrices are stored at the printed precision (five decimals), so comparisons
against them use an absolute tolerance of ``1e-4`` by default. Each fixture
is an :class:`Assertion` whose ``run`` returns the observed error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import dmp, drazin, moore_penrose
from .core import DEFAULT_TOL, Tolerances, hs_decompose, matrix_index, metric_partition
from .errors import MdmpError, SpectrumNotStable
from .minkowski import dual_mdmp, mdmp, minkowski_exists, minkowski_inverse
from .representations import LIMIT_FORMULAS, LimitSchedule, limit_term, mdmp_integral, mdmp_limit
from .solvers import (
    ComplementBases,
    bordered_matrix,
    cramer_solve,
    least_norm_min,
    solve_projected,
)

__all__ = [
    "FIXTURE_TOL",
    "EXAMPLE_A",
    "EXAMPLE_INVERSES",
    "SYSTEM_DATA",
    "shift_closed_form",
    "double_shift_closed_form",
    "Assertion",
    "Outcome",
    "ASSERTIONS",
    "run_assertions",
]

FIXTURE_TOL = 1e-4
CLOSED_FORM_LAMBDA = 1e-6
CLOSED_FORM_TOL = 1e-12
LIMIT_RESIDUAL_MAX = 1e-5


def _m(rows):
    return np.array(rows, dtype=float)


EXAMPLE_A = _m(
    [
        [1, 0, 0, 0, 0],
        [1, 0, 0, 1, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ]
)

_Z = [0, 0, 0, 0, 0]

EXAMPLE_INVERSES = {
    "mp": _m(
        [
            [0.66667, 0.33333, -0.33333, 0, 0],
            _Z,
            _Z,
            [-0.33333, 0.33333, 0.66667, 0, 0],
            _Z,
        ]
    ),
    "drazin": _m([[1, 0, 0, 0, 0], [1, 0, 0, 0, 0], _Z, _Z, _Z]),
    "dmp": _m(
        [
            [0.66667, 0.33333, -0.33333, 0, 0],
            [0.66667, 0.33333, -0.33333, 0, 0],
            _Z,
            _Z,
            _Z,
        ]
    ),
    "minkowski": _m([[2, -1, 1, 0, 0], _Z, _Z, [-1, 1, 0, 0, 0], _Z]),
    "mdmp": _m([[2, -1, 1, 0, 0], [2, -1, 1, 0, 0], _Z, _Z, _Z]),
    "dual-mdmp": _m([[1, 0, 0, 0, 0], _Z, _Z, _Z, _Z]),
}

SYSTEM_DATA = {
    "b": np.array([0.15735, 0.15735, 0.1415, -0.1, -0.2]),
    "V": np.vstack([np.zeros(4), np.eye(4)]),
    "W": _m([[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [-1, 1, 0, 0, 0]]),
    "U": _m(
        [
            [-0.40825, 0.70711, 0, 0, 0.57735],
            [-0.8165, 0, 0, 0, -0.57735],
            [-0.40825, -0.70711, 0, 0, 0.57735],
            [0, 0, 0, 1, 0],
            [0, 0, 1, 0, 0],
        ]
    ),
    "Sigma": np.array([1.7321, 1.0]),
    "K": _m([[0.28868, -0.5], [-0.28868, 0.5]]),
    "L": _m([[0, -0.70711, -0.40825], [0, -0.70711, 0.40825]]),
    "G1": _m([[-0.66667, -0.57735], [-0.57735, 0]]),
    "b1": np.array([0.12201, 0.21132]),
    "b2": np.array([0.2, 0.1, 0.1]),
    "SKd": _m([[0.5, -0.86603], [-0.28868, 0.5]]),
    "Ak": _m([[1, 0, 0, 0, 0], [1, 0, 0, 0, 0], _Z, _Z, _Z]),
    "E": _m([_Z, [-1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]]),
    "x": np.array([0.29885, 0.29885, 0, 0, 0]),
    "min_value": 0.24495,
}


def shift_closed_form(lam: float) -> np.ndarray:
    """Value of the left-, right- and power-shift expressions on ``EXAMPLE_A``."""
    X = np.zeros((5, 5))
    X[:2, :3] = np.array([2.0, -1.0, 1.0]) / (lam + 1)
    return X


def double_shift_closed_form(lam: float) -> np.ndarray:
    """Value of the double-shift expression on ``EXAMPLE_A``."""
    X = np.zeros((5, 5))
    X[:2, :3] = np.array([lam + 2, -lam - 1, 1.0]) / (lam + 1) ** 3
    return X


@dataclass
class Outcome:
    name: str
    passed: bool
    error: float | None
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "error": self.error,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class Assertion:
    """One published value and how to recompute it.

    ``run(tol)`` returns ``(error, detail)``; the assertion passes when
    ``error <= threshold``. ``exact`` assertions compare closed forms
    and use ``min(threshold, 1e-12)``.
    """

    name: str
    description: str
    run: Callable[[Tolerances], tuple[float, str]]
    exact: bool = False

    def evaluate(self, tol: Tolerances, fixture_tol: float) -> Outcome:
        threshold = min(fixture_tol, CLOSED_FORM_TOL) if self.exact else fixture_tol
        try:
            err, detail = self.run(tol)
        except MdmpError as exc:
            return Outcome(self.name, False, None, threshold, f"{type(exc).__name__}: {exc}")
        return Outcome(self.name, bool(err <= threshold), float(err), threshold, detail)


def _maxabs(X, Y) -> float:
    return float(np.max(np.abs(np.asarray(X) - np.asarray(Y))))


def _matrix_check(fn, expected):
    return lambda tol: (_maxabs(fn(EXAMPLE_A, tol), expected), "")


def _index_check(tol):
    k = matrix_index(EXAMPLE_A, tol)
    return float(abs(k - 2)), f"Ind(A) = {k}"


def _existence_check(tol):
    rep = minkowski_exists(EXAMPLE_A, tol)
    ok = rep.exists and rep.rank_A == 2 and rep.rank_AsAAs == 2
    return (0.0 if ok else np.inf), f"rank(A) = {rep.rank_A}, rank(A~AA~) = {rep.rank_AsAAs}"


def _distinct_check(tol):
    gap = _maxabs(mdmp(EXAMPLE_A, tol), dual_mdmp(EXAMPLE_A, tol))
    # passes (error 0) when the two inverses differ by more than the printed precision
    return (0.0 if gap > FIXTURE_TOL else np.inf), f"max |A^(D,m) - A^(m,D)| = {gap:.5f}"


def _closed_form_check(formula):
    closed = double_shift_closed_form if formula == "double-shift" else shift_closed_form

    def run(tol):
        X = limit_term(EXAMPLE_A, formula, CLOSED_FORM_LAMBDA, tol)
        return _maxabs(X, closed(CLOSED_FORM_LAMBDA)), f"lambda = {CLOSED_FORM_LAMBDA:g}"

    return run


def _limit_check(formula):
    def run(tol):
        res = mdmp_limit(EXAMPLE_A, formula, LimitSchedule(), tol)
        final = res.residual_trace[-1]
        if final >= LIMIT_RESIDUAL_MAX:
            return np.inf, f"final residual {final:.2e}"
        return _maxabs(res.value, EXAMPLE_INVERSES["mdmp"]), f"final residual {final:.2e}"

    return run


def _integral_guard(tol):
    try:
        mdmp_integral(EXAMPLE_A, tol=tol)
    except SpectrumNotStable as exc:
        return 0.0, f"SpectrumNotStable: {exc}"
    return np.inf, "integral accepted an unstable spectrum"


def _hs_check(key):
    def run(tol):
        dec = hs_decompose(EXAMPLE_A, tol)
        part = metric_partition(dec)
        got = {
            "U": dec.U,
            "Sigma": dec.Sigma,
            "K": dec.K,
            "L": dec.L,
            "G1": part.G1,
            "SKd": drazin(dec.SigmaK, tol),
        }[key]
        return _maxabs(got, SYSTEM_DATA[key]), ""

    return run


def _split_check(key):
    def run(tol):
        res = least_norm_min(EXAMPLE_A, SYSTEM_DATA["b"], tol)
        return _maxabs(getattr(res, key), SYSTEM_DATA[key]), ""

    return run


def _printed_bases():
    return ComplementBases(SYSTEM_DATA["V"], SYSTEM_DATA["W"], 1)


def _solution_check(mode):
    def run(tol):
        b = SYSTEM_DATA["b"]
        if mode == "projected":
            x = solve_projected(EXAMPLE_A, b, tol=tol).particular
        elif mode == "leastnorm":
            x = least_norm_min(EXAMPLE_A, b, tol).x
        elif mode == "cramer-printed":
            x = cramer_solve(EXAMPLE_A, b, _printed_bases(), tol)
        else:
            x = cramer_solve(EXAMPLE_A, b, None, tol)
        return _maxabs(x, SYSTEM_DATA["x"]), ""

    return run


def _min_value_check(tol):
    res = least_norm_min(EXAMPLE_A, SYSTEM_DATA["b"], tol)
    return abs(res.min_value - SYSTEM_DATA["min_value"]), f"min = {res.min_value:.5f}"


def _build_assertions() -> list[Assertion]:
    out = [
        Assertion("inverse.existence", "rank(A~AA~) = rank(A) = 2", _existence_check),
        Assertion("inverse.index", "Ind(A) = 2", _index_check),
    ]
    fns = {
        "mp": moore_penrose,
        "drazin": drazin,
        "dmp": dmp,
        "minkowski": minkowski_inverse,
        "mdmp": mdmp,
        "dual-mdmp": dual_mdmp,
    }
    for kind, fn in fns.items():
        out.append(Assertion(f"inverse.{kind}", f"{kind} inverse of A", _matrix_check(fn, EXAMPLE_INVERSES[kind])))
    out.append(Assertion("inverse.mdmp-vs-dual", "A^(D,m) differs from A^(m,D)", _distinct_check))
    for formula in LIMIT_FORMULAS:
        out.append(
            Assertion(
                f"limit.closed-form.{formula}",
                f"{formula} expression equals its closed form at lambda = 1e-6",
                _closed_form_check(formula),
                exact=True,
            )
        )
    for formula in LIMIT_FORMULAS:
        out.append(
            Assertion(f"limit.converges.{formula}", f"{formula} limit converges to A^(D,m)", _limit_check(formula))
        )
    out.append(
        Assertion("inverse.integral-guard", "integral refuses A (B1~B1 not positive stable)", _integral_guard)
    )
    for key in ("U", "Sigma", "K", "L", "G1", "SKd"):
        out.append(Assertion(f"system.hs.{key}", f"decomposition factor {key}", _hs_check(key)))
    for key in ("b1", "b2"):
        out.append(Assertion(f"system.{key}", f"split of b: {key}", _split_check(key)))
    out.append(
        Assertion(
            "system.Ak",
            "A^k",
            lambda tol: (_maxabs(np.linalg.matrix_power(EXAMPLE_A, matrix_index(EXAMPLE_A, tol)), SYSTEM_DATA["Ak"]), ""),
        )
    )
    out.append(
        Assertion(
            "system.E",
            "E = V (WV)^-1 W from the printed V, W",
            lambda tol: (_maxabs(bordered_matrix(EXAMPLE_A, _printed_bases(), tol)[1], SYSTEM_DATA["E"]), ""),
        )
    )
    for mode in ("projected", "leastnorm", "cramer-printed", "cramer-auto"):
        out.append(Assertion(f"system.x.{mode}", f"solution x via {mode}", _solution_check(mode)))
    out.append(Assertion("system.min-value", "minimum equals ||b2|| = 0.24495", _min_value_check))
    return out


ASSERTIONS: list[Assertion] = _build_assertions()


def run_assertions(
    tol: Tolerances = DEFAULT_TOL, fixture_tol: float = FIXTURE_TOL, names=None
) -> list[Outcome]:
    selected = ASSERTIONS if names is None else [a for a in ASSERTIONS if a.name in set(names)]
    return [a.evaluate(tol, fixture_tol) for a in selected]
