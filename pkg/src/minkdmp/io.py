"""Matrix exchange formats: Matrix Market (via scipy.io) and a small JSON form.

The JSON form is ``{"rows": m, "cols": n, "data": [[re, im], ...]}`` with the
entries listed row by row. A plain nested list of real rows is also accepted
on input.
"""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .core import as_matrix
from .errors import ParseError

__all__ = [
    "read_matrix",
    "read_vector",
    "write_matrix",
    "matrix_to_json",
    "matrix_from_json",
    "format_pretty",
]


def _read_text(source) -> tuple[str, str]:
    if source == "-" or source is None:
        return sys.stdin.read(), "<stdin>"
    path = Path(source)
    try:
        return path.read_text(), str(path)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=str(path)) from exc


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, list):
        try:
            return as_matrix(np.array(obj, dtype=float))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad JSON matrix: {exc}") from exc
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise ParseError('JSON matrix needs keys "rows", "cols" and "data"')
    m, n, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(m, int) and isinstance(n, int)) or m < 1 or n < 1:
        raise ParseError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != m * n:
        raise ParseError(f"expected {m * n} entries, got {len(data) if isinstance(data, list) else 'none'}")
    try:
        pairs = np.array(
            [(e, 0.0) if isinstance(e, (int, float)) else tuple(e) for e in data], dtype=float
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad JSON entry: {exc}") from exc
    if pairs.shape != (m * n, 2):
        raise ParseError("each entry must be a number or a [re, im] pair")
    if np.any(pairs[:, 1]):
        M = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(m, n)
    else:
        M = pairs[:, 0].reshape(m, n)
    return as_matrix(M)


def matrix_to_json(X) -> dict:
    X = np.asarray(X)
    flat = X.ravel()
    return {
        "rows": int(X.shape[0]),
        "cols": int(X.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat.astype(complex)],
    }


def _parse_mm(text: str, name: str) -> np.ndarray:
    try:
        M = scipy.io.mmread(io.BytesIO(text.encode()))
    except Exception as exc:  # scipy raises a mix of ValueError/OSError/RuntimeError
        raise ParseError(f"{name}: not a valid Matrix Market file ({exc})", path=name) from exc
    if scipy.sparse.issparse(M):
        M = M.toarray()
    return np.asarray(M)


def _checked(build, name):
    try:
        return build()
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"{name}: {exc}", path=name) from exc


def read_matrix(source) -> np.ndarray:
    """Read a matrix from a path (``-`` for stdin); the format is sniffed from the content."""
    text, name = _read_text(source)
    stripped = text.lstrip()
    if not stripped:
        raise ParseError(f"{name}: empty input", path=name)
    if stripped[0] in "{[":
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{name}: invalid JSON ({exc.msg})", path=name) from exc
        return _checked(lambda: matrix_from_json(obj), name)
    if stripped.startswith("%%MatrixMarket"):
        M = _parse_mm(text, name)
        return _checked(lambda: as_matrix(M), name)
    raise ParseError(f"{name}: unrecognized format (expected Matrix Market or JSON)", path=name)


def read_vector(source) -> np.ndarray:
    """Read a vector stored as an ``n x 1`` or ``1 x n`` matrix."""
    M = read_matrix(source)
    if 1 not in M.shape:
        raise ParseError(f"expected a vector, got shape {M.shape}")
    return M.ravel()


def format_pretty(X, precision: int = 5) -> str:
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[:, None]
    real = not np.iscomplexobj(X) or not np.any(X.imag)
    # round first so tiny negatives do not print as -0.000
    X = np.round(X, precision) + 0.0
    fmt = (lambda z: f"{z.real:.{precision}f}") if real else (
        lambda z: f"{z.real:.{precision}f}{z.imag:+.{precision}f}j"
    )
    cells = [[fmt(complex(z)) for z in row] for row in X]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def write_matrix(X, stream=None, fmt: str = "json", precision: int = 17) -> None:
    """Write ``X`` as ``json``, ``matrix-market`` or ``pretty`` text."""
    stream = sys.stdout if stream is None else stream
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[:, None]
    if fmt == "json":
        stream.write(json.dumps(matrix_to_json(X)) + "\n")
    elif fmt == "matrix-market":
        if np.iscomplexobj(X) and not np.any(X.imag):
            X = X.real
        buf = io.BytesIO()
        scipy.io.mmwrite(buf, X, precision=precision)
        stream.write(buf.getvalue().decode())
    elif fmt == "pretty":
        stream.write(format_pretty(X, precision) + "\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")
