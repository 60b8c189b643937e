"""JSON encodings shared by the library and the command-line tool.

Matrices are ``{"n": n, "rows": [[...], ...]}`` in row-major order, with
complex entries written as ``{"re": x, "im": y}``.  Floats are written with
17 significant digits so that every value survives a round trip exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import DimensionError, ValidationError
from .gaussian import GaussianPureState
from .geometry import Subspace
from .kernels import QuadratureSpec
from .lie import LieAlgebraElement, index_pairs


class ParseError(ValidationError):
    """Malformed JSON input; carries the 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


# -- serialization -------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite value {x!r}")
    s = "%.17g" % (x + 0.0)  # no negative zero
    # keep integral floats recognisably floating point
    if all(ch not in s for ch in ".eEn"):
        s += ".0"
    return s


def _encode(obj, out: list):
    if obj is None:
        out.append("null")
    elif obj is True or obj is False or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _encode({"re": obj.real, "im": obj.imag}, out)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}",
                         exc.lineno, exc.colno) from None


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- matrices ------------------------------------------------------------------------


def _entry(x):
    if isinstance(x, dict):
        if set(x) - {"re", "im"}:
            raise ValidationError(f"complex entry has unexpected keys {sorted(x)}")
        return complex(float(x.get("re", 0.0)), float(x.get("im", 0.0)))
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"matrix entry must be a number or {{re, im}}, got {x!r}")
    return float(x)


def rows_to_array(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError("'rows' must be a non-empty list of lists")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionError("ragged rows")
    vals = [[_entry(x) for x in r] for r in rows]
    if any(isinstance(x, complex) for r in vals for x in r):
        return np.array(vals, dtype=complex)
    return np.array(vals, dtype=float)


def array_to_rows(M) -> list:
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return [[{"re": float(x.real), "im": float(x.imag)} for x in r] for r in M]
    return [[float(x) for x in r] for r in M]


def matrix_to_json(M, n: int | None = None) -> dict:
    """Phase-space matrix (``2n x 2n``) as ``{"n", "rows"}``."""
    M = np.asarray(M)
    return {"n": int(M.shape[0] // 2 if n is None else n), "rows": array_to_rows(M)}


def matrix_from_json(obj) -> np.ndarray:
    """Parse a ``2n x 2n`` phase-space matrix, checking ``n`` against the data."""
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ValidationError("matrix object needs a 'rows' field")
    M = rows_to_array(obj["rows"])
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"matrix must be square, got {M.shape}")
    if "n" in obj and 2 * int(obj["n"]) != M.shape[0]:
        raise DimensionError(f"declared n={obj['n']} does not match {M.shape[0]} rows")
    return M


def small_matrix_from_json(obj, n: int | None = None) -> np.ndarray:
    """``n x n`` block given as a bare list of rows, a ``{"rows"}`` object, a list, or a scalar."""
    if isinstance(obj, dict):
        obj = obj.get("rows")
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        M = np.array([[float(obj)]])
    elif isinstance(obj, list) and obj and not isinstance(obj[0], list):
        M = np.array([[_entry(x) for x in obj]])
        M = M if n is None or M.shape == (n, n) else np.diag(M[0])
    else:
        M = rows_to_array(obj)
    if n is not None and M.shape != (n, n):
        raise DimensionError(f"expected a {n}x{n} block, got {M.shape}")
    return M


def vector_from_json(obj) -> np.ndarray:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return np.array([float(obj)])
    if not isinstance(obj, list):
        raise ValidationError("expected a list of numbers")
    vals = [_entry(x) for x in obj]
    return np.array(vals, dtype=complex if any(isinstance(x, complex) for x in vals) else float)


# -- other objects --------------------------------------------------------------------------


def subspace_to_json(W: Subspace) -> dict:
    return {"n": W.n, "columns": [[float(x) for x in col] for col in W.basis.T]}


def subspace_from_json(obj) -> Subspace:
    if not isinstance(obj, dict) or "n" not in obj or "columns" not in obj:
        raise ValidationError("subspace object needs 'n' and 'columns'")
    n = int(obj["n"])
    cols = obj["columns"]
    if not cols:
        return Subspace.zero(n)
    if any(len(c) != 2 * n for c in cols):
        raise DimensionError(f"every column must have length {2 * n}")
    return Subspace(np.array(cols, dtype=float).T, n=n)


def lie_to_json(J: LieAlgebraElement) -> dict:
    return {"n": J.n, "coeffs": {f"{a},{b}": float(c) for (a, b), c in zip(index_pairs(J.n), J.coeffs) if c != 0}}


def lie_from_json(obj) -> LieAlgebraElement:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValidationError("coefficient object needs 'n'")
    n = int(obj["n"])
    coeffs = {}
    for key, val in obj.get("coeffs", {}).items():
        try:
            a, b = (int(x) for x in key.split(","))
        except ValueError:
            raise ValidationError(f"coefficient key {key!r} is not of the form 'a,b'") from None
        if a > b:
            raise ValidationError(f"coefficient key {key!r} must have a <= b")
        coeffs[(a, b)] = float(val)
    return LieAlgebraElement.from_dict(n, coeffs)


def state_to_json(psi: GaussianPureState) -> dict:
    return {"n": psi.n, "u": {"rows": array_to_rows(psi.u)}, "v": {"rows": array_to_rows(psi.v)}}


def state_from_json(obj) -> GaussianPureState:
    if not isinstance(obj, dict) or "u" not in obj:
        raise ValidationError("state object needs 'u' (and optionally 'v')")
    n = obj.get("n")
    u = small_matrix_from_json(obj["u"], n)
    n = u.shape[0]
    v = small_matrix_from_json(obj["v"], n) if "v" in obj else np.zeros((n, n))
    return GaussianPureState(u, v)


def quadrature_from_json(obj) -> QuadratureSpec:
    if not isinstance(obj, dict):
        raise ValidationError("quadrature spec must be an object")
    return QuadratureSpec(float(obj.get("range_sigmas", 8.0)), int(obj.get("points", 2001)))
