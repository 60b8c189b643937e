"""The Lie algebra sp(2n, R) in the defining representation.

Basis elements ``X_ab`` (``0 <= a <= b < 2n``) are the pure-imaginary matrices

    X_ab = i beta (E_ab + E_ba),

so that ``S = exp(-i t J)`` is real symplectic for any real combination
``J = sum c_ab X_ab``.  Internally the real matrices ``G_ab = -i X_ab`` are
used and the factor ``i`` is only restored at the API boundary.

Split indices label canonical pairs ``r, s = 0 .. n-1``::

    V_rs = X_{r, s}        (r <= s)
    W_rs = X_{r, n+s}      (all r, s)
    Z_rs = X_{n+r, n+s}    (r <= s)
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
from scipy.linalg import expm

from . import core
from .core import SymplecticMatrix, beta
from .errors import DimensionError, DomainError, ValidationError

SUBGROUPS = ("GL", "SO", "U", "Tf", "Tl", "A", "N")


@lru_cache(maxsize=None)
def index_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Canonical ``(a, b)`` pairs with ``a <= b``, in row-major order."""
    if n < 1:
        raise DimensionError(f"mode count must be positive, got {n}")
    return tuple(combinations_with_replacement(range(2 * n), 2))


def dimension(n: int) -> int:
    return n * (2 * n + 1)


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict:
    idx = {}
    for i, (a, b) in enumerate(index_pairs(n)):
        idx[(a, b)] = i
        idx[(b, a)] = i
    return idx


def pair_index(n: int, a: int, b: int) -> int:
    return _pair_index(n)[(a, b)]


def real_generator(n: int, a: int, b: int) -> np.ndarray:
    """``G_ab = beta (E_ab + E_ba)``, a real Hamiltonian matrix."""
    E = np.zeros((2 * n, 2 * n))
    E[a, b] += 1.0
    E[b, a] += 1.0
    return beta(n) @ E


def generator(n: int, a: int, b: int) -> np.ndarray:
    """The pure-imaginary basis matrix ``X_ab``."""
    return 1j * real_generator(n, a, b)


@lru_cache(maxsize=None)
def _real_basis(n: int) -> np.ndarray:
    B = np.array([real_generator(n, a, b) for a, b in index_pairs(n)])
    B.setflags(write=False)
    return B


def basis(n: int) -> list[np.ndarray]:
    """All ``n(2n+1)`` basis matrices ``X_ab`` in canonical order."""
    return [1j * G for G in _real_basis(n)]


class LieAlgebraElement:
    """Real coefficients ``c_ab`` of ``J = sum_{a<=b} c_ab X_ab``."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        c = np.array(coeffs, dtype=float).reshape(-1)
        if c.size != dimension(n):
            raise DimensionError(f"expected {dimension(n)} coefficients for n={n}, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValidationError("coefficients must be finite")
        c.setflags(write=False)
        self.n = n
        self.coeffs = c

    @classmethod
    def zero(cls, n: int) -> "LieAlgebraElement":
        return cls(n, np.zeros(dimension(n)))

    @classmethod
    def from_dict(cls, n: int, coeffs: dict) -> "LieAlgebraElement":
        """Build from ``{(a, b): c}``; ``(a, b)`` and ``(b, a)`` address the same slot."""
        c = np.zeros(dimension(n))
        for (a, b), val in coeffs.items():
            if not (0 <= a < 2 * n and 0 <= b < 2 * n):
                raise DimensionError(f"index pair {(a, b)} out of range for n={n}")
            c[pair_index(n, a, b)] += val
        return cls(n, c)

    def to_dict(self) -> dict:
        return {ab: float(c) for ab, c in zip(index_pairs(self.n), self.coeffs)}

    @classmethod
    def from_hamiltonian(cls, G, tol: float = 1e-12) -> "LieAlgebraElement":
        """Recover coefficients from a real Hamiltonian matrix ``G = -iJ``."""
        G = np.asarray(G, dtype=float)
        n = core._mode_count(G)
        sig = -beta(n) @ G
        if np.linalg.norm(sig - sig.T) > tol * max(1.0, np.linalg.norm(G)):
            raise ValidationError("beta G is not symmetric: matrix is not in the algebra")
        sig = 0.5 * (sig + sig.T)
        a, b = np.triu_indices(2 * n)
        c = np.where(a == b, 0.5, 1.0) * sig[a, b]
        return cls(n, c)

    @classmethod
    def from_matrix(cls, J, tol: float = 1e-12) -> "LieAlgebraElement":
        """Recover coefficients from the pure-imaginary matrix ``J``."""
        J = np.asarray(J, dtype=complex)
        if np.linalg.norm(J.real) > tol * max(1.0, np.linalg.norm(J)):
            raise ValidationError("generator matrix must be pure imaginary")
        return cls.from_hamiltonian(J.imag, tol)

    def symmetric_part(self) -> np.ndarray:
        """``Sigma = sum c_ab (E_ab + E_ba)`` so that ``-iJ = beta Sigma``."""
        n2 = 2 * self.n
        a, b = np.triu_indices(n2)
        sig = np.zeros((n2, n2))
        sig[a, b] = self.coeffs
        return sig + sig.T

    def hamiltonian(self) -> np.ndarray:
        return beta(self.n) @ self.symmetric_part()

    @property
    def matrix(self) -> np.ndarray:
        return 1j * self.hamiltonian()

    def split(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coefficient matrices ``(v, w, z)`` with ``J = sum v_rs V_rs + w_rs W_rs + z_rs Z_rs``.

        ``v`` and ``z`` are symmetric and summed over ``r <= s`` only.
        """
        n = self.n
        sig = self.symmetric_part()
        v, w, z = sig[:n, :n].copy(), sig[:n, n:].copy(), sig[n:, n:].copy()
        # diagonal of Sigma carries 2 c_aa
        v[np.diag_indices(n)] *= 0.5
        z[np.diag_indices(n)] *= 0.5
        return v, w, z

    @classmethod
    def from_split(cls, v, w, z) -> "LieAlgebraElement":
        v, w, z = (np.atleast_2d(np.asarray(x, dtype=float)) for x in (v, w, z))
        n = w.shape[0]
        if v.shape != (n, n) or z.shape != (n, n) or w.shape != (n, n):
            raise DimensionError("v, w, z must all be n x n")
        v, z = 0.5 * (v + v.T), 0.5 * (z + z.T)
        v = v + np.diag(np.diag(v))
        z = z + np.diag(np.diag(z))
        sig = np.block([[v, w], [w.T, z]])
        a, b = np.triu_indices(2 * n)
        return cls(n, np.where(a == b, 0.5, 1.0) * sig[a, b])

    def norm(self) -> float:
        return float(np.linalg.norm(self.hamiltonian()))

    def __add__(self, other: "LieAlgebraElement") -> "LieAlgebraElement":
        return LieAlgebraElement(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: "LieAlgebraElement") -> "LieAlgebraElement":
        return LieAlgebraElement(self.n, self.coeffs - other.coeffs)

    def __mul__(self, t: float) -> "LieAlgebraElement":
        return LieAlgebraElement(self.n, t * self.coeffs)

    __rmul__ = __mul__

    def __repr__(self):
        return f"LieAlgebraElement(n={self.n}, nonzero={int(np.count_nonzero(self.coeffs))})"


def element(n: int, a: int, b: int, c: float = 1.0) -> LieAlgebraElement:
    return LieAlgebraElement.from_dict(n, {(a, b): c})


def V(n: int, r: int, s: int) -> LieAlgebraElement:
    return element(n, r, s)


def W(n: int, r: int, s: int) -> LieAlgebraElement:
    return element(n, r, n + s)


def Z(n: int, r: int, s: int) -> LieAlgebraElement:
    return element(n, n + r, n + s)


def _symplectic_refine(S: np.ndarray) -> np.ndarray:
    b = beta(S.shape[0] // 2).astype(np.longdouble)
    Sl = S.astype(np.longdouble)
    E = Sl @ b @ Sl.T - b
    E = 0.5 * (E - E.T)
    return (Sl + 0.5 * (E @ b) @ Sl).astype(float)


def exponentiate(J: LieAlgebraElement, t: float = 1.0) -> SymplecticMatrix:
    """``exp(-i t J)`` computed by scaling and squaring (``scipy.linalg.expm``).

    The result is symplectic by construction.  One refinement step
    ``S <- (I + E beta / 2) S``, with ``E = S beta S^T - beta`` evaluated in
    extended precision, removes the first-order defect left by roundoff in
    the squaring phase.  The measured residual is stored on the returned
    object rather than used as a gate.

    Raises:
        DomainError: if the exponential overflows.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        S = expm(t * J.hamiltonian())
    if not np.all(np.isfinite(S)):
        raise DomainError(f"matrix exponential overflowed for |tJ| = {abs(t) * J.norm():.3g}")
    S = _symplectic_refine(S)
    out = SymplecticMatrix._trusted(S)
    out.residual = core.symplectic_residual(S)
    return out


def commutator(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X


def bracket(J: LieAlgebraElement, K: LieAlgebraElement) -> LieAlgebraElement:
    """The element ``L`` with ``[J, K] = i L`` (the commutator of two generators is ``i`` times a generator)."""
    return LieAlgebraElement.from_matrix(-1j * commutator(J.matrix, K.matrix), tol=1e-9)


@lru_cache(maxsize=None)
def structure_constants(n: int) -> np.ndarray:
    """Real ``f[i, j, k]`` with ``[X_i, X_j] = i sum_k f[i, j, k] X_k``.

    Filled from the closed bracket formula
    ``[X_ab, X_cd] = i(b_ac X_bd + b_bc X_ad + b_ad X_cb + b_bd X_ca)``.
    """
    b = beta(n)
    pairs = index_pairs(n)
    m = len(pairs)
    f = np.zeros((m, m, m))
    for i, (p, q) in enumerate(pairs):
        for j, (r, s) in enumerate(pairs):
            for coef, (x, y) in ((b[p, r], (q, s)), (b[q, r], (p, s)), (b[p, s], (r, q)), (b[q, s], (r, p))):
                if coef:
                    f[i, j, pair_index(n, x, y)] += coef
    f.setflags(write=False)
    return f


def commutator_check(n: int, cap: int = 4) -> float:
    """Max Frobenius deviation between matrix commutators and the structure constants."""
    if n > cap:
        raise DomainError(f"commutator_check limited to n <= {cap} (cost grows as basis^4)")
    X = np.array(basis(n))
    f = structure_constants(n)
    worst = 0.0
    for i in range(len(X)):
        lhs = np.einsum("ab,jbc->jac", X[i], X) - np.einsum("jab,bc->jac", X, X[i])
        rhs = 1j * np.einsum("jk,kab->jab", f[i], X)
        worst = max(worst, float(np.max(np.linalg.norm(lhs - rhs, axis=(1, 2)))))
    return worst


def compact_noncompact_split(J: LieAlgebraElement) -> tuple[LieAlgebraElement, LieAlgebraElement]:
    """Split ``J`` into its K(n) part and the remainder.

    The compact part is spanned by ``W_sr - W_rs`` and ``V_rs + Z_rs``; in the
    real picture it is the antisymmetric part of ``-iJ``, while the symmetric
    part exponentiates into positive-definite symplectic matrices.
    """
    G = J.hamiltonian()
    return (LieAlgebraElement.from_hamiltonian(0.5 * (G - G.T)),
            LieAlgebraElement.from_hamiltonian(0.5 * (G + G.T)))


def tensor_form(J: LieAlgebraElement) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """U(n)-adapted coefficients ``(A, T, Tbar)`` of ``J``.

    ``T = v - z - i(w + w^T)``, ``Tbar = v - z + i(w + w^T)`` (symmetric), and
    the hermitian ``A = ((v + z) - i(w^T - w)) / 2`` carries the compact part.
    """
    v, w, z = J.split()
    s = w + w.T
    T = (v - z) - 1j * s
    Tbar = (v - z) + 1j * s
    A = 0.5 * ((v + z) - 1j * (w.T - w))
    return A, T, Tbar


def from_tensor_form(A, T, Tbar=None) -> LieAlgebraElement:
    """Inverse of :func:`tensor_form` (``Tbar`` is implied by ``T`` for real ``J``)."""
    A = np.asarray(A, dtype=complex)
    T = np.asarray(T, dtype=complex)
    if Tbar is not None and np.linalg.norm(np.asarray(Tbar) - T.conj()) > 1e-12 * max(1.0, np.linalg.norm(T)):
        raise ValidationError("Tbar must be the conjugate of T for a real algebra element")
    vmz = T.real
    s = -T.imag
    vpz = 2.0 * A.real
    anti = -2.0 * A.imag  # w^T - w
    v, z = 0.5 * (vpz + vmz), 0.5 * (vpz - vmz)
    w = 0.5 * (s - anti)
    return LieAlgebraElement.from_split(v, w, z)


def tensor_generators(n: int) -> dict[str, dict[tuple[int, int], np.ndarray]]:
    """Matrices ``A_rs``, ``T_rs``, ``Tbar_rs`` in the defining representation."""
    Vm = lambda r, s: V(n, r, s).matrix
    Wm = lambda r, s: W(n, r, s).matrix
    Zm = lambda r, s: Z(n, r, s).matrix
    out = {"A": {}, "T": {}, "Tbar": {}}
    for r in range(n):
        for s in range(n):
            Q = Vm(r, s) + Zm(r, s)
            Jrs = Wm(s, r) - Wm(r, s)
            out["A"][(r, s)] = 0.5 * (Q - 1j * Jrs)
            out["T"][(r, s)] = Vm(r, s) - Zm(r, s) - 1j * (Wm(r, s) + Wm(s, r))
            out["Tbar"][(r, s)] = Vm(r, s) - Zm(r, s) + 1j * (Wm(r, s) + Wm(s, r))
    return out


def subgroup_generators(name: str, n: int) -> list[LieAlgebraElement]:
    """Generating sets of the standard subgroups.

    ``GL``: all W; ``SO``: ``W_sr - W_rs`` (r < s); ``U``: those plus
    ``V_rs + Z_rs``; ``Tf``: Z; ``Tl``: V; ``A``: ``W_rr``; ``N``: ``W_rs``
    (r < s) and all V.
    """
    rr = range(n)
    upper = [(r, s) for r in rr for s in rr if r <= s]
    strict = [(r, s) for r in rr for s in rr if r < s]
    if name == "GL":
        return [W(n, r, s) for r in rr for s in rr]
    if name == "SO":
        return [W(n, s, r) - W(n, r, s) for r, s in strict]
    if name == "U":
        return ([W(n, s, r) - W(n, r, s) for r, s in strict]
                + [V(n, r, s) + Z(n, r, s) for r, s in upper])
    if name == "Tf":
        return [Z(n, r, s) for r, s in upper]
    if name == "Tl":
        return [V(n, r, s) for r, s in upper]
    if name == "A":
        return [W(n, r, r) for r in rr]
    if name == "N":
        return [W(n, r, s) for r, s in strict] + [V(n, r, s) for r, s in upper]
    raise DomainError(f"unknown subgroup {name!r}; expected one of {SUBGROUPS}")


MEMBERSHIP = {
    "GL": core.in_gl,
    "SO": core.in_so,
    "U": core.in_compact,
    "Tf": core.in_free_propagation,
    "Tl": core.in_lens,
    "A": core.in_scaling,
    "N": core.in_nilpotent,
}
