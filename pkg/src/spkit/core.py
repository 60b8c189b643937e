"""Group elements of Sp(2n, R): validation, complex form and subgroup embeddings.

Phase-space vectors are ordered ``(q_1 .. q_n, p_1 .. p_n)`` throughout.  The
symplectic metric in this ordering is

    beta = [[0, 1], [-1, 0]]

and a real ``2n x 2n`` matrix ``S`` is symplectic when ``S beta S^T = beta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionError, DomainError, NotSymplecticError, SingularityError, ValidationError

DEFAULT_TOL = 1e-9

# condition-number guard for matrices that are inverted during construction
COND_LIMIT = 1e12


def beta(n: int) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic metric ``[[0, I], [-I, 0]]``."""
    if n < 1:
        raise DimensionError(f"mode count must be positive, got {n}")
    b = np.zeros((2 * n, 2 * n))
    b[:n, n:] = np.eye(n)
    b[n:, :n] = -np.eye(n)
    return b


def interleaving_permutation(n: int) -> np.ndarray:
    """Orthogonal matrix ``T`` taking grouped coordinates to interleaved ones.

    ``T @ (q_1..q_n, p_1..p_n) = (q_1, p_1, q_2, p_2, ...)``, so the metric in
    interleaved order is ``T beta T^T = blockdiag(i sigma_2, ..., i sigma_2)``.
    Only provided as a basis-change utility; nothing else in the package uses
    interleaved order.
    """
    T = np.zeros((2 * n, 2 * n))
    for r in range(n):
        T[2 * r, r] = 1.0
        T[2 * r + 1, n + r] = 1.0
    return T


def interleaved_beta(n: int) -> np.ndarray:
    T = interleaving_permutation(n)
    return T @ beta(n) @ T.T


def omega(n: int) -> np.ndarray:
    """Unitary map from ``(q, p)`` to ``(a, a^dagger)`` components."""
    eye = np.eye(n)
    return np.block([[eye, 1j * eye], [eye, -1j * eye]]) / np.sqrt(2.0)


def sigma3(n: int) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def _mode_count(M: np.ndarray) -> int:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] % 2 or M.shape[0] == 0:
        raise DimensionError(f"phase-space dimension must be even and positive, got {M.shape[0]}")
    return M.shape[0] // 2


def symplectic_residual(M) -> float:
    """Relative Frobenius residual ``||M beta M^T - beta|| / ||beta||``."""
    M = np.asarray(M, dtype=float)
    n = _mode_count(M)
    b = beta(n)
    return float(np.linalg.norm(M @ b @ M.T - b) / np.sqrt(2 * n))


def is_symplectic(M, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Test membership in Sp(2n, R).

    Args:
        M: real ``2n x 2n`` array.
        tol: relative Frobenius tolerance.

    Returns:
        ``(ok, residual)`` where ``residual`` is always reported.

    Raises:
        DimensionError: if ``M`` is not square with even dimension.
    """
    if isinstance(M, SymplecticMatrix):
        M = M.matrix
    M = np.asarray(M)
    if np.iscomplexobj(M):
        if np.any(M.imag != 0):
            return False, float("inf")
        M = M.real
    res = symplectic_residual(M)
    return bool(res <= tol), res


class SymplecticMatrix:
    """A validated element of Sp(2n, R).

    Construction checks the defining condition once; everything downstream
    trusts the instance.  The stored array is read-only.
    """

    __slots__ = ("_m", "n", "tol", "residual")

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        if isinstance(matrix, SymplecticMatrix):
            matrix = matrix.matrix
        m = np.array(matrix, dtype=float)
        self.n = _mode_count(m)
        if not np.all(np.isfinite(m)):
            raise ValidationError("matrix has non-finite entries")
        ok, res = is_symplectic(m, tol)
        if not ok:
            raise NotSymplecticError(f"S beta S^T != beta: relative residual {res:.3e} > tol {tol:.1e}")
        m.setflags(write=False)
        self._m = m
        self.tol = tol
        self.residual = res

    @classmethod
    def _trusted(cls, m: np.ndarray, tol: float = DEFAULT_TOL) -> "SymplecticMatrix":
        # products/inverses of validated elements skip the check
        obj = cls.__new__(cls)
        m = np.array(m, dtype=float)
        m.setflags(write=False)
        obj._m = m
        obj.n = m.shape[0] // 2
        obj.tol = tol
        obj.residual = float("nan")
        return obj

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._m.copy() if copy else self._m
        return self._m.astype(dtype)

    @property
    def shape(self):
        return self._m.shape

    @property
    def A(self) -> np.ndarray:
        return self._m[: self.n, : self.n]

    @property
    def B(self) -> np.ndarray:
        return self._m[: self.n, self.n :]

    @property
    def C(self) -> np.ndarray:
        return self._m[self.n :, : self.n]

    @property
    def D(self) -> np.ndarray:
        return self._m[self.n :, self.n :]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self._m))

    @property
    def T(self) -> "SymplecticMatrix":
        return SymplecticMatrix._trusted(self._m.T, self.tol)

    def inv(self) -> "SymplecticMatrix":
        """Exact inverse ``beta S^T beta^{-1}`` (no linear solve)."""
        b = beta(self.n)
        return SymplecticMatrix._trusted(b @ self._m.T @ b.T, self.tol)

    def __neg__(self) -> "SymplecticMatrix":
        return SymplecticMatrix._trusted(-self._m, self.tol)

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix):
            if other.n != self.n:
                raise DimensionError(f"mode counts differ: {self.n} vs {other.n}")
            return SymplecticMatrix._trusted(self._m @ other._m, max(self.tol, other.tol))
        return self._m @ np.asarray(other)

    def __rmatmul__(self, other):
        return np.asarray(other) @ self._m

    def __repr__(self):
        return f"SymplecticMatrix(n={self.n}, residual={self.residual:.2e})"


def as_symplectic(S, tol: float | None = None) -> SymplecticMatrix:
    """Return ``S`` as a validated :class:`SymplecticMatrix` (no-op if it already is)."""
    if isinstance(S, SymplecticMatrix):
        return S
    return SymplecticMatrix(S, DEFAULT_TOL if tol is None else tol)


def block(A, B, C, D) -> np.ndarray:
    return np.block([[A, B], [C, D]])


def _square(X, name: str) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X))
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {X.shape}")
    return X


def _check_symmetric(X: np.ndarray, name: str, tol: float):
    if np.linalg.norm(X - X.T) > tol * max(1.0, np.linalg.norm(X)):
        raise ValidationError(f"{name} is not symmetric")


# -- complex form -------------------------------------------------------------


def to_complex_form(S) -> np.ndarray:
    """Return ``Omega S Omega^{-1}``, the action on ``(a, a^dagger)``.

    Computed blockwise, so the lower blocks are exact conjugates of the upper.
    """
    S = as_symplectic(S)
    A, B, C, D = S.A, S.B, S.C, S.D
    P = 0.5 * (A + D + 1j * (C - B))
    Q = 0.5 * (A - D + 1j * (B + C))
    return np.block([[P, Q], [Q.conj(), P.conj()]])


def from_complex_form(Sc, tol: float = DEFAULT_TOL) -> SymplecticMatrix:
    """Inverse of :func:`to_complex_form`."""
    Sc = _square(np.asarray(Sc, dtype=complex), "complex form")
    n = _mode_count(Sc)
    P, Q = Sc[:n, :n], Sc[:n, n:]
    scale = max(1.0, np.linalg.norm(Sc))
    if (np.linalg.norm(Sc[n:, n:] - P.conj()) > tol * scale
            or np.linalg.norm(Sc[n:, :n] - Q.conj()) > tol * scale):
        raise ValidationError("lower blocks are not conjugates of the upper blocks")
    # invert the blockwise map of to_complex_form
    A = (P.real + Q.real)
    D = (P.real - Q.real)
    B = (Q.imag - P.imag)
    C = (P.imag + Q.imag)
    return SymplecticMatrix(block(A, B, C, D), tol)


# -- subgroup constructors ------------------------------------------------------


def embed_gl(A, tol: float = DEFAULT_TOL) -> SymplecticMatrix:
    """``blockdiag(A, A^{-T})`` for invertible real ``A``."""
    A = _square(np.asarray(A, dtype=float), "A")
    if not np.all(np.isfinite(A)) or np.linalg.cond(A) > COND_LIMIT:
        raise SingularityError("A is singular or too ill-conditioned")
    n = A.shape[0]
    Z = np.zeros((n, n))
    return SymplecticMatrix(block(A, Z, Z, np.linalg.inv(A).T), tol)


def embed_unitary(U, tol: float = DEFAULT_TOL) -> SymplecticMatrix:
    """Orthosymplectic element ``S(X, Y) = [[X, Y], [-Y, X]]`` with ``U = X - iY``."""
    U = _square(np.asarray(U, dtype=complex), "U")
    n = U.shape[0]
    if np.linalg.norm(U.conj().T @ U - np.eye(n)) > tol * np.sqrt(n):
        raise ValidationError("U is not unitary")
    X, Y = U.real, -U.imag
    return SymplecticMatrix(block(X, Y, -Y, X), tol)


def embed_free_propagation(B, tol: float = DEFAULT_TOL) -> SymplecticMatrix:
    """``[[I, B], [0, I]]`` for symmetric ``B``: ``q -> q + B p``."""
    B = _square(np.asarray(B, dtype=float), "B")
    _check_symmetric(B, "B", tol)
    n = B.shape[0]
    B = 0.5 * (B + B.T)
    return SymplecticMatrix(block(np.eye(n), B, np.zeros((n, n)), np.eye(n)), tol)


def embed_lens(C, tol: float = DEFAULT_TOL) -> SymplecticMatrix:
    """``[[I, 0], [C, I]]`` for symmetric ``C``: ``p -> p + C q``."""
    C = _square(np.asarray(C, dtype=float), "C")
    _check_symmetric(C, "C", tol)
    n = C.shape[0]
    C = 0.5 * (C + C.T)
    return SymplecticMatrix(block(np.eye(n), np.zeros((n, n)), C, np.eye(n)), tol)


def embed_scaling(kappa, tol: float = DEFAULT_TOL) -> SymplecticMatrix:
    """``D(kappa) = diag(kappa, 1/kappa)``."""
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    if kappa.ndim != 1 or kappa.size == 0:
        raise DimensionError("kappa must be a non-empty vector")
    if np.any(~np.isfinite(kappa)) or np.any(kappa <= 0):
        raise DomainError("scaling factors must be positive and finite")
    return SymplecticMatrix(np.diag(np.concatenate([kappa, 1.0 / kappa])), tol)


# -- membership predicates ------------------------------------------------------


def _rel(x: np.ndarray, scale: float = 1.0) -> float:
    return float(np.linalg.norm(x) / max(1.0, scale))


def in_compact(S, tol: float = 1e-9) -> bool:
    """K(n): orthogonal and symplectic, i.e. of the form ``S(X, Y)``."""
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    X, Y = S[:n, :n], S[:n, n:]
    return (_rel(S.T @ S - np.eye(2 * n)) <= tol
            and _rel(S[n:, n:] - X) <= tol and _rel(S[n:, :n] + Y) <= tol
            and is_symplectic(S, tol)[0])


def in_positive(S, tol: float = 1e-9) -> bool:
    """Pi(n): symmetric positive-definite symplectic matrices."""
    S = np.asarray(S, dtype=float)
    if _rel(S - S.T, np.linalg.norm(S)) > tol or not is_symplectic(S, tol)[0]:
        return False
    return bool(np.linalg.eigvalsh(0.5 * (S + S.T)).min() > 0)


def in_gl(S, tol: float = 1e-9) -> bool:
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    scale = np.linalg.norm(S)
    return (_rel(S[:n, n:], scale) <= tol and _rel(S[n:, :n], scale) <= tol
            and is_symplectic(S, tol)[0])


def in_so(S, tol: float = 1e-9) -> bool:
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    A = S[:n, :n]
    return (in_gl(S, tol) and _rel(S[n:, n:] - A) <= tol
            and _rel(A.T @ A - np.eye(n)) <= tol and np.linalg.det(A) > 0)


def in_free_propagation(S, tol: float = 1e-9) -> bool:
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    I = np.eye(n)
    B = S[:n, n:]
    return (_rel(S[:n, :n] - I) <= tol and _rel(S[n:, n:] - I) <= tol
            and _rel(S[n:, :n]) <= tol and _rel(B - B.T, np.linalg.norm(B)) <= tol)


def in_lens(S, tol: float = 1e-9) -> bool:
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    I = np.eye(n)
    C = S[n:, :n]
    return (_rel(S[:n, :n] - I) <= tol and _rel(S[n:, n:] - I) <= tol
            and _rel(S[:n, n:]) <= tol and _rel(C - C.T, np.linalg.norm(C)) <= tol)


def in_scaling(S, tol: float = 1e-9) -> bool:
    """The abelian subgroup of positive diagonal ``D(kappa)``."""
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    d = np.diag(S)
    return (_rel(S - np.diag(d), np.linalg.norm(S)) <= tol and bool(np.all(d > 0))
            and _rel(d[:n] * d[n:] - 1.0) <= tol)


def in_nilpotent(S, tol: float = 1e-9) -> bool:
    """The Iwasawa subgroup N: ``[[A, 0], [C, A^{-T}]]``, A unit lower triangular, A^T C symmetric."""
    S = np.asarray(S, dtype=float)
    n = _mode_count(S)
    A, B, C, D = S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]
    scale = np.linalg.norm(S)
    if _rel(B, scale) > tol or _rel(np.triu(A, 1), scale) > tol or _rel(np.diag(A) - 1.0) > tol:
        return False
    M = A.T @ C
    return _rel(M - M.T, scale**2) <= tol and _rel(A.T @ D - np.eye(n), scale) <= tol


# -- spectrum -------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    conjugation_defect: float
    inversion_defect: float
    multiplicity_plus_one: int
    multiplicity_minus_one: int

    @property
    def even_unit_multiplicities(self) -> bool:
        return self.multiplicity_plus_one % 2 == 0 and self.multiplicity_minus_one % 2 == 0

    def is_symmetric(self, tol: float = 1e-6) -> bool:
        return (self.conjugation_defect <= tol and self.inversion_defect <= tol
                and self.even_unit_multiplicities)


def _matching_defect(lam: np.ndarray, image: np.ndarray) -> float:
    # best one-to-one matching of the spectrum with its image under a map
    cost = np.abs(lam[:, None] - image[None, :]) / np.maximum(1.0, np.abs(lam))[:, None]
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def eigenvalue_symmetry_report(S, cluster_tol: float = 1e-6) -> SpectrumReport:
    """Check that the spectrum is closed under ``lam -> conj(lam)`` and ``lam -> 1/lam``.

    The two maps together generate the reflection through the unit circle.
    Eigenvalues within ``cluster_tol`` of +1 or -1 are counted; Jordan blocks
    at these points perturb eigenvalues by roughly ``sqrt(eps)``, hence the
    loose default.
    """
    S = as_symplectic(S)
    lam = np.linalg.eigvals(S.matrix)
    conj = _matching_defect(lam, lam.conj())
    inv = _matching_defect(lam, 1.0 / lam)
    plus = int(np.sum(np.abs(lam - 1.0) <= cluster_tol))
    minus = int(np.sum(np.abs(lam + 1.0) <= cluster_tol))
    return SpectrumReport(lam, conj, inv, plus, minus)
