"""Linear subspaces of phase space and their symplectic invariants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import beta
from .errors import DimensionError, ValidationError

RANK_FLOOR = 1e-10

KINDS = ("lagrangian", "isotropic", "symplectic", "coisotropic", "generic")


def _numerical_rank(s: np.ndarray, dim: int) -> int:
    if s.size == 0:
        return 0
    cutoff = max(RANK_FLOOR, s[0] * dim * 1e-13)
    return int(np.sum(s > cutoff))


class Subspace:
    """Column span of a ``2n x k`` real basis.

    The basis must have full column rank.  ``k = 0`` (the zero subspace) is
    represented by a ``2n x 0`` array.
    """

    __slots__ = ("basis", "n", "k")

    def __init__(self, basis, n: int | None = None):
        W = np.array(basis, dtype=float)
        if W.ndim == 1:
            W = W[:, None]
        if W.ndim != 2:
            raise DimensionError("basis must be a 2-D array of column vectors")
        if W.shape[0] % 2:
            raise DimensionError(f"ambient dimension must be even, got {W.shape[0]}")
        if n is not None and W.shape[0] != 2 * n:
            raise DimensionError(f"basis has {W.shape[0]} rows, expected {2 * n}")
        if W.shape[1] > W.shape[0]:
            raise ValidationError("more basis vectors than the ambient dimension")
        if W.shape[1]:
            s = np.linalg.svd(W, compute_uv=False)
            if _numerical_rank(s, W.shape[0]) < W.shape[1]:
                raise ValidationError("basis columns are linearly dependent")
        W.setflags(write=False)
        self.basis = W
        self.n = W.shape[0] // 2
        self.k = W.shape[1]

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((2 * n, 0)))

    @classmethod
    def span(cls, n: int, indices) -> "Subspace":
        """Span of standard basis vectors (0-based indices into ``(q, p)``)."""
        return cls(np.eye(2 * n)[:, list(indices)])

    def orthonormal(self) -> np.ndarray:
        if self.k == 0:
            return self.basis
        Q, R = np.linalg.qr(self.basis)
        # positive diagonal of R makes Q unique (and Q = basis for orthonormal input)
        return Q * np.where(np.diag(R) < 0, -1.0, 1.0)

    def projector(self) -> np.ndarray:
        Q = self.orthonormal()
        return Q @ Q.T

    def same_span(self, other: "Subspace", tol: float = 1e-9) -> bool:
        if self.n != other.n:
            return False
        return bool(np.linalg.norm(self.projector() - other.projector()) <= tol)

    def transformed(self, S) -> "Subspace":
        return Subspace(np.asarray(S, dtype=float) @ self.basis)

    def __repr__(self):
        return f"Subspace(n={self.n}, k={self.k})"


def _as_subspace(W) -> Subspace:
    return W if isinstance(W, Subspace) else Subspace(W)


def gram(W) -> np.ndarray:
    """Antisymmetric Gram matrix ``x_r^T beta x_s`` of the orthonormalized basis."""
    W = _as_subspace(W)
    Q = W.orthonormal()
    return Q.T @ beta(W.n) @ Q


def symplectic_rank(W) -> int:
    """Rank of the symplectic form restricted to ``W`` (always even)."""
    W = _as_subspace(W)
    if W.k == 0:
        return 0
    s = np.linalg.svd(gram(W), compute_uv=False)
    r = _numerical_rank(s, 2 * W.n)
    # singular values of an antisymmetric matrix come in pairs
    return r - (r % 2)


def symplectic_complement(W) -> Subspace:
    """Basis of ``{y : x^T beta y = 0 for all x in W}``, of dimension ``2n - k``."""
    W = _as_subspace(W)
    n2 = 2 * W.n
    if W.k == 0:
        return Subspace(np.eye(n2))
    M = W.orthonormal().T @ beta(W.n)
    _, _, vt = np.linalg.svd(M)
    # beta is invertible so M has full row rank k
    return Subspace(vt[W.k :].T)


@dataclass(frozen=True)
class SymplecticClassification:
    k: int
    symp_rank: int
    kind: str


def classify(W) -> SymplecticClassification:
    """Classify ``W`` as lagrangian, isotropic, symplectic, coisotropic or generic.

    Precedence follows the order listed; e.g. a Lagrangian plane is also
    isotropic and coisotropic but is reported as ``lagrangian``.  The zero
    subspace is isotropic and the full space is symplectic.
    """
    W = _as_subspace(W)
    r = symplectic_rank(W)
    iso = r == 0 and W.k <= W.n
    coiso = symplectic_rank(symplectic_complement(W)) == 0 and W.k >= W.n
    if iso and coiso:
        kind = "lagrangian"
    elif iso:
        kind = "isotropic"
    elif r == W.k:
        kind = "symplectic"
    elif coiso:
        kind = "coisotropic"
    else:
        kind = "generic"
    return SymplecticClassification(W.k, r, kind)


def rank_bounds(n: int, k: int) -> tuple[int, int]:
    """Admissible range ``max(0, 2(k-n)) <= rank <= k`` (upper end made even)."""
    return max(0, 2 * (k - n)), k - (k % 2)
