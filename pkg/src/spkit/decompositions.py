"""Global factorizations of symplectic matrices.

* polar:        S = K P                       (K in K(n), P in Pi(n))
* Euler:        S = K1 D(kappa) K2
* pre-Iwasawa:  S = L(C0 A0^-1) diag(A0, A0^-1) K
* Iwasawa:      S = N D(kappa) K              (N unit lower triangular type)

Every routine checks its own reconstruction and raises ``ConsistencyError``
when the product drifts from the input beyond a conditioning-aware bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from ._linalg import k_diagonalizer, psd_sqrt, sym
from .core import SymplecticMatrix, as_symplectic, beta
from .errors import ConsistencyError

RECON_TOL = 1e-9


def _factor(M: np.ndarray) -> SymplecticMatrix:
    out = SymplecticMatrix._trusted(M)
    out.residual = core.symplectic_residual(M)
    return out


def _compact(X: np.ndarray, Y: np.ndarray) -> SymplecticMatrix:
    return _factor(core.block(X, Y, -Y, X))


def _reconstruction_error(S: np.ndarray, factors) -> float:
    P = factors[0]
    for F in factors[1:]:
        P = P @ F
    return float(np.linalg.norm(S - P) / np.linalg.norm(S))


def _check(S: np.ndarray, factors, name: str, tol: float | None) -> float:
    err = _reconstruction_error(S, factors)
    # round-off grows with cond(S) = |S|_2^2 for symplectic S
    bound = tol if tol is not None else max(RECON_TOL, 1e3 * np.finfo(float).eps * np.linalg.norm(S, 2) ** 2)
    if not err <= bound:
        raise ConsistencyError(f"{name} reconstruction error {err:.3e} exceeds {bound:.1e}")
    return err


@dataclass(frozen=True)
class PolarFactors:
    compact: SymplecticMatrix
    positive: SymplecticMatrix
    residual: float

    @property
    def factors(self):
        return [self.compact, self.positive]

    def product(self) -> np.ndarray:
        return self.compact.matrix @ self.positive.matrix


@dataclass(frozen=True)
class EulerFactors:
    left: SymplecticMatrix
    kappa: np.ndarray
    right: SymplecticMatrix
    residual: float

    @property
    def factors(self):
        return [self.left, core.embed_scaling(self.kappa, tol=np.inf), self.right]

    def product(self) -> np.ndarray:
        k = np.concatenate([self.kappa, 1.0 / self.kappa])
        return (self.left.matrix * k) @ self.right.matrix


@dataclass(frozen=True)
class PreIwasawaFactors:
    lens: SymplecticMatrix
    scale: SymplecticMatrix
    compact: SymplecticMatrix
    residual: float

    @property
    def factors(self):
        return [self.lens, self.scale, self.compact]

    def product(self) -> np.ndarray:
        return self.lens.matrix @ self.scale.matrix @ self.compact.matrix

    @property
    def A0(self) -> np.ndarray:
        return self.scale.A


@dataclass(frozen=True)
class IwasawaFactors:
    nilpotent: SymplecticMatrix
    kappa: np.ndarray
    compact: SymplecticMatrix
    residual: float

    @property
    def factors(self):
        return [self.nilpotent, core.embed_scaling(self.kappa, tol=np.inf), self.compact]

    def product(self) -> np.ndarray:
        k = np.concatenate([self.kappa, 1.0 / self.kappa])
        return (self.nilpotent.matrix * k) @ self.compact.matrix


def polar_decompose(S, tol: float | None = None) -> PolarFactors:
    """Unique factorization ``S = K P`` with ``K`` orthosymplectic and ``P = (S^T S)^{1/2}``.

    Computed from the SVD ``S = W s Z^T`` (``P = Z s Z^T``, ``K = W Z^T``),
    which avoids squaring the condition number the way forming ``S^T S`` does.
    """
    S = as_symplectic(S)
    M = S.matrix
    n = S.n
    Wm, s, Zt = np.linalg.svd(M)
    P = sym((Zt.T * s) @ Zt)
    K = Wm @ Zt
    X = 0.5 * (K[:n, :n] + K[n:, n:])
    Y = 0.5 * (K[:n, n:] - K[n:, :n])
    Kf, Pf = _compact(X, Y), _factor(P)
    err = _check(M, [Kf.matrix, P], "polar", tol)
    return PolarFactors(Kf, Pf, err)


def _mode_swap(n: int, modes) -> np.ndarray:
    """Orthosymplectic map exchanging q_r -> p_r, p_r -> -q_r on the given modes."""
    X = np.eye(n)
    Y = np.zeros((n, n))
    for r in modes:
        X[r, r] = 0.0
        Y[r, r] = 1.0
    return core.block(X, Y, -Y, X)


def euler_decompose(S, tol: float | None = None) -> EulerFactors:
    """Factor ``S = K1 D(kappa) K2`` with ``kappa >= 1`` sorted descending.

    The right factor's complex form ``U`` is sign-normalized row by row (the
    entry of largest modulus gets a positive real part).  Within degenerate
    ``kappa`` clusters, any residual continuous freedom is left as produced by
    the underlying eigensolvers.
    """
    S = as_symplectic(S)
    n = S.n
    pol = polar_decompose(S, tol)
    P = pol.positive.matrix
    R = core.embed_unitary(k_diagonalizer(P), tol=1e-8).matrix
    d = np.diag(R @ P @ R.T)[:n]
    swap = [r for r in range(n) if d[r] < 1.0]
    if swap:
        F = _mode_swap(n, swap)
        R = F @ R
        d = d.copy()
        d[swap] = 1.0 / d[swap]
    order = np.argsort(-d, kind="stable")
    perm = np.eye(n)[order]
    R = core.block(perm, np.zeros((n, n)), np.zeros((n, n)), perm) @ R
    d = d[order]
    # sign canonicalization of each mode
    U = R[:n, :n] - 1j * R[:n, n:]
    for r in range(n):
        j = int(np.argmax(np.abs(U[r])))
        if U[r, j].real < 0:
            U[r] = -U[r]
    X, Y = U.real, -U.imag
    right = _compact(X, Y)
    left_m = pol.compact.matrix @ right.matrix.T
    Xl = 0.5 * (left_m[:n, :n] + left_m[n:, n:])
    Yl = 0.5 * (left_m[:n, n:] - left_m[n:, :n])
    left = _compact(Xl, Yl)
    # the kappa actually realized by these factors
    mid = left.matrix.T @ S.matrix @ right.matrix.T
    kappa = np.sqrt(np.abs(np.diag(mid)[:n] / np.diag(mid)[n:]))
    kd = np.concatenate([kappa, 1.0 / kappa])
    err = _check(S.matrix, [left.matrix * kd, right.matrix], "euler", tol)
    return EulerFactors(left, kappa, right, err)


def pre_iwasawa_decompose(S, tol: float | None = None) -> PreIwasawaFactors:
    """Unique factorization ``S = L diag(A0, A0^{-1}) S(X, Y)``.

    ``A0 = (A A^T + B B^T)^{1/2}``, ``X - iY = A0^{-1}(A - iB)`` and the lens
    block is ``C0 A0^{-1}`` with ``C0 = (C A^T + D B^T) A0^{-1}``.
    """
    S = as_symplectic(S)
    n = S.n
    A, B, C, D = S.A, S.B, S.C, S.D
    A0, A0i = psd_sqrt(A @ A.T + B @ B.T, inverse=True)
    X = A0i @ A
    Y = A0i @ B
    C0 = (C @ A.T + D @ B.T) @ A0i
    Lam = sym(C0 @ A0i)
    I, Z = np.eye(n), np.zeros((n, n))
    lens = _factor(core.block(I, Z, Lam, I))
    scale = _factor(core.block(A0, Z, Z, A0i))
    comp = _compact(X, Y)
    err = _check(S.matrix, [lens.matrix, scale.matrix, comp.matrix], "pre-Iwasawa", tol)
    return PreIwasawaFactors(lens, scale, comp, err)


def _lq_positive(A0: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``A0 = T diag(delta) O`` with T unit lower triangular, delta > 0, O orthogonal."""
    Q, R = np.linalg.qr(A0.T)
    sgn = np.where(np.diag(R) < 0, -1.0, 1.0)
    L = R.T * sgn  # scale columns
    O = (Q * sgn).T
    delta = np.diag(L).copy()
    T = L / delta
    return T, delta, O


def iwasawa_decompose(S, tol: float | None = None) -> IwasawaFactors:
    """Unique factorization ``S = N D(kappa) K``.

    ``N = [[T, 0], [C, T^{-T}]]`` has ``T`` unit lower triangular and ``T^T C``
    symmetric.  Built from the pre-Iwasawa factors by splitting
    ``A0 = T diag(kappa) O``; the compact factor is then ``diag(O, O)`` times
    the pre-Iwasawa compact factor.
    """
    S = as_symplectic(S)
    n = S.n
    pre = pre_iwasawa_decompose(S, tol)
    T, kappa, O = _lq_positive(pre.A0)
    Lam = pre.lens.C
    Tinv_t = np.linalg.solve(T, np.eye(n)).T
    N = core.block(T, np.zeros((n, n)), Lam @ T, Tinv_t)
    Kc = core.block(O, np.zeros((n, n)), np.zeros((n, n)), O) @ pre.compact.matrix
    X = 0.5 * (Kc[:n, :n] + Kc[n:, n:])
    Y = 0.5 * (Kc[:n, n:] - Kc[n:, :n])
    nil, comp = _factor(N), _compact(X, Y)
    kd = np.concatenate([kappa, 1.0 / kappa])
    err = _check(S.matrix, [nil.matrix * kd, comp.matrix], "Iwasawa", tol)
    return IwasawaFactors(nil, kappa, comp, err)


def iwasawa_parameters_n1(S) -> tuple[float, float, float]:
    """Closed-form ``(xi, eta, phi)`` for a 2x2 symplectic ``S = [[a, b], [c, d]]``.

    ``S = [[1, 0], [xi, 1]] diag(e^{eta/2}, e^{-eta/2}) R(phi/2)`` with
    ``xi = (ac + bd)/(a^2 + b^2)``, ``eta = ln(a^2 + b^2)`` and
    ``phi = 2 arg(a - ib)`` in ``(-2 pi, 2 pi]``.
    """
    S = as_symplectic(S)
    if S.n != 1:
        raise core.DimensionError("closed-form Iwasawa parameters need n = 1")
    (a, b), (c, d) = S.matrix
    r2 = a * a + b * b
    return (a * c + b * d) / r2, float(np.log(r2)), 2.0 * float(np.angle(a - 1j * b))


def rotation_n1(phi: float) -> np.ndarray:
    h = 0.5 * phi
    return np.array([[np.cos(h), -np.sin(h)], [np.sin(h), np.cos(h)]])


DECOMPOSERS = {
    "polar": polar_decompose,
    "euler": euler_decompose,
    "pre_iwasawa": pre_iwasawa_decompose,
    "iwasawa": iwasawa_decompose,
}


def decompose(S, kind: str, tol: float | None = None):
    try:
        fn = DECOMPOSERS[kind]
    except KeyError:
        raise core.DomainError(f"unknown decomposition {kind!r}; expected one of {sorted(DECOMPOSERS)}") from None
    return fn(S, tol)
