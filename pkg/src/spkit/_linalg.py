"""Small dense linear-algebra helpers shared by the decomposition routines."""

from __future__ import annotations

import numpy as np

from .errors import DomainError

EIG_FLOOR = 1e-14


def sym(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def herm(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def psd_sqrt(M: np.ndarray, inverse: bool = False):
    """Symmetric square root (and optionally its inverse) via ``eigh``.

    Returns ``root`` or ``(root, inv_root)``.
    """
    w, U = np.linalg.eigh(sym(M))
    if w[0] <= EIG_FLOOR * max(1.0, abs(w[-1])):
        raise DomainError("matrix is not positive definite")
    r = np.sqrt(w)
    root = sym((U * r) @ U.T)
    if not inverse:
        return root
    return root, sym((U / r) @ U.T)


def cluster_slices(vals: np.ndarray, rtol: float) -> list[slice]:
    """Group consecutive sorted values whose gaps are within ``rtol * scale``."""
    if vals.size == 0:
        return []
    scale = max(1.0, float(np.max(np.abs(vals))))
    out, start = [], 0
    for i in range(1, vals.size):
        if vals[i] - vals[i - 1] > rtol * scale:
            out.append(slice(start, i))
            start = i
    out.append(slice(start, vals.size))
    return out


def pivoted_gram_schmidt(candidates: np.ndarray, count: int, against: np.ndarray | None = None) -> np.ndarray:
    """Pick ``count`` orthonormal complex vectors from the span of ``candidates``.

    Candidates are processed left to right; at each step the first one whose
    residual is at least half the largest residual is accepted.  This keeps the
    choice deterministic while avoiding nearly dependent picks.
    """
    m = candidates.shape[0]
    chosen = np.zeros((m, 0), dtype=complex)
    if against is not None and against.size:
        chosen = against.astype(complex)
    base = chosen.shape[1]
    pool = candidates.astype(complex)
    for _ in range(count):
        R = pool - chosen @ (chosen.conj().T @ pool)
        R = R - chosen @ (chosen.conj().T @ R)
        norms = np.linalg.norm(R, axis=0)
        j = int(np.argmax(norms >= 0.5 * norms.max()))
        chosen = np.column_stack([chosen, R[:, j] / norms[j]])
    return chosen[:, base:]


def takagi(B: np.ndarray, zero_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization ``B = U diag(s) U^T`` of a complex symmetric matrix.

    Uses the real symmetric embedding ``[[Re B, Im B], [Im B, -Re B]]`` whose
    spectrum is ``+-s``.  Singular values at or below ``zero_tol * max(1, |B|)``
    are treated as exact zeros and their vectors completed by Gram-Schmidt.

    Returns ``(U, s)`` with ``s`` descending.
    """
    B = np.asarray(B, dtype=complex)
    m = B.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=complex), np.zeros(0)
    B = 0.5 * (B + B.T)
    H = np.block([[B.real, B.imag], [B.imag, -B.real]])
    w, E = np.linalg.eigh(H)
    w, E = w[::-1], E[:, ::-1]
    tau = zero_tol * max(1.0, float(np.linalg.norm(B)))
    p = int(np.sum(w[:m] > tau))
    U = E[:m, :p] + 1j * E[m:, :p]
    s = w[:p].copy()
    if p < m:
        null = E[:, p : 2 * m - p]
        cand = null[:m] + 1j * null[m:]
        U = np.column_stack([U, pivoted_gram_schmidt(cand, m - p, U)])
        s = np.concatenate([s, np.zeros(m - p)])
    return U, s


def complex_blocks(V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(A, B)`` with ``A = (V1 + V3 + i(V2^T - V2))/2`` and ``B = (V1 - V3 + i(V2^T + V2))/2``."""
    n = V.shape[0] // 2
    V1, V2, V3 = V[:n, :n], V[:n, n:], V[n:, n:]
    A = 0.5 * (V1 + V3 + 1j * (V2.T - V2))
    B = 0.5 * (V1 - V3 + 1j * (V2.T + V2))
    return A, B


def k_diagonalizer(V: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Unitary ``U`` such that ``U A U^dag`` and ``U B U^T`` are both (real) diagonal.

    Works for symmetric ``V`` whose complex blocks can be diagonalized
    simultaneously; for other inputs the result is some unitary and callers
    must check the outcome.
    """
    A, B = complex_blocks(V)
    a, Wm = np.linalg.eigh(herm(A))
    Bp = Wm.conj().T @ B @ Wm.conj()
    n = A.shape[0]
    Q = np.zeros((n, n), dtype=complex)
    for sl in cluster_slices(a, rtol):
        Ub, _ = takagi(Bp[sl, sl])
        Q[sl, sl] = Ub
    return (Wm @ Q).conj().T
