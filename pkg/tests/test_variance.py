import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spkit import core, gaussian, variance
from spkit import random as sprandom
from spkit.errors import DimensionError, DomainError, UnphysicalWarning, ValidationError
from spkit.variance import ComplexVariance, VarianceMatrix

from conftest import rel_fro


def symplectic_eigs_oracle(V):
    n = V.shape[0] // 2
    w = np.abs(np.linalg.eigvals(1j * core.beta(n) @ V))
    return np.sort(w)[::2]


def test_variance_matrix_validation():
    with pytest.raises(ValidationError):
        VarianceMatrix([[1.0, 0.2], [0.0, 1.0]])
    with pytest.raises(DomainError):
        VarianceMatrix(np.diag([1.0, -1.0]))
    with pytest.raises(DimensionError):
        VarianceMatrix(np.eye(3))
    V = VarianceMatrix(np.diag([1.0, 2.0, 3.0, 4.0]))
    assert np.array_equal(V.V1, np.diag([1.0, 2.0])) and np.array_equal(V.V3, np.diag([3.0, 4.0]))


def test_transform_examples(gen):
    V = 0.5 * np.eye(2)
    assert np.array_equal(variance.transform(V, np.eye(2)).V, V)
    r = 0.4
    out = variance.transform(V, np.diag([np.exp(r), np.exp(-r)])).V
    assert np.allclose(out, 0.5 * np.diag([np.exp(2 * r), np.exp(-2 * r)]))
    # complex-form consistency
    n = 2
    Vr = sprandom.random_variance(n, gen)
    S = sprandom.random_symplectic(n, gen)
    Om = core.omega(n)
    lhs = Om @ variance.transform(Vr, S).V @ Om.conj().T
    Sc = core.to_complex_form(S)
    rhs = Sc @ (Om @ Vr @ Om.conj().T) @ Sc.conj().T
    assert np.abs(lhs - rhs).max() < 1e-12


def test_complex_form_examples(gen):
    cv = variance.to_complex(0.5 * np.eye(4))
    assert np.allclose(cv.A, 0.5 * np.eye(2)) and np.allclose(cv.B, 0)
    v1, v3 = 1.7, 0.4
    cv = variance.to_complex(np.diag([v1, v3]))
    assert cv.A[0, 0] == pytest.approx((v1 + v3) / 2) and cv.B[0, 0] == pytest.approx((v1 - v3) / 2)
    V = sprandom.random_variance(3, gen)
    back = variance.from_complex(variance.to_complex(V)).V
    assert np.abs(back - V).max() < 1e-15
    Om = core.omega(3)
    assert np.allclose(variance.to_complex(V).matrix(), Om @ V @ Om.conj().T, atol=1e-14)
    with pytest.raises(ValidationError):
        variance.from_complex(ComplexVariance(np.array([[1.0, 1j], [1j, 1.0]]), np.zeros((2, 2))))


def test_williamson_examples():
    w = variance.williamson(0.5 * np.eye(4))
    assert np.allclose(w.kappa, 0.5) and np.allclose(w.S.matrix, np.eye(4))
    V = np.diag([2.0, 1 / 8])
    w = variance.williamson(V)
    assert w.kappa[0] == pytest.approx(np.sqrt(np.linalg.det(V)))
    assert np.allclose(w.S.matrix, np.diag([0.5, 2.0]))
    assert np.allclose(w.S.matrix @ V @ w.S.matrix.T, 0.5 * np.eye(2))


def test_williamson_planted_n2(gen):
    S0 = sprandom.random_symplectic(2, gen).matrix
    V = S0.T @ np.diag([0.7, 1.3, 0.7, 1.3]) @ S0
    w = variance.williamson(V)
    assert np.allclose(w.kappa, [0.7, 1.3], atol=1e-10)
    assert np.allclose(symplectic_eigs_oracle(V), [0.7, 1.3], atol=1e-10)


@pytest.mark.parametrize("kappa", [[0.6], [0.8, 0.8], [0.5, 1.1, 1.1], [0.55, 0.55, 2.0, 3.0]])
def test_williamson_degenerate(gen, kappa):
    n = len(kappa)
    S0 = sprandom.random_symplectic(n, gen).matrix
    V = S0.T @ np.diag(kappa + kappa) @ S0
    w = variance.williamson(V)
    assert np.allclose(w.kappa, kappa, atol=1e-8)
    assert w.residual < 1e-9
    assert core.is_symplectic(w.S.matrix, 1e-9)[0]


@pytest.mark.parametrize("V, phys", [
    (0.5 * np.eye(2), True),
    (np.diag([0.4, 0.4]), False),
    (np.eye(2), True),
])
def test_is_physical_examples(V, phys):
    ok, margin = variance.is_physical(V)
    assert ok is phys
    if np.allclose(V, 0.5 * np.eye(2)):
        assert abs(margin) < 1e-15
    if np.allclose(V, np.eye(2)):
        assert margin > 0


def test_squeezing_examples():
    r = variance.squeezing_report(0.5 * np.eye(4))
    assert not r.squeezed and not r.manifest and r.l == pytest.approx(0.5)
    r = variance.squeezing_report(np.diag([0.3, 1.0]))
    assert r.manifest and r.squeezed
    r = variance.squeezing_report([[0.6, 0.25], [0.25, 0.6]])
    assert not r.manifest and r.squeezed
    assert abs(r.l - 0.35) <= 1e-12
    assert variance.is_physical([[0.6, 0.25], [0.25, 0.6]])[0]


def test_squeezing_warns_for_unphysical():
    with pytest.warns(UnphysicalWarning):
        variance.squeezing_report(np.diag([0.3, 0.3]))


def test_squeezing_invariant_under_passive(gen):
    for _ in range(20):
        V = sprandom.random_variance(2, gen)
        R = sprandom.random_compact(2, gen)
        a = variance.squeezing_report(V)
        b = variance.squeezing_report(variance.transform(V, R))
        assert a.squeezed == b.squeezed and abs(a.l - b.l) < 1e-12


def test_min_diagonal_reaches_l(gen):
    V = np.array([[0.6, 0.25], [0.25, 0.6]])
    th = np.linspace(0, np.pi, 721)
    m = variance.min_diagonal_over_rotations(V, [np.array([[np.exp(1j * t)]]) for t in th])
    assert m == pytest.approx(0.35, abs=1e-6)


def test_family_examples(gen):
    f = variance.family_membership(0.5 * np.eye(4))
    assert f.S_K and f.S_H and f.S_G
    u, v = sprandom.random_state_params(2, gen)
    S = gaussian.state_symplectic(gaussian.GaussianPureState(u, v)).matrix
    assert variance.family_membership(0.5 * S @ S.T).S_G
    f = variance.family_membership(np.eye(2))
    assert f.S_H and not f.S_G and f.S_K


def test_diagonalizable_in_Kn(gen):
    ok, R = variance.diagonalizable_in_Kn(np.diag([1.0, 2.0, 3.0, 0.7]))
    assert ok and np.array_equal(R.matrix, np.eye(4))
    Vd = np.diag([1.0, 2.0, 0.6, 0.9])
    R0 = sprandom.random_compact(2, gen).matrix
    V = R0 @ Vd @ R0.T
    ok, R = variance.diagonalizable_in_Kn(V)
    assert ok
    D = R.matrix @ V @ R.matrix.T
    assert np.allclose(D, np.diag(np.diag(D)), atol=1e-9)
    assert core.in_compact(R.matrix)
    V = sprandom.random_variance(2, gen)
    ok, R = variance.diagonalizable_in_Kn(V)
    A, B = variance.to_complex(V).A, variance.to_complex(V).B
    assert not ok and R is None
    assert np.linalg.norm(A @ B - (A @ B).T) > 1e-3


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_williamson_matches_oracle(seed, n):
    V = sprandom.random_variance(n, sprandom.rng(seed))
    assert np.allclose(variance.williamson(V).kappa, symplectic_eigs_oracle(V), rtol=1e-9)


def test_variance_report_keys():
    rep = variance.variance_report([[0.6, 0.25], [0.25, 0.6]])
    assert set(rep) == {"physical", "margin", "kappa", "manifest", "l", "squeezed", "families"}
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        variance.variance_report(np.diag([0.2, 0.2]))


def test_min_diagonal_batch_matches_loop(gen):
    V = sprandom.random_variance(2, gen)
    U = np.stack([sprandom.random_unitary(2, gen) for _ in range(50)])
    assert variance.min_diagonal_over_rotations(V, U) == pytest.approx(
        variance.min_diagonal_over_rotations(V, list(U)), rel=1e-14)
    with pytest.raises(ValidationError):
        variance.min_diagonal_over_rotations(V, 2 * U)
