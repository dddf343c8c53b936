import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm
from app.utils.exceptions import NonHermitianError, NotPositiveDefiniteError
from app.utils.linalg import expm, hermitian_eig, inv_sqrt_pd, singular_ratio, sqrt_pd
from tests.conftest import random_hermitian


@pytest.mark.parametrize("n", [1, 2, 5, 8, 16])
def test_hermitian_eig_matches_lapack(rng, n):
    A = random_hermitian(rng, n, -3.0, 3.0)
    w, U = hermitian_eig(A)
    assert np.allclose(w, np.sort(np.linalg.eigvalsh(A))[::-1], atol=1e-12)
    assert np.allclose(U.conj().T @ U, np.eye(n), atol=1e-12)
    assert np.allclose(U @ np.diag(w) @ U.conj().T, A, atol=1e-11)


def test_hermitian_eig_phase_convention(rng):
    w, U = hermitian_eig(random_hermitian(rng, 4, 0.5, 2.0))
    for k in range(4):
        idx = np.argmax(np.abs(U[:, k]))
        assert abs(U[idx, k].imag) < 1e-14
        assert U[idx, k].real > 0


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        hermitian_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_sqrt_pd(rng):
    H = random_hermitian(rng, 3, 0.5, 2.0)
    S = sqrt_pd(H)
    assert np.allclose(S @ S, H, atol=1e-12)
    assert np.allclose(inv_sqrt_pd(H) @ S, np.eye(3), atol=1e-12)
    with pytest.raises(NotPositiveDefiniteError):
        sqrt_pd(np.diag([1.0, -1.0]))


@pytest.mark.parametrize("scale", [1e-3, 0.2, 1.5, 4.0, 60.0])
def test_expm_matches_scipy(rng, scale):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    A = scale * A / np.linalg.norm(A, 1)
    expected = scipy_expm(A)
    assert np.linalg.norm(expm(A) - expected) <= 1e-12 * max(1.0, np.linalg.norm(expected))


def test_singular_ratio():
    assert singular_ratio(np.diag([2.0, 1.0])) == pytest.approx(0.5)
    assert singular_ratio(np.array([[1.0, 1.0], [1.0, 1.0]])) < 1e-15
