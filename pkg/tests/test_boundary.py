import numpy as np
from numpy.polynomial import polynomial
import pytest
from app.models.decomposition import Verdict
from app.services.boundary_service import diagonalize, extract_interconnection, port_map, wellposedness_verdict
from app.utils.exceptions import PassivityFailedError, ValidationFailedError
from app.utils.linalg import spectral_norm
from tests.conftest import random_spec


def test_port_map_single_channel(schrodinger):
    T = port_map(schrodinger)
    expected = np.array([[0, 0, 1, 0], [-1j, 0, 0, 0], [0, 0, 0, -1], [0, -1j, 0, 0]])
    assert np.array_equal(T, expected)


def test_example_verdicts(schrodinger, eb_illposed, roller_beam, eb_generic, scalar_channel):
    assert wellposedness_verdict(schrodinger).verdict == Verdict.WELL_POSED
    assert wellposedness_verdict(roller_beam).verdict == Verdict.WELL_POSED_SUFFICIENT
    assert wellposedness_verdict(eb_generic).verdict == Verdict.WELL_POSED
    assert wellposedness_verdict(scalar_channel).verdict == Verdict.WELL_POSED
    ill = wellposedness_verdict(eb_illposed)
    assert ill.verdict == Verdict.NOT_WELL_POSED
    assert ill.ratio < 1e-12
    assert np.linalg.matrix_rank(ill.B1) == 2


def test_schrodinger_b1(schrodinger):
    hbar2m = 2.0
    decomp = wellposedness_verdict(schrodinger.with_updates(H=[[hbar2m]], WB1=[[0, 1 / hbar2m, 0, 0], [0, 0, 0, 1j]],
                                                            WC=[[-1j * hbar2m, 0, 0, 0], [0, 0, -1, 0]]))
    assert np.allclose(decomp.B1, np.diag([-1j / hbar2m, 1.0]))
    assert np.allclose(decomp.B2, 0.0)


def test_extended_interconnection_shapes(roller_beam):
    B1, B2, C1, C2 = extract_interconnection(roller_beam)
    assert B1.shape == B2.shape == (4, 4)
    assert C1.shape == C2.shape == (1, 4)
    B1, _, _, _ = extract_interconnection(roller_beam, extended=False)
    assert B1.shape == (1, 4)
    assert wellposedness_verdict(roller_beam).extended


def test_interconnection_stack_invertible(eb_illposed):
    # 即便 B1 奇异，[B1 B2; C1 C2] 仍可逆
    assert wellposedness_verdict(eb_illposed).interconnection_ratio > 1e-6


def test_diagonalization_on_random_specs(rng):
    for _ in range(200):
        spec = random_spec(rng, int(rng.integers(1, 5)))
        d = diagonalize(spec)
        PH = spec.P2 @ spec.H
        assert spectral_norm(d.Q @ PH @ d.Qinv - d.Delta) <= 1e-11 * spectral_norm(PH)
        assert np.allclose(d.Q @ d.Qinv, np.eye(spec.n), atol=1e-11)
        assert np.all(d.mu[:d.nplus] > 0) and np.all(d.mu[d.nplus:] < 0)


def test_verdict_invariant_under_energy_scaling(rng):
    for trial in range(20):
        kind = "derivative" if trial % 2 else "value"
        spec = random_spec(rng, int(rng.integers(1, 4)), kind=kind, singular=(trial % 4 == 0))
        verdicts = {wellposedness_verdict(spec.with_updates(H=c * spec.H)).verdict for c in (1e-3, 1.0, 1e3)}
        assert len(verdicts) == 1


def test_singular_value_ports_are_ill_posed(rng):
    spec = random_spec(rng, 2, kind="value", singular=True)
    assert wellposedness_verdict(spec).verdict == Verdict.NOT_WELL_POSED


def test_failures_raise(schrodinger):
    with pytest.raises(PassivityFailedError):
        wellposedness_verdict(schrodinger.with_updates(WC=-schrodinger.WC))
    with pytest.raises(ValidationFailedError) as err:
        wellposedness_verdict(schrodinger.with_updates(P2=[[1.0]]))
    assert err.value.exit_code == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_port_map_is_invertible(rng, n):
    T = port_map(random_spec(rng, n))
    assert np.max(np.abs(np.linalg.inv(T) @ T - np.eye(4 * n))) <= 1e-13


@pytest.mark.parametrize("n", [1, 2, 3])
def test_port_map_reproduces_polynomial_traces(rng, n):
    spec = random_spec(rng, n)
    H, L = spec.H, spec.length
    # x 的各分量为 (ξ − a) 的 5 次多项式
    coeffs = rng.standard_normal((n, 6)) + 1j * rng.standard_normal((n, 6))
    x_b = np.array([polynomial.polyval(L, c) for c in coeffs])
    dx_b = np.array([polynomial.polyval(L, polynomial.polyder(c)) for c in coeffs])
    x_a, dx_a = coeffs[:, 0], coeffs[:, 1]
    z = np.concatenate([H @ x_b, H @ dx_b, H @ x_a, H @ dx_a])
    u_s = 1j * np.concatenate([H @ dx_b, H @ dx_a])
    y_s = np.concatenate([H @ x_b, -H @ x_a])
    assert np.max(np.abs(z - port_map(spec) @ np.concatenate([u_s, y_s]))) <= 1e-12 * (1.0 + np.abs(z).max())
