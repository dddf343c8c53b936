import numpy as np
import pytest
from app.services.boundary_service import wellposedness_verdict
from app.services.example_service import get_example
from app.services.oracle_service import bvp_transfer_oracle, oracle_residual, oracle_transfer_matrix
from app.services.transfer_service import scalar_transfer
from tests.conftest import WELL_POSED_KEYS, random_spec


def random_points(rng, count):
    return [complex(rng.uniform(0.5, 100.0), rng.uniform(-100.0, 100.0)) for _ in range(count)]


@pytest.mark.parametrize("key", WELL_POSED_KEYS)
def test_builtin_examples_match_closed_loop(rng, key):
    spec = get_example(key)
    decomp = wellposedness_verdict(spec)
    for s in random_points(rng, 10):
        assert oracle_residual(spec, decomp, s) <= 1e-7


def test_random_specs_match_closed_loop(rng):
    for index in range(50):
        spec = random_spec(rng, int(rng.integers(1, 4)), kind="derivative" if index % 2 else "value")
        decomp = wellposedness_verdict(spec)
        for s in random_points(rng, 10):
            assert oracle_residual(spec, decomp, s) <= 1e-7, (index, s)


def test_scalar_channel_oracle(scalar_channel):
    s = complex(3.0, -7.0)
    assert np.allclose(oracle_transfer_matrix(scalar_channel, s), scalar_transfer(1.0, 1.0, s), rtol=1e-9)


def test_single_input_column(eb_generic):
    s = complex(1.5, 4.0)
    u = np.array([1.0, 0.0, -2.0, 1j])
    assert np.allclose(bvp_transfer_oracle(eb_generic, s, u), oracle_transfer_matrix(eb_generic, s) @ u)


def test_stiff_point_uses_segments(roller_beam):
    decomp = wellposedness_verdict(roller_beam)
    assert oracle_residual(roller_beam, decomp, complex(50.0, 2000.0)) <= 1e-7


def test_zero_order_term_matches_oracle(rng):
    for _ in range(5):
        spec = random_spec(rng, int(rng.integers(1, 4)))
        spec = spec.with_updates(P0=10.0 * spec.P0)
        decomp = wellposedness_verdict(spec)
        for s in (complex(1.0, 0.0), complex(0.5, 30.0)):
            assert oracle_residual(spec, decomp, s) <= 1e-7
