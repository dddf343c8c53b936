import numpy as np
import pytest
from app.services.signal_service import parse_signal
from app.services.simulation_service import discretize, hamiltonian, simulate, smooth_random_state, step
from app.utils.exceptions import ClosureSingularError, PassivityFailedError, SpecParseError


def zero_input(m):
    return lambda t: np.zeros(m)


def test_roller_beam_zero_input_never_gains_energy(roller_beam):
    for seed in range(20):
        x0 = smooth_random_state(roller_beam, 81, seed=seed)
        trajectory = simulate(roller_beam, x0, zero_input(1), t_end=0.05, nx=81, dt=1e-3)
        H0 = trajectory.hamiltonian[0]
        assert np.all(trajectory.hamiltonian - H0 <= 1e-9 * H0)


def test_schrodinger_conserves_energy(schrodinger):
    x0 = smooth_random_state(schrodinger, 201, seed=3)
    trajectory = simulate(schrodinger, x0, zero_input(2), t_end=1.0, nx=201, dt=1e-3)
    H = trajectory.hamiltonian
    assert np.max(np.abs(H - H[0])) <= 1e-8 * H[0]
    assert len(trajectory.times) == 1001


def test_step_energy_balance(eb_generic):
    trajectory = simulate(eb_generic, None, parse_signal("step:0.5", 4), t_end=0.1, nx=61, dt=1e-3)
    assert np.allclose(trajectory.dissipation, trajectory.dt * trajectory.port_power, atol=1e-10)
    assert trajectory.dissipation_violation <= 1e-9
    assert trajectory.hamiltonian[-1] > 0


def test_step_matches_simulate(schrodinger):
    disc = discretize(schrodinger, 41, 1e-3)
    x0 = smooth_random_state(schrodinger, 41, seed=1)
    u = parse_signal("sine:1:2", 2)
    x1 = step(disc, x0, u(0.0), u(1e-3))
    trajectory = simulate(schrodinger, x0, u, t_end=1e-3, nx=41, dt=1e-3)
    assert np.allclose(trajectory.states[1], x1)


def test_hamiltonian_trapezoid(schrodinger):
    disc = discretize(schrodinger, 101, 1e-3)
    # 常数状态 x = 1：H = ½·h·∫1 = ½
    assert hamiltonian(disc, np.ones((101, 1))) == pytest.approx(0.5)


def test_schrodinger_second_order_convergence(schrodinger):
    # 齐次 Neumann 条件下的精确解 e^{−iπ²t}·cos(πξ)
    errors = []
    for nx, dt in ((51, 1e-2), (101, 5e-3)):
        grid = np.linspace(0.0, 1.0, nx)
        x0 = np.cos(np.pi * grid)[:, None]
        trajectory = simulate(schrodinger, x0, zero_input(2), t_end=0.1, nx=nx, dt=dt)
        exact = np.exp(-1j * np.pi ** 2 * 0.1) * np.cos(np.pi * grid)
        errors.append(np.max(np.abs(trajectory.states[-1][:, 0] - exact)))
    assert 3.0 < errors[0] / errors[1] < 5.0


def test_too_few_nodes_rejected(schrodinger):
    with pytest.raises(SpecParseError):
        discretize(schrodinger, 8)


def test_default_step_size(eb_generic):
    disc = discretize(eb_generic)
    assert disc.nx == 201
    assert disc.dt == pytest.approx(1e-3)


def test_rank_deficient_closure(schrodinger):
    broken = schrodinger.with_updates(WB1=[[0, 1, 0, 0], [0, 2, 0, 0]])
    with pytest.raises(ClosureSingularError) as err:
        discretize(broken, 21)
    assert err.value.exit_code == 5
    assert err.value.block.shape == (2, 2)


def test_inconsistent_initial_state_warns(roller_beam, caplog):
    x0 = np.ones((41, 2)) + 0.3 * np.linspace(0, 1, 41)[:, None] ** 2
    simulate(roller_beam, x0, zero_input(1), t_end=2e-3, nx=41, dt=1e-3)
    assert "不相容" in caplog.text


def test_signal_parsing(tmp_path):
    assert np.allclose(parse_signal("step:2", 3)(5.0), 2.0)
    assert np.allclose(parse_signal("sine:1:0.25", 1)(1.0), 1.0)
    path = tmp_path / "u.csv"
    path.write_text("t,u1,u2\n0,0,1\n1,2,3\n")
    assert np.allclose(parse_signal(f"file:{path}", 2)(0.5), [1.0, 2.0])
    with pytest.raises(SpecParseError):
        parse_signal("ramp:1", 1)
    with pytest.raises(SpecParseError):
        parse_signal(f"file:{path}", 3)


def test_non_passive_spec_not_simulated(schrodinger):
    flipped = schrodinger.with_updates(WC=-schrodinger.WC)
    with pytest.raises(PassivityFailedError):
        simulate(flipped, None, zero_input(2), t_end=1e-3, nx=21, dt=1e-3)
