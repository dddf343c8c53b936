import logging
import math
from typing import Callable
import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu
from config import settings
from app.models.spec import PhsSpec
from app.models.trajectory import Discretization, Trajectory
from app.services.passivity_service import check_passivity
from app.services.validation_service import validate_spec
from app.utils.exceptions import ClosureSingularError, PassivityFailedError, SpecParseError, ValidationFailedError
from app.utils.linalg import singular_ratio, spectral_norm

# 配置日志
logger = logging.getLogger(__name__)

MIN_NODES = 16


def _trace_operators(n: int, nx: int, h: float, H: np.ndarray):
    """z_h = Z_x·x + Z_g·g，导数迹用中心差分（端点外侧为幽灵值）"""
    size = nx * n
    Z_x = sparse.lil_matrix((4 * n, size), dtype=complex)
    Z_g = sparse.lil_matrix((4 * n, 2 * n), dtype=complex)
    last, prev = (nx - 1) * n, (nx - 2) * n
    Z_x[0:n, last:last + n] = H
    Z_x[n:2 * n, prev:prev + n] = -H / (2.0 * h)
    Z_g[n:2 * n, 0:n] = np.eye(n) / (2.0 * h)
    Z_x[2 * n:3 * n, 0:n] = H
    Z_x[3 * n:4 * n, n:2 * n] = H / (2.0 * h)
    Z_g[3 * n:4 * n, n:2 * n] = -np.eye(n) / (2.0 * h)
    return Z_x.tocsr(), Z_g.tocsr()


def trapezoid_weights(nx: int) -> np.ndarray:
    w = np.ones(nx)
    w[0] = w[-1] = 0.5
    return w


def discretize(spec: PhsSpec, nx: int | None = None, dt: float | None = None) -> Discretization:
    """
    空间二阶有限差分 + 隐式中点格式的一次性组装与分解

    端点处 e'' 使用幽灵值，幽灵值由中点时刻的边界条件 [WB1; WB2]·z_h = (u, 0) 确定，
    离散能量 H_h = (h/2)·Σ w_j·Re(x_j*·H·x_j) 满足逐步恒等式
    H^{k+1} − H^k = Δt·q(z_mid)。

    异常：
        ClosureSingularError: 边界闭合不可解（[WB1; WB2] 亏秩或步进矩阵奇异）
    """
    nx = settings.SIM_NX if nx is None else nx
    dt = settings.SIM_DT_FACTOR * spec.length ** 2 if dt is None else dt
    if nx < MIN_NODES:
        raise SpecParseError(f"空间节点数至少为 {MIN_NODES}，实际 {nx}")
    if dt <= 0.0:
        raise SpecParseError(f"时间步长必须为正，实际 {dt}")
    n = spec.n
    h = spec.length / (nx - 1)
    H = np.asarray(spec.H)
    W = spec.input_map
    Z_x, Z_g = _trace_operators(n, nx, h, H)
    derivative_block = W @ Z_g.toarray() * (2.0 * h)

    if singular_ratio(W) <= settings.SINGULAR_RATIO:
        raise ClosureSingularError(f"{spec.name}：[WB1; WB2] 行亏秩，无法闭合边界", block=derivative_block)

    # 内部算子：ẋ_j = P2·(e_{j+1} − 2e_j + e_{j−1})/h² + P0·e_j，e_j = H·x_j
    lap = sparse.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(nx, nx)) / h ** 2
    E = sparse.kron(sparse.identity(nx), H)
    A_xx = (sparse.kron(lap, spec.P2) + sparse.kron(sparse.identity(nx), spec.P0)) @ E
    A_xx = sparse.csr_matrix(A_xx, dtype=complex)
    A_xg = sparse.lil_matrix((nx * n, 2 * n), dtype=complex)
    A_xg[(nx - 1) * n:nx * n, 0:n] = spec.P2 / h ** 2
    A_xg[0:n, n:2 * n] = spec.P2 / h ** 2
    A_xg = A_xg.tocsr()

    ident = sparse.identity(nx * n, dtype=complex, format="csr")
    WZ_x = sparse.csr_matrix(W) @ Z_x
    WZ_g = sparse.csr_matrix(W) @ Z_g
    lhs = sparse.bmat([[ident - (dt / 2.0) * A_xx, -dt * A_xg],
                       [0.5 * WZ_x, WZ_g]], format="csc")
    try:
        lu = splu(lhs)
    except RuntimeError as e:
        raise ClosureSingularError(f"{spec.name}：中点步进矩阵奇异（{e}）", block=derivative_block)

    return Discretization(
        spec_name=spec.name, nx=nx, n=n, m=spec.m, h=h, dt=dt,
        grid=np.linspace(spec.a, spec.b, nx), weights=trapezoid_weights(nx), H=H,
        A_xx=A_xx, A_xg=A_xg, Z_x=Z_x, Z_g=Z_g, W=W, WC=spec.WC, lhs_lu=lu,
        rhs_op=ident + (dt / 2.0) * A_xx,
    )


def hamiltonian(disc: Discretization, state: np.ndarray) -> float:
    X = np.asarray(state, dtype=complex).reshape(disc.nx, disc.n)
    density = np.real(np.einsum("ji,ik,jk->j", X.conj(), disc.H, X))
    return float(0.5 * disc.h * np.sum(disc.weights * density))


def _advance(disc: Discretization, state: np.ndarray, u_mid: np.ndarray):
    x = np.asarray(state, dtype=complex).reshape(-1)
    n2 = 2 * disc.n
    bc = np.zeros(n2, dtype=complex)
    bc[:disc.m] = u_mid
    rhs = np.concatenate([disc.rhs_op @ x, bc - 0.5 * (disc.W @ (disc.Z_x @ x))])
    sol = disc.lhs_lu.solve(rhs)
    x_next, ghosts = sol[:x.size], sol[x.size:]
    z_mid = disc.Z_x @ (0.5 * (x + x_next)) + disc.Z_g @ ghosts
    return x_next, z_mid


def step(disc: Discretization, state: np.ndarray, u_now, u_next) -> np.ndarray:
    """推进一个 Δt：输入取 (u_now + u_next)/2，返回 (N, n) 新状态"""
    u_mid = 0.5 * (np.asarray(u_now, dtype=complex) + np.asarray(u_next, dtype=complex))
    x_next, _ = _advance(disc, state, u_mid)
    return x_next.reshape(disc.nx, disc.n)


def one_sided_traces(disc: Discretization, state: np.ndarray) -> np.ndarray:
    """二阶单侧差分的迹 (e(b), e'(b), e(a), e'(a))"""
    X = np.asarray(state, dtype=complex).reshape(disc.nx, disc.n)
    e = X @ disc.H.T
    h = disc.h
    de_b = (3.0 * e[-1] - 4.0 * e[-2] + e[-3]) / (2.0 * h)
    de_a = (-3.0 * e[0] + 4.0 * e[1] - e[2]) / (2.0 * h)
    return np.concatenate([e[-1], de_b, e[0], de_a])


def smooth_random_state(spec: PhsSpec, nx: int, seed: int | None = None, modes: int = 4) -> np.ndarray:
    """若干低阶三角模态的随机叠加，归一化到最大模为 1"""
    rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
    xi = (np.linspace(spec.a, spec.b, nx) - spec.a) / spec.length
    X = np.zeros((nx, spec.n), dtype=complex)
    for k in range(1, modes + 1):
        coeff = (rng.standard_normal(spec.n) + 1j * rng.standard_normal(spec.n)) / k ** 2
        X += np.outer(np.sin(math.pi * k * xi), coeff)
    return X / max(float(np.abs(X).max()), 1e-300)


def check_simulable(spec: PhsSpec, tol: float | None = None, psd_tol: float | None = None) -> None:
    """
    仿真前置校验：维度、结构假设与阻抗无源性

    [WB1; WB2] 行亏秩不在此处拒绝，由 discretize 报告为边界闭合奇异。

    异常：
        SpecDimensionError: 维度不一致
        ValidationFailedError: 其余结构假设不满足
        PassivityFailedError: 非阻抗无源
    """
    report = validate_spec(spec, tol)
    if any(not c.passed and c.name != "W_full_row_rank" for c in report.checks):
        raise ValidationFailedError(report)
    if report.passed:
        certificate = check_passivity(spec, psd_tol)
        if not certificate.passed:
            raise PassivityFailedError(certificate)


def simulate(
    spec: PhsSpec,
    x0: np.ndarray | None,
    u: Callable[[float], np.ndarray],
    t_end: float,
    nx: int | None = None,
    dt: float | None = None,
    tol: float | None = None,
    psd_tol: float | None = None,
) -> Trajectory:
    """
    从 x0 出发在输入 u(t) 下积分到 t_end

    参数：
        x0: (nx, n) 初值，None 表示零状态
        u: 时间 -> m 维输入
        dt: 步长（向下调整为 t_end 的整数分之一）
        tol, psd_tol: 前置校验的结构/无源性容差

    返回：
        Trajectory：节点时刻的状态与能量、中点时刻的输入/输出与端口功率

    异常：
        见 check_simulable 与 discretize
    """
    check_simulable(spec, tol, psd_tol)
    nx = settings.SIM_NX if nx is None else nx
    dt = settings.SIM_DT_FACTOR * spec.length ** 2 if dt is None else dt
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    disc = discretize(spec, nx, t_end / steps)
    dt = disc.dt

    x = np.zeros((nx, spec.n), dtype=complex) if x0 is None else np.asarray(x0, dtype=complex).reshape(nx, spec.n)
    z0 = one_sided_traces(disc, x)
    target = np.zeros(2 * spec.n, dtype=complex)
    target[:spec.m] = np.asarray(u(0.0), dtype=complex)
    residual = spectral_norm((disc.W @ z0 - target).reshape(-1, 1))
    if residual > 1e-6 * (1.0 + float(np.linalg.norm(z0))):
        logger.warning(f"{spec.name}：初值与边界条件不相容（残差 {residual:.3e}），首步将引入不连续")

    times = dt * np.arange(steps + 1)
    states = np.empty((steps + 1, nx, spec.n), dtype=complex)
    states[0] = x
    energy = np.empty(steps + 1)
    energy[0] = hamiltonian(disc, x)
    inputs = np.empty((steps, spec.m), dtype=complex)
    outputs = np.empty((steps, spec.m), dtype=complex)
    power = np.empty(steps)
    dissipation = np.empty(steps)

    u_prev = np.asarray(u(0.0), dtype=complex)
    for k in range(steps):
        u_next = np.asarray(u(times[k + 1]), dtype=complex)
        u_mid = 0.5 * (u_prev + u_next)
        x_next, z_mid = _advance(disc, states[k], u_mid)
        states[k + 1] = x_next.reshape(nx, spec.n)
        energy[k + 1] = hamiltonian(disc, x_next)
        y_mid = spec.WC @ z_mid
        inputs[k] = u_mid
        outputs[k] = y_mid
        power[k] = float(np.real(np.vdot(u_mid, y_mid)))
        dissipation[k] = energy[k + 1] - energy[k]
        u_prev = u_next

    logger.info(f"{spec.name}：{steps} 步（Δt = {dt:.3e}，N = {nx}），H: {energy[0]:.6g} -> {energy[-1]:.6g}")
    return Trajectory(
        spec_name=spec.name, times=times, states=states, hamiltonian=energy,
        mid_times=times[:-1] + dt / 2.0, port_power=power, dissipation=dissipation,
        inputs=inputs, outputs=outputs, h=disc.h, dt=dt, initial_constraint_residual=residual,
    )
