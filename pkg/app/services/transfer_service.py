import logging
from typing import NamedTuple
import numpy as np
from scipy.linalg import lu_factor, lu_solve
from config import settings
from app.models.decomposition import BoundaryDecomposition
from app.models.spec import PhsSpec
from app.services.boundary_service import port_map
from app.services.shooting_service import solve_traces
from app.utils.exceptions import ResolventError

# 配置日志
logger = logging.getLogger(__name__)

# Re(γL) 超过该值时 e^{−2γL} 可忽略
ASYMPTOTIC_BETA = 30.0


class LoopEvaluation(NamedTuple):
    G: np.ndarray
    cond: float
    singular: bool


def hyperbolic_pair(beta: complex) -> tuple[complex, complex]:
    """不溢出的 (coth β, csch β)"""
    sign = 1.0
    if beta.real < 0:
        beta, sign = -beta, -1.0
    if beta.real > ASYMPTOTIC_BETA:
        return sign * 1.0, sign * 2.0 * np.exp(-beta)
    E = np.exp(-2.0 * beta)
    one_minus_E = -np.expm1(-2.0 * beta)
    return sign * (1.0 + E) / one_minus_E, sign * 2.0 * np.exp(-beta) / one_minus_E


def transfer_from_gamma(gamma: complex, length: float) -> np.ndarray:
    """(i/γ)·[[−coth γL, csch γL], [csch γL, −coth γL]]"""
    coth, csch = hyperbolic_pair(complex(gamma) * length)
    return (1j / gamma) * np.array([[-coth, csch], [csch, -coth]], dtype=complex)


def scalar_transfer(mu: float, length: float, s: complex) -> np.ndarray:
    """
    标量通道 ∂t x = iμ·∂²x 的 2×2 传递矩阵

    端口 u = (iμx'(b), iμx'(a))，y = (μx(b), −μx(a))，γ² = −is/μ，取 Re γ > 0。
    """
    gamma = np.sqrt(-1j * complex(s) / mu)
    if gamma.real < 0:
        gamma = -gamma
    return transfer_from_gamma(gamma, length)


def sinh_lower_bound_check(r: float, x_grid) -> float:
    """
    min over x of |α·sinh α|/r，α = r/x + i·x

    使用 |sinh(p + iq)|² = sinh²p + sin²q，避免大 p 时出现 inf·0。
    """
    x = np.asarray(x_grid, dtype=float)
    p = r / x
    q = x
    with np.errstate(over="ignore"):
        mag = np.sqrt(np.sinh(p) ** 2 + np.sin(q) ** 2)
        values = np.abs(p + 1j * q) * mag / r
    return float(np.min(values))


def csch_bound_holds(mu: float, length: float, s: complex) -> bool:
    """|γ⁻¹·csch(γL)| ≤ 2|μ|/(rL)，r = Re s > 0"""
    gamma = np.sqrt(-1j * complex(s) / mu)
    if gamma.real < 0:
        gamma = -gamma
    _, csch = hyperbolic_pair(gamma * length)
    bound = 2.0 * abs(mu) / (complex(s).real * length)
    return bool(abs(csch / gamma) <= bound * (1.0 + 1e-12))


def assemble_Gs(decomp: BoundaryDecomposition, length: float, s: complex) -> np.ndarray:
    """块对角通道传递矩阵：通道 k 占据 (k, n+k) 行列"""
    n = decomp.n
    Gs = np.zeros((2 * n, 2 * n), dtype=complex)
    for k, mu in enumerate(decomp.mu):
        g = scalar_transfer(float(mu), length, s)
        Gs[k, k] = g[0, 0]
        Gs[k, n + k] = g[0, 1]
        Gs[n + k, k] = g[1, 0]
        Gs[n + k, n + k] = g[1, 1]
    return Gs


def port_transfer(spec: PhsSpec, s: complex) -> np.ndarray:
    """
    开环端口映射 N(s)：y_s = N·u_s（2n×2n）

    u_s 给定导数迹（Neumann 数据），y_s 读出值迹；P0 ≠ 0 时没有闭式，
    按 T⁻¹ 的前 2n 行施加边界条件，用多重打靶逐列求解。

    异常：
        ResolventError: s 处 Neumann 问题不可解
    """
    k = 2 * spec.n
    Tinv = np.linalg.inv(port_map(spec))
    traces = solve_traces(spec, Tinv[:k], s, np.eye(k, dtype=complex))
    return Tinv[k:] @ traces


def closed_loop_transfer(spec: PhsSpec, decomp: BoundaryDecomposition, s: complex) -> LoopEvaluation:
    """
    G(s) = (C1 + C2·N)·(B1 + B2·N)⁻¹，取前 m 列（扩展输入时其余列对应 v = 0）

    P0 = 0 时 N 由对角通道给出，等价地 G = (C̃1 + C̃2·Gs)·(B̃1 + B̃2·Gs)⁻¹；
    P0 ≠ 0 时 N 由 port_transfer 数值求得。
    回路矩阵条件数超过 settings.LOOP_SINGULAR_COND 时标记为奇异，G 置为 nan。
    """
    m = decomp.m
    if spec.has_zero_order_term:
        try:
            N = port_transfer(spec, s)
        except ResolventError as e:
            logger.debug(e.detail)
            return LoopEvaluation(G=np.full((m, m), np.nan, dtype=complex), cond=float("inf"), singular=True)
        loop = decomp.B1 + decomp.B2 @ N
        out = decomp.C1 + decomp.C2 @ N
    else:
        Gs = assemble_Gs(decomp, spec.length, s)
        loop = decomp.B1t + decomp.B2t @ Gs
        out = decomp.C1t + decomp.C2t @ Gs
    with np.errstate(all="ignore"):
        cond = float(np.linalg.cond(loop))
    if not np.isfinite(cond) or cond > settings.LOOP_SINGULAR_COND:
        logger.debug(f"s = {s}：回路矩阵奇异（cond = {cond:.3e}）")
        return LoopEvaluation(G=np.full((m, m), np.nan, dtype=complex), cond=cond, singular=True)
    X = lu_solve(lu_factor(loop), np.eye(loop.shape[0], dtype=complex)[:, :m])
    return LoopEvaluation(G=out @ X, cond=cond, singular=False)
