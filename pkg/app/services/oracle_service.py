import logging
import numpy as np
from app.models.decomposition import BoundaryDecomposition
from app.models.spec import PhsSpec
from app.services.shooting_service import solve_traces
from app.services.transfer_service import closed_loop_transfer
from app.utils.linalg import spectral_norm

# 配置日志
logger = logging.getLogger(__name__)


def _solve_columns(spec: PhsSpec, s: complex, inputs: np.ndarray) -> np.ndarray:
    # 边界行 [WB1; WB2]，右端 (u, 0)
    data = np.zeros((2 * spec.n, inputs.shape[1]), dtype=complex)
    data[:spec.m, :] = inputs
    return spec.WC @ solve_traces(spec, spec.input_map, s, data)


def bvp_transfer_oracle(spec: PhsSpec, s: complex, u0) -> np.ndarray:
    """
    直接求解 s·x = (P2∂² + P0)Hx 的边值问题，返回输出 y = WC·Hτ(x)

    异常：
        ResolventError: s 处边值系统奇异
    """
    u = np.asarray(u0, dtype=complex).reshape(spec.m, 1)
    return _solve_columns(spec, s, u)[:, 0]


def oracle_transfer_matrix(spec: PhsSpec, s: complex) -> np.ndarray:
    """对每个单位输入求解一次，拼成 m×m 传递矩阵"""
    return _solve_columns(spec, s, np.eye(spec.m, dtype=complex))


def oracle_residual(spec: PhsSpec, decomp: BoundaryDecomposition, s: complex) -> float:
    """‖G_closed(s) − G_oracle(s)‖₂ / (1 + ‖G_oracle(s)‖₂)"""
    loop = closed_loop_transfer(spec, decomp, s)
    if loop.singular:
        return float("inf")
    G_or = oracle_transfer_matrix(spec, s)
    return spectral_norm(loop.G - G_or) / (1.0 + spectral_norm(G_or))
