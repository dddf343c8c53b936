import logging
import math
import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu
from app.models.spec import PhsSpec
from app.utils.exceptions import ResolventError
from app.utils.linalg import expm, spectral_norm

# 配置日志
logger = logging.getLogger(__name__)

MAX_SEGMENTS = 400


def _segments(length: float, M: np.ndarray) -> int:
    # 每段传播矩阵的增长控制在 e^4 量级
    return int(min(MAX_SEGMENTS, max(1, math.ceil(length * math.sqrt(spectral_norm(M)) / 4.0))))


def shooting_system(spec: PhsSpec, rows: np.ndarray, s: complex):
    """
    伴随一阶系统 z' = A·z，z = (e, e')，A = [[0, I], [M, 0]]，M = P2⁻¹(s·H⁻¹ − P0)

    K 段多重打靶：Z_{j+1} − Φ·Z_j = 0，最后一块为边界行 rows·(Z_K, Z_0)。

    参数：
        rows: 2n×4n 边界条件矩阵，作用在迹 (e(b), e'(b), e(a), e'(a)) 上

    返回：
        (system, K)：稀疏 CSC 块系统与段数
    """
    n = spec.n
    M = np.linalg.solve(spec.P2, complex(s) * np.linalg.inv(spec.H) - spec.P0)
    A = np.block([[np.zeros((n, n)), np.eye(n)], [M, np.zeros((n, n))]])
    K = _segments(spec.length, M)
    Phi = expm(A * (spec.length / K))
    k = 2 * n
    ident = sparse.identity(k, dtype=complex, format="csr")
    blocks = []
    for j in range(K):
        row = [None] * (K + 1)
        row[j] = sparse.csr_matrix(-Phi)
        row[j + 1] = ident
        blocks.append(row)
    boundary = [None] * (K + 1)
    # 迹 = (e(b), e'(b), e(a), e'(a)) = (Z_K, Z_0)
    boundary[K] = sparse.csr_matrix(rows[:, :k])
    boundary[0] = sparse.csr_matrix(rows[:, k:])
    blocks.append(boundary)
    return sparse.bmat(blocks, format="csc"), K


def solve_traces(spec: PhsSpec, rows: np.ndarray, s: complex, data: np.ndarray) -> np.ndarray:
    """
    求解 s·x = (P2∂² + P0)Hx，边界条件 rows·Hτ(x) = data 的每一列

    返回：
        4n×列数 的迹矩阵 Hτ(x)

    异常：
        ResolventError: s 处边值系统奇异或解非有限
    """
    system, K = shooting_system(spec, rows, s)
    k = 2 * spec.n
    try:
        lu = splu(system)
    except RuntimeError as e:
        raise ResolventError(f"s = {s} 处边值系统奇异：{e}")
    rhs = np.zeros(((K + 1) * k, data.shape[1]), dtype=complex)
    rhs[K * k:K * k + data.shape[0], :] = data
    Z = lu.solve(rhs)
    if not np.all(np.isfinite(Z)):
        raise ResolventError(f"s = {s} 处边值系统解非有限")
    return np.vstack([Z[K * k:(K + 1) * k, :], Z[0:k, :]])
