import logging
import math
import numpy as np
from scipy import linalg as sla
from config import settings
from app.utils.exceptions import NonHermitianError, NotPositiveDefiniteError

# 配置日志
logger = logging.getLogger(__name__)

MAX_SWEEPS = 100

# Padé 逼近阶数与对应的 1-范数阈值（Higham 2005）
PADE_ORDERS = (3, 5, 7, 9, 13)
PADE_THETA = (0.01495585217958292, 0.2539398330063230, 0.9504178996162932,
              2.097847961257068, 5.371920351148152)
PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
         960960.0, 16380.0, 182.0, 1.0),
}


def as_complex_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """把嵌套列表/数组转换成二维 complex128 矩阵（空矩阵按给定列数保留形状）"""
    arr = np.asarray(data, dtype=complex)
    if arr.size == 0:
        if arr.ndim == 2 and rows is None and cols is None:
            return arr
        return np.zeros((rows or 0, cols or 0), dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return arr


def spectral_norm(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def singular_extremes(M: np.ndarray) -> tuple[float, float]:
    """返回 (σ_min, σ_max)；宽矩阵的 σ_min 即满行秩的判据"""
    if M.size == 0:
        return 0.0, 0.0
    sv = np.linalg.svd(M, compute_uv=False)
    return float(sv.min()), float(sv.max())


def singular_ratio(M: np.ndarray) -> float:
    smin, smax = singular_extremes(M)
    if smax == 0.0:
        return 0.0
    return smin / smax


def hermitian_residual(M: np.ndarray) -> float:
    return spectral_norm(M - M.conj().T)


def null_space(M: np.ndarray, cols: int) -> np.ndarray:
    """M 的正交核空间基；M 无行时返回单位阵"""
    if M.shape[0] == 0:
        return np.eye(cols, dtype=complex)
    return sla.null_space(M, rcond=settings.SINGULAR_RATIO).astype(complex)


def _fix_phase(U: np.ndarray) -> np.ndarray:
    # 每个特征向量模最大的分量（并列取第一个）调成正实数
    U = U.copy()
    for k in range(U.shape[1]):
        mags = np.abs(U[:, k])
        idx = int(np.flatnonzero(mags >= mags.max() * (1.0 - 1e-12))[0])
        phase = U[idx, k] / mags[idx]
        U[:, k] = U[:, k] * np.conj(phase)
    return U


def hermitian_eig(M, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    复Hermitian矩阵的循环Jacobi特征分解

    参数：
        M: Hermitian 矩阵
        tol: 非Hermitian判定的相对容差（默认 settings.STRUCT_TOL）

    返回：
        (eigenvalues, U): 特征值降序排列，U 为酉矩阵，M = U·diag(eigenvalues)·U*

    异常：
        NonHermitianError: 输入偏离Hermitian超出容差
    """
    A = as_complex_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise NonHermitianError(f"特征分解需要方阵，实际形状 {A.shape}")
    tol = settings.STRUCT_TOL if tol is None else tol
    residual = hermitian_residual(A)
    if residual > tol * (1.0 + spectral_norm(A)):
        raise NonHermitianError(f"矩阵非Hermitian：‖M − M*‖ = {residual:.3e}")

    n = A.shape[0]
    A = (A + A.conj().T) / 2.0
    U = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(A, "fro"))
    if n == 0 or scale == 0.0:
        return np.zeros(n), U

    for sweep in range(MAX_SWEEPS):
        off = float(np.linalg.norm(A - np.diag(np.diag(A)), "fro"))
        if off <= 1e-14 * scale:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                abs_apq = abs(apq)
                if abs_apq <= 1e-300:
                    continue
                rotated = True
                app, aqq = A[p, p].real, A[q, q].real
                phase = apq / abs_apq
                theta = (aqq - app) / (2.0 * abs_apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                J = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.conj().T @ A[idx, :]
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                U[:, idx] = U[:, idx] @ J
        if not rotated:
            break
    else:
        logger.warning(f"Jacobi 在 {MAX_SWEEPS} 轮后仍未收敛（n={n}）")

    eigenvalues = np.diag(A).real
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], _fix_phase(U[:, order])


def _pd_eig(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, U = hermitian_eig(H)
    if w.size and w.min() <= 0.0:
        raise NotPositiveDefiniteError(f"矩阵非正定：最小特征值 {w.min():.3e}")
    return w, U


def sqrt_pd(H) -> np.ndarray:
    """Hermitian正定矩阵的正定平方根 S，满足 S·S = H"""
    w, U = _pd_eig(as_complex_matrix(H))
    S = (U * np.sqrt(w)) @ U.conj().T
    return (S + S.conj().T) / 2.0


def inv_sqrt_pd(H) -> np.ndarray:
    w, U = _pd_eig(as_complex_matrix(H))
    S = (U / np.sqrt(w)) @ U.conj().T
    return (S + S.conj().T) / 2.0


def _pade(A: np.ndarray, m: int) -> np.ndarray:
    n = A.shape[0]
    c = PADE_COEFFS[m]
    ident = np.eye(n, dtype=A.dtype)
    A2 = A @ A
    if m == 13:
        A4 = A2 @ A2
        A6 = A2 @ A4
        U = A @ (A6 @ (c[13] * A6 + c[11] * A4 + c[9] * A2)
                 + c[7] * A6 + c[5] * A4 + c[3] * A2 + c[1] * ident)
        V = A6 @ (c[12] * A6 + c[10] * A4 + c[8] * A2) + c[6] * A6 + c[4] * A4 + c[2] * A2 + c[0] * ident
    else:
        powers = [ident, A2]
        for _ in range(2, (m + 1) // 2 + 1):
            powers.append(powers[-1] @ A2)
        U = np.zeros_like(A)
        V = np.zeros_like(A)
        for j in range(m, 0, -2):
            U = U + c[j] * powers[j // 2]
        U = A @ U
        for j in range(m - 1, -1, -2):
            V = V + c[j] * powers[j // 2]
    return np.linalg.solve(V - U, V + U)


def expm(A) -> np.ndarray:
    """
    缩放-平方 + Padé 逼近的矩阵指数

    1-范数不超过阈值时直接选用最低够用的 Padé 阶数；
    否则缩放到 ‖A‖/2^k ≤ 5.37 后用 13 阶 Padé 并平方 k 次。
    """
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return A.copy()
    norm1 = float(np.linalg.norm(A, 1))
    for m, theta in zip(PADE_ORDERS, PADE_THETA):
        if norm1 <= theta:
            return _pade(A, m)
    t, s = math.frexp(norm1 / PADE_THETA[-1])
    s = s - (t == 0.5)
    F = _pade(A / 2.0 ** s, 13)
    for _ in range(s):
        F = F @ F
    return F
