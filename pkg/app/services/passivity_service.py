import logging
import numpy as np
from scipy.integrate import simpson
from config import settings
from app.models.report import PassivityCertificate
from app.models.spec import PhsSpec, TraceBlock
from app.utils.linalg import hermitian_eig, null_space, singular_ratio, spectral_norm

# 配置日志
logger = logging.getLogger(__name__)

MAX_ORACLE_DEGREE = 5


def boundary_form(spec: PhsSpec) -> np.ndarray:
    """
    边界二次型 Q_bnd（4n×4n Hermitian）

    z*·Q_bnd·z = Re(e(b)*·P2·e'(b)) − Re(e(a)*·P2·e'(a))，z = (e(b), e'(b), e(a), e'(a))
    """
    n = spec.n
    P2 = spec.P2
    vb, db, va, da = (block.rows(n) for block in TraceBlock)
    Q = np.zeros((4 * n, 4 * n), dtype=complex)
    Q[vb, db] = P2 / 2.0
    Q[db, vb] = P2.conj().T / 2.0
    Q[va, da] = -P2 / 2.0
    Q[da, va] = -P2.conj().T / 2.0
    return Q


def passivity_form(spec: PhsSpec) -> np.ndarray:
    """F = Q_bnd − ½(WB1*·WC + WC*·WB1)，无源当且仅当 F 在 ker(WB2) 上半负定"""
    cross = spec.WB1.conj().T @ spec.WC
    return boundary_form(spec) - (cross + cross.conj().T) / 2.0


def _kernel_restricted(spec: PhsSpec) -> np.ndarray:
    N = null_space(spec.WB2, 4 * spec.n)
    F = N.conj().T @ passivity_form(spec) @ N
    return (F + F.conj().T) / 2.0


def _scattering_frame(spec: PhsSpec) -> np.ndarray:
    # K = [R I; −R I]，R = [0 −P2⁻¹; P2⁻¹ 0]，满足 (KΣK*)⁻¹ = Q_bnd
    n = spec.n
    P2inv = np.linalg.inv(spec.P2)
    R = np.zeros((2 * n, 2 * n), dtype=complex)
    R[0:n, n:2 * n] = -P2inv
    R[n:2 * n, 0:n] = P2inv
    ident = np.eye(2 * n, dtype=complex)
    return np.block([[R, ident], [-R, ident]])


def gram_matrix(spec: PhsSpec) -> np.ndarray:
    """M = [W̃_B; W̃_C]·Σ·[W̃_B; W̃_C]*，W̃ = W·K/√2，Σ = [0 I; I 0]"""
    k = 2 * spec.n
    K = _scattering_frame(spec)
    Wt = np.vstack([spec.input_map, spec.WC]) @ K / np.sqrt(2.0)
    zero = np.zeros((k, k))
    Sigma = np.block([[zero, np.eye(k)], [np.eye(k), zero]])
    M = Wt @ Sigma @ Wt.conj().T
    return (M + M.conj().T) / 2.0


def check_passivity(spec: PhsSpec, tol: float | None = None) -> PassivityCertificate:
    """
    阻抗无源性检验：对 ker(WB2) 中所有 z 有 z*·Q_bnd·z ≤ Re((WB1 z)*·(WC z))

    m = 2n 时同时给出 Gram 矩阵形式的证书，两者不一致时记录警告。
    """
    tol = settings.PSD_TOL if tol is None else tol
    F = _kernel_restricted(spec)
    if F.size:
        w, _ = hermitian_eig(F)
        min_eig, max_eig = float(w[-1]), float(w[0])
    else:
        min_eig = max_eig = 0.0
    scale = max(1.0, spectral_norm(passivity_form(spec)))
    constrained_passed = max_eig <= tol * scale
    diagnostic = None if constrained_passed else f"ker(WB2) 上最大特征值 {max_eig:.3e} > 0"

    if not spec.full_ports:
        return PassivityCertificate(mode="constrained", witness=F, min_eig=min_eig, max_eig=max_eig,
                                    constrained_passed=constrained_passed, diagnostic=diagnostic)

    M = gram_matrix(spec)
    if singular_ratio(M) <= settings.SINGULAR_RATIO:
        return PassivityCertificate(mode="full", witness=F, min_eig=min_eig, max_eig=max_eig,
                                    constrained_passed=constrained_passed, gram_matrix=M, gram_passed=False,
                                    agrees=False, diagnostic="Gram matrix singular")

    k = 2 * spec.n
    zero = np.zeros((k, k))
    J = np.block([[zero, np.eye(k)], [np.eye(k), zero]])
    Minv = np.linalg.solve(M, np.eye(2 * k))
    D = (Minv + Minv.conj().T) / 2.0 - J
    gw, _ = hermitian_eig(D)
    # M⁻¹ − J = 2·W^{−*}·F·W⁻¹：拉回迹坐标后与约束形式用同一阈值比较
    W = spec.stacked_ports
    pulled = W.conj().T @ D @ W / 2.0
    pw, _ = hermitian_eig((pulled + pulled.conj().T) / 2.0)
    gram_pullback_max_eig = float(pw[0])
    gram_passed = gram_pullback_max_eig <= tol * scale
    agrees = gram_passed == constrained_passed
    notes = [diagnostic] if diagnostic else []
    if not gram_passed:
        notes.append(f"M⁻¹ − J 最大特征值 {float(gw[0]):.3e}")
    if not agrees:
        logger.warning(f"{spec.name}：约束形式与 Gram 形式的无源性结论不一致")
        notes.append("Gram 证书与约束形式不一致")
    diagnostic = "；".join(notes) or None
    return PassivityCertificate(
        mode="full", witness=F, min_eig=min_eig, max_eig=max_eig, constrained_passed=constrained_passed,
        gram_matrix=M, gram_min_eig=float(gw[-1]), gram_max_eig=float(gw[0]),
        gram_pullback_max_eig=gram_pullback_max_eig,
        gram_equality_residual=spectral_norm(Minv - J), gram_passed=gram_passed, agrees=agrees,
        diagnostic=diagnostic,
    )


def trace_operator(spec: PhsSpec, degree: int = MAX_ORACLE_DEGREE) -> np.ndarray:
    """
    多项式系数 -> 迹 z 的线性映射

    e(ξ) = Σ_k c_k·(ξ − a)^k，系数按分量优先展平：index = i·(degree+1) + k
    """
    n, L = spec.n, spec.length
    d = degree + 1
    T = np.zeros((4 * n, n * d), dtype=complex)
    for i in range(n):
        for k in range(d):
            col = i * d + k
            T[i, col] = L ** k
            if k >= 1:
                T[n + i, col] = k * L ** (k - 1)
            if k == 0:
                T[2 * n + i, col] = 1.0
            if k == 1:
                T[3 * n + i, col] = 1.0
    return T


def dissipation_gap(spec: PhsSpec, coeffs: np.ndarray, panels: int | None = None) -> float:
    """
    对给定多项式 e 计算 Re∫e*·P2·e'' − Re((WB1 z)*(WC z))

    参数：
        coeffs: n×(degree+1) 复系数，e(ξ) = Σ_k coeffs[:, k]·(ξ − a)^k
    """
    panels = settings.SIMPSON_PANELS if panels is None else panels
    C = np.asarray(coeffs, dtype=complex)
    degree = C.shape[1] - 1
    xi = np.linspace(spec.a, spec.b, panels + 1)
    t = xi - spec.a
    k = np.arange(degree + 1)
    V = t[None, :] ** k[:, None]
    V2 = np.zeros_like(V)
    V2[2:] = (k[2:] * (k[2:] - 1))[:, None] * t[None, :] ** (k[2:] - 2)[:, None]
    E = C @ V
    E2 = C @ V2
    integrand = np.real(np.sum(np.conj(E) * (spec.P2 @ E2), axis=0))
    lhs = float(simpson(integrand, x=xi))
    z = trace_operator(spec, degree) @ C.reshape(-1)
    rhs = float(np.real(np.vdot(spec.WB1 @ z, spec.WC @ z)))
    return lhs - rhs


def dissipation_form_oracle(spec: PhsSpec, trials: int | None = None, seed: int | None = None,
                            degree: int = MAX_ORACLE_DEGREE) -> float:
    """
    随机多项式状态上的耗散不等式检验，返回 max(LHS − RHS)

    样本限制在 WB2·Hτ = 0 的子空间内（e 即 Hx）。无源系统的返回值不超过积分误差量级。
    """
    trials = settings.ORACLE_TRIALS if trials is None else trials
    seed = settings.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    d = degree + 1
    basis = null_space(spec.WB2 @ trace_operator(spec, degree), spec.n * d)
    worst = -np.inf
    for _ in range(trials):
        w = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
        c = basis @ w
        c = c / max(np.linalg.norm(c), 1e-300)
        worst = max(worst, dissipation_gap(spec, c.reshape(spec.n, d)))
    logger.debug(f"{spec.name}：{trials} 次耗散试验的最大差值 {worst:.3e}")
    return float(worst)
