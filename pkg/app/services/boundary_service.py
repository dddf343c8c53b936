import logging
import numpy as np
from scipy.linalg import block_diag
from config import settings
from app.models.decomposition import BoundaryDecomposition, Diagonalization, Verdict
from app.models.spec import PhsSpec, TraceBlock
from app.services.passivity_service import check_passivity
from app.services.validation_service import validate_spec
from app.utils.exceptions import NumericalInconsistencyError, PassivityFailedError, ValidationFailedError
from app.utils.linalg import hermitian_eig, inv_sqrt_pd, singular_extremes, singular_ratio, spectral_norm, sqrt_pd

# 配置日志
logger = logging.getLogger(__name__)


def port_map(spec: PhsSpec) -> np.ndarray:
    """
    标准散射端口到迹的映射 T：z = T·(u_s,b, u_s,a, y_s,b, y_s,a)

    e(b) = y_s,b，e'(b) = −i·u_s,b，e(a) = −y_s,a，e'(a) = −i·u_s,a
    """
    n = spec.n
    ident = np.eye(n, dtype=complex)
    T = np.zeros((4 * n, 4 * n), dtype=complex)
    # 列顺序 (u_s,b, u_s,a, y_s,b, y_s,a)
    u_b, u_a, y_b, y_a = (slice(k * n, (k + 1) * n) for k in range(4))
    T[TraceBlock.VALUE_B.rows(n), y_b] = ident
    T[TraceBlock.DERIV_B.rows(n), u_b] = -1j * ident
    T[TraceBlock.VALUE_A.rows(n), y_a] = -ident
    T[TraceBlock.DERIV_A.rows(n), u_a] = -1j * ident
    return T


def extract_interconnection(spec: PhsSpec, extended: bool = True):
    """
    [B1 B2] = WB1·T，[C1 C2] = WC·T

    extended 为 True 且 m < 2n 时，WB2 的行附加到输入侧，B1/B2 为 2n×2n。
    """
    T = port_map(spec)
    k = 2 * spec.n
    WB = spec.input_map if extended else spec.WB1
    BB = WB @ T
    CC = spec.WC @ T
    return BB[:, :k], BB[:, k:], CC[:, :k], CC[:, k:]


def diagonalize(spec: PhsSpec) -> Diagonalization:
    """
    求 Q 使 Q·P2·H·Q⁻¹ = Δ = i·diag(mu)，正 mu 在前

    S = H^{1/2}·P2·H^{1/2} 为反Hermitian，对 −iS 做Jacobi分解 −iS = U·Λ·U*，
    则 Q = U*·H^{1/2}，Q⁻¹ = H^{−1/2}·U。
    """
    Hh = sqrt_pd(spec.H)
    Hih = inv_sqrt_pd(spec.H)
    S = Hh @ spec.P2 @ Hh
    A = -1j * S
    mu, U = hermitian_eig((A + A.conj().T) / 2.0)
    scale = max(float(np.abs(mu).max()), 1e-300)
    if float(np.abs(mu).min()) <= settings.SINGULAR_RATIO * scale:
        raise NumericalInconsistencyError(f"P2·H 存在近零特征值：min|μ| = {float(np.abs(mu).min()):.3e}")
    Q = U.conj().T @ Hh
    Qinv = Hih @ U
    Delta = np.diag(1j * mu)
    nplus = int(np.sum(mu > 0))
    return Diagonalization(Q=Q, Qinv=Qinv, Delta=Delta, nplus=nplus, mu=mu)


def _classify(ratio: float, full: bool) -> Verdict:
    if ratio > settings.SINGULAR_RATIO:
        return Verdict.WELL_POSED if full else Verdict.WELL_POSED_SUFFICIENT
    if ratio >= settings.MARGINAL_RATIO:
        return Verdict.NUMERICALLY_MARGINAL
    return Verdict.NOT_WELL_POSED if full else Verdict.INCONCLUSIVE


def wellposedness_verdict(spec: PhsSpec, tol: float | None = None,
                          psd_tol: float | None = None) -> BoundaryDecomposition:
    """
    完整的边界代数流程：校验 -> 无源性 -> 互联矩阵 -> 对角化 -> 结论

    参数：
        spec: 系统规格
        tol: 结构校验容差（默认 settings.STRUCT_TOL）
        psd_tol: 无源性判定容差（默认 settings.PSD_TOL）

    返回：
        BoundaryDecomposition：包含全部中间矩阵与 B1 的奇异值判据

    异常：
        ValidationFailedError: 结构假设不满足
        PassivityFailedError: 非阻抗无源
    """
    report = validate_spec(spec, tol)
    if not report.passed:
        raise ValidationFailedError(report)
    certificate = check_passivity(spec, psd_tol)
    if not certificate.passed:
        raise PassivityFailedError(certificate)

    T = port_map(spec)
    B1, B2, C1, C2 = extract_interconnection(spec, extended=True)
    diag = diagonalize(spec)
    residual = spectral_norm(diag.Q @ spec.P2 @ spec.H - diag.Delta @ diag.Q)
    if residual > 1e-8 * (1.0 + spectral_norm(spec.P2 @ spec.H)) * max(1.0, spectral_norm(diag.Q)):
        raise NumericalInconsistencyError(f"对角化残差过大：{residual:.3e}")

    # 对角坐标：u_s = i·P2⁻¹Q⁻¹·ũ（i 在闭环中约去）
    Kd = np.linalg.solve(spec.P2, diag.Qinv)
    K = block_diag(Kd, Kd)
    sigma_min, sigma_max = singular_extremes(B1)
    ratio = sigma_min / sigma_max if sigma_max > 0 else 0.0
    verdict = _classify(ratio, spec.full_ports)
    interconnection_ratio = singular_ratio(np.block([[B1, B2], [C1, C2]])) if spec.full_ports else None

    logger.info(f"{spec.name}：σ_min/σ_max(B1) = {ratio:.3e}，结论 {verdict.value}")
    return BoundaryDecomposition(
        spec_name=spec.name, T=T, B1=B1, B2=B2, C1=C1, C2=C2,
        Q=diag.Q, Qinv=diag.Qinv, Delta=diag.Delta, nplus=diag.nplus, mu=diag.mu,
        B1t=B1 @ K, B2t=B2 @ K, C1t=C1 @ K, C2t=C2 @ K,
        extended=not spec.full_ports, sigma_min_B1=sigma_min, sigma_max_B1=sigma_max, verdict=verdict,
        diagonalization_residual=residual, interconnection_ratio=interconnection_ratio,
    )


def format_report(decomp: BoundaryDecomposition) -> str:
    """人类可读的分析报告"""
    fmt = {"complex_kind": lambda z: f"{z.real:+.4g}{z.imag:+.4g}j"}
    lines = [
        f"系统: {decomp.spec_name}",
        f"结论: {decomp.verdict.value}" + (" (sufficient)" if decomp.extended else ""),
        f"σ_min(B1) = {decomp.sigma_min_B1:.6e}, σ_max(B1) = {decomp.sigma_max_B1:.6e}, 比值 = {decomp.ratio:.3e}",
        f"对角化: n+ = {decomp.nplus}, μ = {np.array2string(decomp.mu, precision=6)}",
    ]
    if decomp.extended:
        lines.append("输入已扩展（附加 WB2 行），结论为充分条件")
    if decomp.interconnection_ratio is not None:
        lines.append(f"[B1 B2; C1 C2] 的 σ_min/σ_max = {decomp.interconnection_ratio:.3e}")
    lines.append("B1 =")
    lines.append(np.array2string(decomp.B1, formatter=fmt))
    return "\n".join(lines)
