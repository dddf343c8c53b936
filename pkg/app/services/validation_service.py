import logging
import numpy as np
from config import settings
from app.models.report import ValidationCheck, ValidationReport
from app.models.spec import PhsSpec
from app.utils.exceptions import NonHermitianError, SpecDimensionError
from app.utils.linalg import hermitian_eig, singular_ratio, spectral_norm

# 配置日志
logger = logging.getLogger(__name__)


def check_dimensions(spec: PhsSpec) -> None:
    """所有矩阵的形状必须与 (n, m) 一致，且 1 ≤ m ≤ 2n"""
    n, m = spec.n, spec.m
    if m > 2 * n:
        raise SpecDimensionError("m", (f"≤ {2 * n}",), (m,))
    expected = {
        "P2": (n, n),
        "P0": (n, n),
        "H": (n, n),
        "WB1": (m, 4 * n),
        "WB2": (2 * n - m, 4 * n),
        "WC": (m, 4 * n),
    }
    for name, shape in expected.items():
        actual = getattr(spec, name).shape
        if actual != shape:
            raise SpecDimensionError(name, shape, actual)


def _skew_check(name: str, M: np.ndarray, tol: float) -> ValidationCheck:
    residual = spectral_norm(M + M.conj().T)
    threshold = tol * (1.0 + spectral_norm(M))
    return ValidationCheck(name=name, passed=residual <= threshold, residual=residual, threshold=threshold)


def _rank_check(name: str, M: np.ndarray) -> ValidationCheck:
    ratio = singular_ratio(M)
    return ValidationCheck(
        name=name, passed=ratio > settings.SINGULAR_RATIO, residual=ratio, threshold=settings.SINGULAR_RATIO,
        detail="σ_min/σ_max",
    )


def validate_spec(spec: PhsSpec, tol: float | None = None) -> ValidationReport:
    """
    检查规格的结构假设

    参数：
        spec: 待检查规格
        tol: 相对容差（默认 settings.STRUCT_TOL）

    返回：
        ValidationReport：逐项结果，全部通过时 passed 为 True

    异常：
        SpecDimensionError: 矩阵维度与 (n, m) 不一致
    """
    tol = settings.STRUCT_TOL if tol is None else tol
    check_dimensions(spec)
    checks: list[ValidationCheck] = []

    finite = all(np.all(np.isfinite(getattr(spec, f))) for f in ("P2", "P0", "H", "WB1", "WB2", "WC"))
    checks.append(ValidationCheck(name="finite_entries", passed=finite, residual=0.0 if finite else float("inf"),
                                  threshold=0.0))
    checks.append(ValidationCheck(name="interval", passed=spec.b > spec.a, residual=spec.b - spec.a, threshold=0.0,
                                  detail="b − a"))
    if not finite:
        logger.warning(f"规格 {spec.name} 含非有限元素，跳过其余检查")
        return ValidationReport(spec_name=spec.name, checks=checks)

    checks.append(_skew_check("P2_skew_hermitian", spec.P2, tol))
    checks.append(_rank_check("P2_invertible", spec.P2))
    checks.append(_skew_check("P0_skew_hermitian", spec.P0, tol))

    H = spec.H
    h_residual = spectral_norm(H - H.conj().T)
    h_threshold = tol * (1.0 + spectral_norm(H))
    checks.append(ValidationCheck(name="H_hermitian", passed=h_residual <= h_threshold, residual=h_residual,
                                  threshold=h_threshold))
    try:
        w, _ = hermitian_eig((H + H.conj().T) / 2.0)
        lam_min, lam_max = float(w[-1]), float(w[0])
        threshold = settings.SINGULAR_RATIO * max(abs(lam_max), 1e-300)
        checks.append(ValidationCheck(name="H_positive_definite", passed=lam_min > threshold, residual=lam_min,
                                      threshold=threshold, detail="λ_min(H)"))
    except NonHermitianError as e:
        checks.append(ValidationCheck(name="H_positive_definite", passed=False, residual=float("nan"),
                                      threshold=0.0, detail=e.detail))

    checks.append(_rank_check("W_full_row_rank", spec.stacked_ports))

    report = ValidationReport(spec_name=spec.name, checks=checks)
    if not report.passed:
        failed = [c.name for c in checks if not c.passed]
        logger.info(f"规格 {spec.name} 未通过结构检查：{failed}")
    return report
