import logging
import numpy as np
from scipy.optimize import minimize_scalar
from config import settings
from app.models.decomposition import BoundaryDecomposition
from app.models.spec import PhsSpec
from app.models.transfer import BoundednessAssessment, FrequencyPoint, RefinementLevel, TransferScan
from app.services.boundary_service import wellposedness_verdict
from app.services.oracle_service import oracle_residual
from app.services.transfer_service import closed_loop_transfer
from app.tasks.scan_pool import map_ordered
from app.utils.exceptions import ResolventError
from app.utils.linalg import spectral_norm

# 配置日志
logger = logging.getLogger(__name__)

LINEAR_RANGE = 10.0


def omega_grid(omega_max: float, samples: int) -> np.ndarray:
    """
    关于 0 对称的频率网格：单侧一半点在 [0, 10] 线性分布，一半对数分布到 omega_max
    """
    one_sided = max(samples // 2, 2)
    w_lin = min(LINEAR_RANGE, omega_max)
    if omega_max <= LINEAR_RANGE:
        positive = np.linspace(0.0, omega_max, one_sided)
    else:
        n_lin = one_sided // 2
        linear = np.linspace(0.0, w_lin, n_lin)
        logarithmic = np.logspace(np.log10(w_lin), np.log10(omega_max), one_sided - n_lin + 1)[1:]
        positive = np.concatenate([linear, logarithmic])
    return np.concatenate([-positive[:0:-1], positive])


def evaluate_point(spec: PhsSpec, decomp: BoundaryDecomposition, r: float, omega: float,
                   polished: bool = False) -> FrequencyPoint:
    s = complex(r, omega)
    loop = closed_loop_transfer(spec, decomp, s)
    g_norm = float("inf") if loop.singular else spectral_norm(loop.G)
    return FrequencyPoint(omega=float(omega), re_s=r, im_s=float(omega), g_norm=g_norm, cond_loop=loop.cond,
                          loop_singular=loop.singular, polished=polished)


def _polish(spec: PhsSpec, decomp: BoundaryDecomposition, r: float, omegas: np.ndarray,
            points: list[FrequencyPoint], count: int) -> list[FrequencyPoint]:
    # 对网格上最大的若干局部极大值在相邻网格点之间做有界一维搜索
    norms = np.array([p.g_norm if not p.loop_singular else -np.inf for p in points])
    interior = [i for i in range(1, len(points) - 1)
                if np.isfinite(norms[i]) and norms[i] >= norms[i - 1] and norms[i] >= norms[i + 1]]
    interior.sort(key=lambda i: -norms[i])
    polished = []
    for i in interior[:count]:
        lo, hi = float(omegas[i - 1]), float(omegas[i + 1])

        def objective(w):
            loop = closed_loop_transfer(spec, decomp, complex(r, w))
            return 0.0 if loop.singular else -spectral_norm(loop.G)

        result = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                 options={"xatol": 1e-10 * max(1.0, abs(omegas[i]))})
        point = evaluate_point(spec, decomp, r, float(result.x), polished=True)
        if point.g_norm > points[i].g_norm:
            polished.append(point)
    return polished


def _scan_level(spec, decomp, r, omega_max, samples, threads, polish):
    omegas = omega_grid(omega_max, samples)
    points = map_ordered(lambda w: evaluate_point(spec, decomp, r, w), omegas, threads)
    extra = _polish(spec, decomp, r, omegas, points, polish) if polish else []
    return omegas, points, extra


def _assess(levels: list[RefinementLevel], any_singular: bool) -> BoundednessAssessment:
    if any_singular:
        return BoundednessAssessment.GROWING_UNBOUNDED
    first, last = levels[0].cumulative_sup, levels[-1].cumulative_sup
    if first > 0 and last / first > settings.SCAN_GROWTH_FACTOR:
        return BoundednessAssessment.GROWING_UNBOUNDED
    if len(levels) >= 2:
        prev = levels[-2].cumulative_sup
        if prev > 0 and (last - prev) / prev < settings.SCAN_STABLE_CHANGE:
            return BoundednessAssessment.BOUNDED
    return BoundednessAssessment.INCONCLUSIVE


def vertical_line_scan(
    spec: PhsSpec,
    r: float,
    omega_max: float | None = None,
    samples: int | None = None,
    threads: int | None = None,
    levels: int | None = None,
    decomp: BoundaryDecomposition | None = None,
    oracle_every: int = 0,
) -> TransferScan:
    """
    在竖线 Re s = r 上扫描 ‖G(s)‖ 并逐层加密

    第 j 层使用 samples·2^j 个点、频率上限 omega_max·10^j；每层精修网格局部极大值。
    累积上确界最后一层的相对变化 < SCAN_STABLE_CHANGE 判为 Bounded；
    累积增长超过 SCAN_GROWTH_FACTOR 倍或遇到奇异回路判为 GrowingUnbounded。

    参数：
        oracle_every: >0 时每隔该数目的第 0 层网格点用边值 oracle 交叉核对
    """
    if r <= 0:
        raise ValueError(f"r 必须为正，实际 {r}")
    omega_max = settings.SCAN_OMEGA_MAX if omega_max is None else omega_max
    samples = settings.SCAN_SAMPLES if samples is None else samples
    levels = settings.SCAN_LEVELS if levels is None else levels
    if decomp is None:
        decomp = wellposedness_verdict(spec)

    records: list[RefinementLevel] = []
    base_omegas = None
    base_points: list[FrequencyPoint] = []
    cumulative = 0.0
    any_singular = False
    for j in range(max(levels, 1)):
        omegas, points, extra = _scan_level(spec, decomp, r, omega_max * 10.0 ** j, samples * 2 ** j, threads,
                                            settings.SCAN_POLISH)
        level_points = points + extra
        singular = sum(p.loop_singular for p in level_points)
        finite = [p.g_norm for p in level_points if not p.loop_singular]
        level_sup = max(finite) if finite else float("inf")
        cumulative = max(cumulative, level_sup)
        any_singular = any_singular or singular > 0
        records.append(RefinementLevel(samples=len(omegas), omega_max=omega_max * 10.0 ** j, sup_norm=level_sup,
                                       cumulative_sup=cumulative, singular_points=singular))
        if j == 0:
            base_omegas = omegas
            base_points = sorted(level_points, key=lambda p: p.omega)
        if singular:
            logger.warning(f"{spec.name} r={r} 第{j}层：{singular} 个频率点回路矩阵奇异")
        logger.debug(f"{spec.name} r={r} 第{j}层：sup = {level_sup:.6g}")

    max_residual = None
    if oracle_every > 0:
        checked = []
        for index, point in enumerate(base_points):
            if index % oracle_every:
                continue
            try:
                residual = oracle_residual(spec, decomp, point.s)
            except ResolventError as e:
                logger.warning(f"oracle 在 s = {point.s} 失败：{e.detail}")
                residual = float("inf")
            base_points[index] = point.model_copy(update={"oracle_residual": residual})
            checked.append(residual)
        max_residual = max(checked) if checked else None

    assessment = _assess(records, any_singular)
    sup_norm = max(p.g_norm for p in base_points)
    logger.info(f"{spec.name} r={r}：sup‖G‖ ≈ {sup_norm:.6g}，判定 {assessment.value}")
    return TransferScan(spec_name=spec.name, r=r, omega=base_omegas, points=base_points, levels=records,
                        sup_norm=sup_norm, assessment=assessment, max_oracle_residual=max_residual)
