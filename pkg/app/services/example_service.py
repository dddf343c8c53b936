import logging
import numpy as np
from app.models.decomposition import Verdict
from app.models.example import ExampleRegistryEntry
from app.models.spec import PhsSpec
from app.utils.exceptions import SpecParseError, UnknownExampleError

# 配置日志
logger = logging.getLogger(__name__)


def _select(n: int, picks: list[tuple[int, complex]]) -> list:
    """单行端口向量：picks 为 (迹分量下标, 系数)"""
    row = np.zeros(4 * n, dtype=complex)
    for index, coeff in picks:
        row[index] = coeff
    return row


def _positive(name: str, value: float) -> float:
    if not value > 0:
        raise SpecParseError(f"参数 {name} 必须为正，实际 {value}")
    return float(value)


def schrodinger(hbar2m: float = 1.0) -> PhsSpec:
    """
    自由 Schrödinger 方程 ∂t x = i·(ħ/2m)·∂²x，h = ħ/2m（参数 hbar2m），e = h·x

    u = (e'(b)/h, i·e'(a))，y = (−i·h·e(b), −e(a))
    """
    h = _positive("hbar2m", hbar2m)
    return PhsSpec(
        name="schrodinger", n=1, m=2, a=0.0, b=1.0,
        P2=[[1j]], P0=[[0.0]], H=[[h]],
        WB1=[_select(1, [(1, 1.0 / h)]), _select(1, [(3, 1j)])],
        WB2=np.zeros((0, 4)),
        WC=[_select(1, [(0, -1j * h)]), _select(1, [(2, -1.0)])],
    )


def _beam_operator(rho: float, EI: float):
    P2 = [[0.0, -1.0], [1.0, 0.0]]
    H = [[1.0 / _positive("rho", rho), 0.0], [0.0, _positive("EI", EI)]]
    return P2, H


# 迹分量下标（n = 2）：e1(b)=0 e2(b)=1 e1'(b)=2 e2'(b)=3 e1(a)=4 e2(a)=5 e1'(a)=6 e2'(a)=7

def eb_illposed(rho: float = 1.0, EI: float = 1.0) -> PhsSpec:
    """
    Euler-Bernoulli 梁：u = (e1'(0), e1(0), e2(1), e2'(1))，y = (−e2(0), e2'(0), e1'(1), −e1(1))

    无源但 B1 亏秩（两个输入只作用于同一端的速度/剪力对）
    """
    P2, H = _beam_operator(rho, EI)
    return PhsSpec(
        name="eb-illposed", n=2, m=4, a=0.0, b=1.0, P2=P2, P0=np.zeros((2, 2)), H=H,
        WB1=[_select(2, [(6, 1.0)]), _select(2, [(4, 1.0)]), _select(2, [(1, 1.0)]), _select(2, [(3, 1.0)])],
        WB2=np.zeros((0, 8)),
        WC=[_select(2, [(5, -1.0)]), _select(2, [(7, 1.0)]), _select(2, [(2, 1.0)]), _select(2, [(0, -1.0)])],
    )


def roller_beam(rho: float = 1.0, EI: float = 1.0) -> PhsSpec:
    """
    两端滚支梁：u = e1'(1)，约束 e1'(0) = e2'(0) = e2'(1) = 0，y = e2(1)
    """
    P2, H = _beam_operator(rho, EI)
    return PhsSpec(
        name="roller-beam", n=2, m=1, a=0.0, b=1.0, P2=P2, P0=np.zeros((2, 2)), H=H,
        WB1=[_select(2, [(2, 1.0)])],
        WB2=[_select(2, [(6, 1.0)]), _select(2, [(7, 1.0)]), _select(2, [(3, 1.0)])],
        WC=[_select(2, [(1, 1.0)])],
    )


def eb_generic(rho: float = 1.0, EI: float = 1.0) -> PhsSpec:
    """
    两端力/力矩输入的梁：u = (e1'(1), e2'(1), e1'(0), e2'(0))，y = (e2(1), −e1(1), −e2(0), e1(0))
    """
    P2, H = _beam_operator(rho, EI)
    return PhsSpec(
        name="eb-generic", n=2, m=4, a=0.0, b=1.0, P2=P2, P0=np.zeros((2, 2)), H=H,
        WB1=[_select(2, [(2, 1.0)]), _select(2, [(3, 1.0)]), _select(2, [(6, 1.0)]), _select(2, [(7, 1.0)])],
        WB2=np.zeros((0, 8)),
        WC=[_select(2, [(1, 1.0)]), _select(2, [(0, -1.0)]), _select(2, [(5, -1.0)]), _select(2, [(4, 1.0)])],
    )


def scalar_channel(mu: float = 1.0) -> PhsSpec:
    """
    标量通道 ∂t x = iμ·∂²x，P2 = i·sgn μ，H = |μ|

    u = i·sgn μ·(e'(b), e'(a)) = iμ·(x'(b), x'(a))，y = (e(b), −e(a))
    """
    if mu == 0:
        raise SpecParseError("参数 mu 不能为 0")
    sign = float(np.sign(mu))
    return PhsSpec(
        name="scalar-channel", n=1, m=2, a=0.0, b=1.0,
        P2=[[1j * sign]], P0=[[0.0]], H=[[abs(mu)]],
        WB1=[_select(1, [(1, 1j * sign)]), _select(1, [(3, 1j * sign)])],
        WB2=np.zeros((0, 4)),
        WC=[_select(1, [(0, 1.0)]), _select(1, [(2, -1.0)])],
    )


REGISTRY: dict[str, ExampleRegistryEntry] = {
    entry.key: entry
    for entry in (
        ExampleRegistryEntry(key="schrodinger", title="一维自由 Schrödinger 方程", builder=schrodinger,
                             expected_verdict=Verdict.WELL_POSED, defaults={"hbar2m": 1.0},
                             provenance="两端导数型边界输入，B1 = diag(−i/h, 1)"),
        ExampleRegistryEntry(key="eb-illposed", title="Euler-Bernoulli 梁（不适定边界）", builder=eb_illposed,
                             expected_verdict=Verdict.NOT_WELL_POSED, defaults={"rho": 1.0, "EI": 1.0},
                             provenance="无源但 B1 秩为 2 的端口选取"),
        ExampleRegistryEntry(key="roller-beam", title="两端滚支梁（单输入）", builder=roller_beam,
                             expected_verdict=Verdict.WELL_POSED_SUFFICIENT, defaults={"rho": 1.0, "EI": 1.0},
                             provenance="m < 2n，WB2 约束附加到输入后判定"),
        ExampleRegistryEntry(key="eb-generic", title="Euler-Bernoulli 梁（力/力矩输入）", builder=eb_generic,
                             expected_verdict=Verdict.WELL_POSED, defaults={"rho": 1.0, "EI": 1.0},
                             provenance="两端均以导数迹为输入，B2 = 0"),
        ExampleRegistryEntry(key="scalar-channel", title="标量通道 iμ∂²", builder=scalar_channel,
                             expected_verdict=Verdict.WELL_POSED, defaults={"mu": 1.0},
                             provenance="闭环传递函数即通道传递矩阵 G_μ（μ > 0）"),
    )
}


def list_examples() -> list[ExampleRegistryEntry]:
    return list(REGISTRY.values())


def get_example(key: str, params: dict[str, float] | None = None) -> PhsSpec:
    """
    按键名构造示例规格

    异常：
        UnknownExampleError: 键名不存在
        SpecParseError: 参数名未知或取值非法
    """
    entry = REGISTRY.get(key)
    if entry is None:
        raise UnknownExampleError(f"未知示例 {key!r}，可选：{', '.join(REGISTRY)}")
    params = params or {}
    unknown = [p for p in params if p not in entry.defaults]
    if unknown:
        raise SpecParseError(f"示例 {key} 不接受参数：{', '.join(unknown)}")
    logger.debug(f"构造示例 {key}，参数 {params}")
    return entry.build(**params)
