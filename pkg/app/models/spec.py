from enum import IntEnum
from typing import Annotated
import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, model_validator
from app.utils.linalg import as_complex_matrix


def matrix_to_pairs(M) -> list:
    """复矩阵 -> 行优先嵌套列表，每个元素为 [re, im]"""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


# 复矩阵字段：输入转 complex128 二维数组并只读，JSON 导出为 [re, im] 对
ComplexMatrix = Annotated[
    np.ndarray,
    BeforeValidator(lambda v: _freeze(as_complex_matrix(v))),
    PlainSerializer(matrix_to_pairs, return_type=list),
]

# 实数序列字段（时间序列、特征值等）
RealVector = Annotated[
    np.ndarray,
    BeforeValidator(lambda v: _freeze(np.asarray(v, dtype=float).reshape(-1))),
    PlainSerializer(lambda v: [float(x) for x in np.asarray(v).reshape(-1)], return_type=list),
]

MATRIX_FIELDS = ("P2", "P0", "H", "WB1", "WB2", "WC")


class PhsSpec(BaseModel):
    """
    一个端口Hamilton系统的有限描述

    ∂x/∂t = (P2·∂²/∂ξ² + P0)·H·x，ξ ∈ [a, b]
    u = WB1·Hτ(x)，0 = WB2·Hτ(x)，y = WC·Hτ(x)
    其中 τ(x) = (x(b), x'(b), x(a), x'(a))
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str = Field(..., min_length=1, description="系统标识")
    n: int = Field(..., ge=1, description="状态维数")
    m: int = Field(..., ge=1, description="输入/输出维数")
    a: float = Field(..., description="区间左端点")
    b: float = Field(..., description="区间右端点")
    P2: ComplexMatrix
    P0: ComplexMatrix
    H: ComplexMatrix
    WB1: ComplexMatrix
    WB2: ComplexMatrix
    WC: ComplexMatrix

    @model_validator(mode="before")
    @classmethod
    def _shape_empty_wb2(cls, data):
        # m = 2n 时 WB2 允许为空数组，统一整形为 0×4n
        if isinstance(data, dict) and "n" in data:
            wb2 = data.get("WB2")
            if wb2 is None or np.asarray(wb2).size == 0:
                data = dict(data)
                data["WB2"] = np.zeros((0, 4 * int(data["n"])), dtype=complex)
        return data

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def full_ports(self) -> bool:
        """m = 2n（无 WB2 约束）"""
        return self.m == 2 * self.n

    @property
    def has_zero_order_term(self) -> bool:
        """P0 ≠ 0 时通道不再解耦，传递函数需数值求解"""
        return bool(np.any(self.P0 != 0))

    @property
    def input_map(self) -> np.ndarray:
        """[WB1; WB2]：扩展输入（附加输入 v = WB2·Hτ(x)）"""
        return np.vstack([self.WB1, self.WB2])

    @property
    def stacked_ports(self) -> np.ndarray:
        return np.vstack([self.WB1, self.WB2, self.WC])

    def with_updates(self, **changes) -> "PhsSpec":
        data = {field: getattr(self, field) for field in type(self).model_fields}
        data.update(changes)
        return PhsSpec(**data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhsSpec):
            return NotImplemented
        if (self.name, self.n, self.m, self.a, self.b) != (other.name, other.n, other.m, other.a, other.b):
            return False
        return all(
            getattr(self, f).shape == getattr(other, f).shape
            and np.array_equal(getattr(self, f), getattr(other, f))
            for f in MATRIX_FIELDS
        )

    __hash__ = None


class TraceBlock(IntEnum):
    """τ(x) 的 n 维分块顺序：(x(b), x'(b), x(a), x'(a))"""
    VALUE_B = 0
    DERIV_B = 1
    VALUE_A = 2
    DERIV_A = 3

    def rows(self, n: int) -> slice:
        return slice(self.value * n, (self.value + 1) * n)
