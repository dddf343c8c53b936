from enum import Enum
from typing import NamedTuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from app.models.spec import ComplexMatrix, RealVector


class Verdict(str, Enum):
    WELL_POSED = "WellPosed"
    WELL_POSED_SUFFICIENT = "WellPosedSufficient"  # m < 2n：扩展输入下可逆，仅为充分条件
    NOT_WELL_POSED = "NotWellPosed"
    NUMERICALLY_MARGINAL = "NumericallyMarginal"
    INCONCLUSIVE = "Inconclusive"


class Diagonalization(NamedTuple):
    """Q·P2·H·Q⁻¹ = Δ = i·diag(mu)，正的 mu 在前"""
    Q: np.ndarray
    Qinv: np.ndarray
    Delta: np.ndarray
    nplus: int
    mu: np.ndarray


class BoundaryDecomposition(BaseModel):
    """
    边界代数分解结果

    B1/B2/C1/C2 为标准散射端口 (u_s, y_s) 下的互联矩阵，
    B1t/B2t/C1t/C2t 为对角坐标下的对应矩阵（闭环传递函数使用）。
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    spec_name: str
    T: ComplexMatrix
    B1: ComplexMatrix
    B2: ComplexMatrix
    C1: ComplexMatrix
    C2: ComplexMatrix
    Q: ComplexMatrix
    Qinv: ComplexMatrix
    Delta: ComplexMatrix
    nplus: int = Field(..., ge=0)
    mu: RealVector
    B1t: ComplexMatrix
    B2t: ComplexMatrix
    C1t: ComplexMatrix
    C2t: ComplexMatrix
    extended: bool = Field(False, description="是否附加了 WB2 行（m < 2n）")
    sigma_min_B1: float
    sigma_max_B1: float
    verdict: Verdict
    diagonalization_residual: float
    interconnection_ratio: float | None = Field(None, description="[B1 B2; C1 C2] 的 σ_min/σ_max（仅 m = 2n）")

    @property
    def ratio(self) -> float:
        if self.sigma_max_B1 == 0.0:
            return 0.0
        return self.sigma_min_B1 / self.sigma_max_B1

    @property
    def n(self) -> int:
        return int(self.mu.shape[0])

    @property
    def m(self) -> int:
        return int(self.C1.shape[0])
