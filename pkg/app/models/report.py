from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, computed_field
from app.models.spec import ComplexMatrix


class ValidationCheck(BaseModel):
    """单项结构假设检验"""
    name: str
    passed: bool
    residual: float  # 算子范数偏差或奇异值/特征值比
    threshold: float
    detail: Optional[str] = None


class ValidationReport(BaseModel):
    spec_name: str
    checks: List[ValidationCheck] = []

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> ValidationCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)


class PassivityCertificate(BaseModel):
    """
    阻抗无源性证书

    constrained 模式检验 ker(WB2) 上 Q_bnd − ½(WB1*WC + WC*WB1) 的半负定性；
    full 模式（m = 2n）额外计算 Gram 矩阵条件 M⁻¹ ≼ [0 I; I 0] 并交叉核对。
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    mode: Literal["full", "constrained"]
    witness: ComplexMatrix  # 实际检验的 Hermitian 型（已限制到核空间）
    min_eig: float
    max_eig: float
    constrained_passed: bool
    gram_matrix: Optional[ComplexMatrix] = None
    gram_min_eig: Optional[float] = None
    gram_max_eig: Optional[float] = None
    gram_pullback_max_eig: Optional[float] = Field(None, description="½·W*(M⁻¹ − J)W 的最大特征值，与 max_eig 同尺度")
    gram_equality_residual: Optional[float] = Field(None, description="‖M⁻¹ − [0 I; I 0]‖")
    gram_passed: Optional[bool] = None
    agrees: Optional[bool] = None
    diagnostic: Optional[str] = None

    @computed_field
    @property
    def passed(self) -> bool:
        if self.mode == "full":
            return self.constrained_passed and bool(self.gram_passed)
        return self.constrained_passed
