from enum import Enum
from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field
from app.models.spec import RealVector


class BoundednessAssessment(str, Enum):
    BOUNDED = "Bounded"
    GROWING_UNBOUNDED = "GrowingUnbounded"
    INCONCLUSIVE = "Inconclusive"


class FrequencyPoint(BaseModel):
    omega: float
    re_s: float
    im_s: float
    g_norm: float = Field(..., ge=0.0)  # 回路奇异时为 inf
    cond_loop: float
    loop_singular: bool = False
    polished: bool = False  # 由局部极大值精修得到
    oracle_residual: Optional[float] = None

    @property
    def s(self) -> complex:
        return complex(self.re_s, self.im_s)


class RefinementLevel(BaseModel):
    samples: int
    omega_max: float
    sup_norm: float
    cumulative_sup: float
    singular_points: int = 0


class TransferScan(BaseModel):
    """竖线 Re s = r 上的 ‖G(s)‖ 扫描"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec_name: str
    r: float = Field(..., gt=0.0)
    omega: RealVector
    points: List[FrequencyPoint]
    levels: List[RefinementLevel] = []
    sup_norm: float
    assessment: BoundednessAssessment
    max_oracle_residual: Optional[float] = None

    def summary(self) -> dict:
        return {
            "spec": self.spec_name,
            "r": self.r,
            "sup_norm": self.sup_norm,
            "assessment": self.assessment.value,
            "levels": [level.model_dump() for level in self.levels],
            "max_oracle_residual": self.max_oracle_residual,
        }
