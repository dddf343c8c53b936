from typing import Callable, Dict
from pydantic import BaseModel, ConfigDict, Field
from app.models.decomposition import Verdict
from app.models.spec import PhsSpec


class ExampleRegistryEntry(BaseModel):
    """内置示例：按参数构造规格，并声明期望的适定性结论"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    key: str
    title: str
    expected_verdict: Verdict
    provenance: str
    defaults: Dict[str, float] = Field(default_factory=dict)
    builder: Callable[..., PhsSpec] = Field(..., exclude=True)

    def build(self, **params: float) -> PhsSpec:
        values = dict(self.defaults)
        values.update(params)
        return self.builder(**values)
