from typing import Any, Optional
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from app.models.spec import RealVector


class Discretization(BaseModel):
    """
    有限差分半离散 + 隐式中点推进所需的全部算子

    未知量排列：节点值 x_0..x_{N-1}（每个 n 维，节点优先）后接中点幽灵值 g = (g_b, g_a)。
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    spec_name: str
    nx: int = Field(..., ge=16)
    n: int
    m: int
    h: float
    dt: float
    grid: RealVector
    weights: RealVector  # 梯形权重（端点 ½）
    H: Any  # n×n 能量矩阵
    A_xx: Any  # 内部算子（sparse）
    A_xg: Any  # 幽灵值到端点行的耦合（sparse）
    Z_x: Any  # 迹算子的节点部分（4n × Nn）
    Z_g: Any  # 迹算子的幽灵部分（4n × 2n）
    W: Any  # [WB1; WB2]
    WC: Any
    lhs_lu: Any  # 中点步左端矩阵的 splu 分解
    rhs_op: Any  # I + Δt/2·A_xx

    @property
    def state_size(self) -> int:
        return self.nx * self.n


class Trajectory(BaseModel):
    """时间序列：状态、能量、端口功率（中点采样）"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    spec_name: str
    times: RealVector
    states: Any  # (K+1, N, n) complex
    hamiltonian: RealVector
    mid_times: RealVector
    port_power: RealVector  # Re(u_mid* y_mid)
    dissipation: RealVector  # Δt·q(z_mid)，即 H^{k+1} − H^k
    inputs: Any  # (K, m) 中点输入
    outputs: Any  # (K, m) 中点输出
    h: float
    dt: float
    initial_constraint_residual: Optional[float] = None

    @property
    def supplied_energy(self) -> np.ndarray:
        """∫₀^t Re(u*y) 的累积（中点求积）"""
        return np.concatenate([[0.0], np.cumsum(self.port_power) * self.dt])

    @property
    def dissipation_violation(self) -> float:
        """max_k [H(t_k) − H(0) − ∫₀^{t_k} Re(u*y)]，无源格式下应 ≤ 机器精度量级"""
        return float(np.max(self.hamiltonian - self.hamiltonian[0] - self.supplied_energy))
