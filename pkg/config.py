import os
from pydantic_settings import BaseSettings
from dotenv import load_dotenv

# 加载环境变量（.env 可覆盖下列默认值）
load_dotenv()


class Settings(BaseSettings):
    # 结构校验容差
    STRUCT_TOL: float = float(os.getenv("STRUCT_TOL", 1e-10))  # 残差阈值 = STRUCT_TOL·(1+‖M‖)
    PSD_TOL: float = float(os.getenv("PSD_TOL", 1e-9))  # 半负定判定允许的特征值上浮
    SINGULAR_RATIO: float = float(os.getenv("SINGULAR_RATIO", 1e-9))  # σ_min/σ_max 低于此值视为奇异
    MARGINAL_RATIO: float = float(os.getenv("MARGINAL_RATIO", 1e-12))  # 数值临界区间下沿

    # 随机检验配置
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", 0))
    ORACLE_TRIALS: int = int(os.getenv("ORACLE_TRIALS", 500))  # 耗散不等式随机试验次数
    SIMPSON_PANELS: int = int(os.getenv("SIMPSON_PANELS", 2000))  # 复合Simpson积分分段数（≥200）

    # 频域扫描配置
    SCAN_SAMPLES: int = int(os.getenv("SCAN_SAMPLES", 512))
    SCAN_OMEGA_MAX: float = float(os.getenv("SCAN_OMEGA_MAX", 1e4))
    SCAN_LEVELS: int = int(os.getenv("SCAN_LEVELS", 4))  # 加密层数（含第0层）
    SCAN_STABLE_CHANGE: float = float(os.getenv("SCAN_STABLE_CHANGE", 0.05))  # 有界判定：相对变化 < 5%
    SCAN_GROWTH_FACTOR: float = float(os.getenv("SCAN_GROWTH_FACTOR", 10.0))  # 无界判定：增长 > 10倍
    SCAN_POLISH: int = int(os.getenv("SCAN_POLISH", 3))  # 每层精修的局部极大值个数
    LOOP_SINGULAR_COND: float = float(os.getenv("LOOP_SINGULAR_COND", 1e12))
    SCAN_THREADS: int = int(os.getenv("SCAN_THREADS", 0))  # 0 表示使用 os.cpu_count()
    ORACLE_TOL: float = float(os.getenv("ORACLE_TOL", 1e-6))  # oracle-compare 判定阈值

    # 时域仿真配置
    SIM_NX: int = int(os.getenv("SIM_NX", 201))
    SIM_DT_FACTOR: float = float(os.getenv("SIM_DT_FACTOR", 1e-3))  # Δt = 系数·(b−a)²

    # 日志级别
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")


# 实例化配置
settings = Settings()
