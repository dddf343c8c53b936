import logging
from pathlib import Path
from typing import Callable
import numpy as np
import pandas as pd
from app.utils.exceptions import SpecParseError

# 配置日志
logger = logging.getLogger(__name__)

Signal = Callable[[float], np.ndarray]


def _number(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecParseError(f"输入信号的{what}不是数值：{text!r}")


def _file_signal(path: str, m: int) -> Signal:
    file = Path(path)
    if not file.is_file():
        raise SpecParseError(f"输入信号文件不存在：{path}")
    frame = pd.read_csv(file)
    columns = ["t"] + [f"u{i + 1}" for i in range(m)]
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise SpecParseError(f"输入信号文件缺少列：{', '.join(missing)}")
    frame = frame.sort_values("t")
    t = frame["t"].to_numpy(dtype=float)
    values = frame[columns[1:]].to_numpy(dtype=float)
    # 区间外取端点值
    return lambda time: np.array([np.interp(time, t, values[:, i]) for i in range(m)], dtype=complex)


def parse_signal(text: str, m: int) -> Signal:
    """
    解析输入信号描述，所有分量取同一信号

    支持：zero | step:A | sine:A:f（A·sin(2πft)）| file:path（CSV 列 t,u1..um，线性插值）
    """
    kind, _, rest = text.partition(":")
    if kind == "zero" and not rest:
        return lambda t: np.zeros(m, dtype=complex)
    if kind == "step":
        amplitude = _number(rest, "幅值")
        return lambda t: np.full(m, amplitude, dtype=complex)
    if kind == "sine":
        parts = rest.split(":")
        if len(parts) != 2:
            raise SpecParseError(f"sine 信号格式应为 sine:A:f，实际 {text!r}")
        amplitude, freq = _number(parts[0], "幅值"), _number(parts[1], "频率")
        return lambda t: np.full(m, amplitude * np.sin(2.0 * np.pi * freq * t), dtype=complex)
    if kind == "file" and rest:
        return _file_signal(rest, m)
    raise SpecParseError(f"无法识别的输入信号：{text!r}")
