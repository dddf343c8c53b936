import json
import logging
from pathlib import Path
import numpy as np
import pandas as pd
from app.models.transfer import TransferScan
from app.models.trajectory import Trajectory

# 配置日志
logger = logging.getLogger(__name__)

SCAN_COLUMNS = ["omega", "re_s", "im_s", "g_norm", "cond_loop", "oracle_residual"]


def write_json(path: str, payload) -> dict:
    """
    写出 JSON 报告

    返回：
        dict: {"key": 文件路径, "content_type": "application/json"}
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(payload, indent=2, ensure_ascii=False), encoding="utf-8")
    logger.info(f"已写出 {target}")
    return {"key": str(target), "content_type": "application/json"}


def scan_frame(scans: list[TransferScan]) -> pd.DataFrame:
    rows = [
        {
            "omega": p.omega,
            "re_s": p.re_s,
            "im_s": p.im_s,
            "g_norm": p.g_norm,
            "cond_loop": p.cond_loop,
            "oracle_residual": np.nan if p.oracle_residual is None else p.oracle_residual,
        }
        for scan in scans
        for p in scan.points
    ]
    return pd.DataFrame(rows, columns=SCAN_COLUMNS)


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    """
    逐时刻记录：t, H, re_power 在前，含 t = 0 的初始行

    re_power 为结束于 t 的一步的中点端口功率 Re(u*y)，首行为 NaN；
    其后依次为中点时刻、累计供给能量与各输入输出分量。
    """
    def lead(values):
        return np.concatenate([[np.nan], values])

    frame = pd.DataFrame({
        "t": trajectory.times,
        "H": trajectory.hamiltonian,
        "re_power": lead(trajectory.port_power),
        "t_mid": lead(trajectory.mid_times),
        "supplied_energy": trajectory.supplied_energy,
    })
    for i in range(trajectory.inputs.shape[1]):
        frame[f"u{i + 1}_re"] = lead(trajectory.inputs[:, i].real)
        frame[f"u{i + 1}_im"] = lead(trajectory.inputs[:, i].imag)
        frame[f"y{i + 1}_re"] = lead(trajectory.outputs[:, i].real)
        frame[f"y{i + 1}_im"] = lead(trajectory.outputs[:, i].imag)
    return frame


def write_csv(path: str, frame: pd.DataFrame) -> dict:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False)
    logger.info(f"已写出 {target}（{len(frame)} 行）")
    return {"key": str(target), "content_type": "text/csv"}
