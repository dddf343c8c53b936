import logging
import click
import pandas as pd
from config import settings
from app.api.deps import get_options, handle_errors, spec_source
from app.services.signal_service import parse_signal
from app.services.simulation_service import simulate, smooth_random_state
from app.utils.exceptions import SpecParseError
from app.utils.storage import trajectory_frame, write_csv

# 配置日志
logger = logging.getLogger(__name__)


def _initial_state(text: str, spec, nx: int, seed: int):
    if text == "zero":
        return None
    if text == "random":
        return smooth_random_state(spec, nx, seed)
    try:
        data = pd.read_csv(text, header=None, dtype=float).to_numpy()
    except (OSError, ValueError) as e:
        raise SpecParseError(f"无法读取初值文件：{e}")
    # 每行一个节点：n 个实部后接 n 个虚部
    if data.shape != (nx, 2 * spec.n):
        raise SpecParseError(f"初值文件形状应为 {(nx, 2 * spec.n)}，实际 {data.shape}")
    return data[:, :spec.n] + 1j * data[:, spec.n:]


@click.command("simulate", help="有限差分 + 隐式中点格式时域仿真")
@click.option("--t-end", type=float, required=True, help="终止时间")
@click.option("--nx", type=int, default=None, help="空间节点数")
@click.option("--dt", type=float, default=None, help="时间步长")
@click.option("--input", "input_signal", default="zero", help="zero | step:A | sine:A:f | file:path")
@click.option("--x0", "x0_source", default="zero", help="zero | random | CSV 文件")
@click.option("--csv", "csv_path", default=None, help="逐步记录 CSV")
@handle_errors
@spec_source
def simulate_command(spec_loader, t_end, nx, dt, input_signal, x0_source, csv_path):
    """退出码：0 完成；1 结构假设或无源性不满足；2 维度错误；5 边界闭合奇异"""
    options = get_options()
    spec = spec_loader()
    nx = nx or settings.SIM_NX
    u = parse_signal(input_signal, spec.m)
    x0 = _initial_state(x0_source, spec, nx, options.seed)
    trajectory = simulate(spec, x0, u, t_end, nx=nx, dt=dt, tol=options.tol, psd_tol=options.psd_tol)
    click.echo(f"系统: {spec.name}，{len(trajectory.times) - 1} 步，Δt = {trajectory.dt:.3e}，h = {trajectory.h:.3e}")
    click.echo(f"H(0) = {trajectory.hamiltonian[0]:.10g}，H(T) = {trajectory.hamiltonian[-1]:.10g}")
    click.echo(f"供给能量 = {trajectory.supplied_energy[-1]:.10g}，"
               f"耗散不等式最大违背 = {trajectory.dissipation_violation:.3e}")
    if csv_path:
        write_csv(csv_path, trajectory_frame(trajectory))
