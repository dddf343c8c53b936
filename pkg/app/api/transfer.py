import json
import logging
import click
from config import settings
from app.api.deps import get_options, handle_errors, spec_source
from app.services.boundary_service import wellposedness_verdict
from app.services.scan_service import vertical_line_scan
from app.utils.storage import scan_frame, write_csv, write_json

# 配置日志
logger = logging.getLogger(__name__)


@click.command("transfer", help="沿竖线 Re s = r 扫描闭环传递函数范数")
@click.option("--r", "r_values", type=float, multiple=True, help="竖线位置，可重复（默认 1, 10, 100）")
@click.option("--omega-max", type=float, default=None, help="第 0 层频率上限")
@click.option("--samples", type=int, default=None, help="第 0 层采样点数")
@click.option("--levels", type=int, default=None, help="加密层数")
@click.option("--oracle-every", type=int, default=0, help="每隔 k 个点用边值 oracle 核对（0 为关闭）")
@click.option("--csv", "csv_path", default=None, help="逐点结果 CSV")
@click.option("--json", "json_path", default=None, help="汇总 JSON")
@handle_errors
@spec_source
def transfer_command(spec_loader, r_values, omega_max, samples, levels, oracle_every, csv_path, json_path):
    options = get_options()
    spec = spec_loader()
    decomp = wellposedness_verdict(spec, options.tol, options.psd_tol)
    click.echo(f"系统: {spec.name}，适定性结论 {decomp.verdict.value}")

    scans = []
    for r in r_values or (1.0, 10.0, 100.0):
        scan = vertical_line_scan(spec, r, omega_max=omega_max, samples=samples, threads=options.threads,
                                  levels=levels, decomp=decomp, oracle_every=oracle_every)
        scans.append(scan)
        singular = sum(level.singular_points for level in scan.levels)
        line = f"r = {r:g}: sup‖G‖ ≈ {scan.sup_norm:.6g}，判定 {scan.assessment.value}"
        if singular:
            line += f"，奇异回路点 {singular}"
        if scan.max_oracle_residual is not None:
            line += f"，oracle 最大偏差 {scan.max_oracle_residual:.2e}"
        click.echo(line)

    if csv_path:
        write_csv(csv_path, scan_frame(scans))
    if json_path:
        write_json(json_path, {"spec": spec.name, "verdict": decomp.verdict.value,
                               "scans": [scan.summary() for scan in scans],
                               "oracle_tol": settings.ORACLE_TOL})
