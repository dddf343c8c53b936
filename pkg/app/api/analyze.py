import json
import logging
import sys
import click
from app.api.deps import get_options, handle_errors, spec_source
from app.models.decomposition import Verdict
from app.services.boundary_service import format_report, wellposedness_verdict
from app.utils.storage import write_json

# 配置日志
logger = logging.getLogger(__name__)

VERDICT_EXIT = {
    Verdict.WELL_POSED: 0,
    Verdict.WELL_POSED_SUFFICIENT: 0,
    Verdict.NOT_WELL_POSED: 3,
    Verdict.NUMERICALLY_MARGINAL: 4,
    Verdict.INCONCLUSIVE: 4,
}


@click.command("analyze", help="边界代数分解与适定性判定")
@click.option("--json", "json_path", default=None, help="机器可读报告路径（'-' 为标准输出）")
@handle_errors
@spec_source
def analyze_command(spec_loader, json_path: str | None):
    """退出码：0 适定；3 不适定；4 数值临界或无法判定；1/2 见 validate"""
    options = get_options()
    spec = spec_loader()
    decomp = wellposedness_verdict(spec, options.tol, options.psd_tol)
    payload = decomp.model_dump(mode="json")
    payload["ratio"] = decomp.ratio
    if json_path == "-":
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        click.echo(format_report(decomp))
        if json_path:
            write_json(json_path, payload)
    sys.exit(VERDICT_EXIT[decomp.verdict])
