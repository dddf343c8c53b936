import json
import logging
import sys
import click
from config import settings
from app.api.deps import get_options, handle_errors, spec_source
from app.services.boundary_service import wellposedness_verdict
from app.services.oracle_service import oracle_residual
from app.utils.exceptions import SpecParseError

# 配置日志
logger = logging.getLogger(__name__)

DEFAULT_POINTS = ("1", "1+5j", "10-20j", "3+50j")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise SpecParseError(f"无法解析复数 s：{text!r}")


@click.command("oracle-compare", help="闭环公式与边值 oracle 在给定 s 处的交叉核对")
@click.option("--s", "points", multiple=True, help="复频率（如 2+3j），可重复")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
@spec_source
def oracle_command(spec_loader, points, as_json: bool):
    """退出码：0 所有点偏差 ≤ ORACLE_TOL；4 存在超差点"""
    options = get_options()
    spec = spec_loader()
    decomp = wellposedness_verdict(spec, options.tol, options.psd_tol)
    rows = []
    for text in points or DEFAULT_POINTS:
        s = _parse_complex(text)
        if s.real <= 0:
            raise SpecParseError(f"s 的实部必须为正：{text}")
        rows.append({"s": text, "residual": oracle_residual(spec, decomp, s)})
    worst = max(row["residual"] for row in rows)
    if as_json:
        click.echo(json.dumps({"spec": spec.name, "points": rows, "max_residual": worst}, indent=2))
    else:
        for row in rows:
            click.echo(f"s = {row['s']}: 相对偏差 {row['residual']:.3e}")
    if worst > settings.ORACLE_TOL:
        logger.warning(f"{spec.name}：oracle 偏差 {worst:.3e} 超过 {settings.ORACLE_TOL:.0e}")
        sys.exit(4)
