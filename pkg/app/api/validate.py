import json
import logging
import sys
import click
from app.api.deps import get_options, handle_errors, spec_source
from app.services.passivity_service import check_passivity
from app.services.validation_service import validate_spec
from app.utils.storage import write_json

# 配置日志
logger = logging.getLogger(__name__)


@click.command("validate", help="检查结构假设与阻抗无源性")
@click.option("--json", "json_path", default=None, help="JSON 报告路径（'-' 为标准输出）")
@handle_errors
@spec_source
def validate_command(spec_loader, json_path: str | None):
    """
    退出码：0 全部通过；1 结构假设或无源性不满足；2 解析/维度错误
    """
    options = get_options()
    spec = spec_loader()
    report = validate_spec(spec, options.tol)
    certificate = check_passivity(spec, options.psd_tol) if report.passed else None

    if json_path:
        payload = {"validation": report.model_dump(mode="json")}
        if certificate is not None:
            payload["passivity"] = certificate.model_dump(mode="json", exclude={"witness", "gram_matrix"})
        if json_path == "-":
            click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
        else:
            write_json(json_path, payload)
    if json_path != "-":
        click.echo(f"系统: {spec.name} (n={spec.n}, m={spec.m})")
        for check in report.checks:
            mark = "通过" if check.passed else "失败"
            click.echo(f"  [{mark}] {check.name}: {check.residual:.3e}（阈值 {check.threshold:.3e}）")
        if certificate is not None:
            mark = "通过" if certificate.passed else "失败"
            click.echo(f"  [{mark}] passivity ({certificate.mode}): λ_max = {certificate.max_eig:.3e}")
            if certificate.diagnostic:
                click.echo(f"  诊断: {certificate.diagnostic}")

    if not report.passed or not certificate.passed:
        sys.exit(1)
