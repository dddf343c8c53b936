import logging
import click
from app.api.deps import handle_errors, parse_params
from app.services.example_service import get_example, list_examples
from app.utils.spec_io import dump_spec_json

# 配置日志
logger = logging.getLogger(__name__)


@click.group("examples", help="内置示例")
def examples_group():
    pass


@examples_group.command("list")
def list_command():
    for entry in list_examples():
        params = ", ".join(f"{k}={v:g}" for k, v in entry.defaults.items())
        click.echo(f"{entry.key:<16} {entry.expected_verdict.value:<20} {entry.title}（{params}）")


@examples_group.command("show")
@click.argument("key")
@click.option("--param", "params", multiple=True, help="示例参数 name=value，可重复")
@handle_errors
def show_command(key: str, params):
    """打印示例的规格 JSON（可通过管道交给其他命令）"""
    click.echo(dump_spec_json(get_example(key, parse_params(params))))
