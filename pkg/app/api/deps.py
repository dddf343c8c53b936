import functools
import logging
import sys
import click
from pydantic import BaseModel
from config import settings
from app.models.spec import PhsSpec
from app.services.example_service import get_example
from app.utils.exceptions import AnalysisException, SpecParseError
from app.utils.spec_io import read_spec

# 配置日志
logger = logging.getLogger(__name__)


class RunOptions(BaseModel):
    """全局命令行选项（click 上下文对象）"""
    tol: float = settings.STRUCT_TOL
    psd_tol: float = settings.PSD_TOL  # --tol 同时覆盖无源性判定容差
    seed: int = settings.DEFAULT_SEED
    threads: int = settings.SCAN_THREADS


def get_options() -> RunOptions:
    ctx = click.get_current_context()
    obj = ctx.find_object(RunOptions)
    return obj if obj is not None else RunOptions()


def parse_params(values: tuple[str, ...]) -> dict[str, float]:
    params = {}
    for item in values:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise SpecParseError(f"--param 格式应为 name=value，实际 {item!r}")
        try:
            params[key] = float(raw)
        except ValueError:
            raise SpecParseError(f"--param {key} 的值不是数值：{raw!r}")
    return params


def spec_source(func):
    """为命令添加规格来源：位置参数 PATH（'-' 为标准输入）或 --example 加 --param"""
    @click.argument("path", required=False)
    @click.option("--example", "example", default=None, help="内置示例键名")
    @click.option("--param", "params", multiple=True, help="示例参数 name=value，可重复")
    @functools.wraps(func)
    def wrapper(path, example, params, **kwargs):
        return func(spec_loader=lambda: resolve_spec(path, example, params), **kwargs)
    return wrapper


def resolve_spec(path: str | None, example: str | None, params: tuple[str, ...]) -> PhsSpec:
    if example and path:
        raise SpecParseError("PATH 与 --example 只能二选一")
    if example:
        return get_example(example, parse_params(params))
    if params:
        raise SpecParseError("--param 仅与 --example 一起使用")
    if not path:
        raise SpecParseError("需要规格文件 PATH（'-' 表示标准输入）或 --example")
    return read_spec(path)


def handle_errors(func):
    """捕获 AnalysisException：记录日志、错误信息写到 stderr、按异常退出码退出"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except AnalysisException as e:
            logger.error(f"{type(e).__name__}: {e.detail}")
            click.echo(f"错误：{e.detail}", err=True)
            sys.exit(e.exit_code)
    return wrapper
