import logging
import click
from config import settings
from app.api.analyze import analyze_command
from app.api.deps import RunOptions
from app.api.examples import examples_group
from app.api.oracle import oracle_command
from app.api.simulate import simulate_command
from app.api.transfer import transfer_command
from app.api.validate import validate_command


@click.group(help="端口Hamilton系统边界控制适定性分析工具")
@click.option("--tol", type=float, default=None, help="结构校验相对容差")
@click.option("--seed", type=int, default=None, help="随机种子")
@click.option("--threads", type=int, default=None, help="频率扫描线程数（0 为 CPU 数）")
@click.option("--log-level", default=None, help="日志级别（默认 LOG_LEVEL 配置）")
@click.pass_context
def cli(ctx, tol, seed, threads, log_level):
    # 日志写到 stderr，stdout 只留给结果
    logging.basicConfig(
        level=(log_level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
    ctx.obj = RunOptions(
        tol=settings.STRUCT_TOL if tol is None else tol,
        psd_tol=settings.PSD_TOL if tol is None else tol,
        seed=settings.DEFAULT_SEED if seed is None else seed,
        threads=settings.SCAN_THREADS if threads is None else threads,
    )


# 注册子命令
cli.add_command(validate_command)
cli.add_command(analyze_command)
cli.add_command(transfer_command)
cli.add_command(oracle_command)
cli.add_command(simulate_command)
cli.add_command(examples_group)


if __name__ == "__main__":
    cli()
