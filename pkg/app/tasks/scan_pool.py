import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar
from config import settings

# 配置日志
logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: int | None = None) -> int:
    """None/0 回退到 settings.SCAN_THREADS，再回退到 CPU 数"""
    value = threads if threads else settings.SCAN_THREADS
    return value if value and value > 0 else (os.cpu_count() or 1)


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> List[R]:
    """
    并行计算 fn(item)，结果按输入顺序返回

    各点互不依赖，结果与线程数无关。
    """
    items = list(items)
    workers = resolve_threads(threads)
    if workers <= 1 or len(items) < 2 * workers:
        return [fn(item) for item in items]
    logger.debug(f"线程池计算 {len(items)} 个频率点（{workers} 线程）")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
