import json
import logging
import sys
from pathlib import Path
import numpy as np
from pydantic import ValidationError
from app.models.spec import MATRIX_FIELDS, PhsSpec, matrix_to_pairs
from app.utils.exceptions import SpecParseError

# 配置日志
logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("name", "n", "m", "a", "b") + MATRIX_FIELDS


def _parse_entry(value, field: str, i: int, j: int) -> complex:
    # 复数以 [re, im] 或 "1+2j" 字符串表示；纯实数也接受
    if isinstance(value, bool):
        raise SpecParseError(f"字段 {field}[{i}][{j}] 不是数值")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            raise SpecParseError(f"字段 {field}[{i}][{j}] 不是合法复数：{value!r}")
    raise SpecParseError(f"字段 {field}[{i}][{j}] 应为 [re, im]，实际为 {value!r}")


def parse_matrix(value, field: str, cols: int | None = None) -> np.ndarray:
    """解析行优先的复矩阵；空数组返回 0×cols"""
    if not isinstance(value, list):
        raise SpecParseError(f"字段 {field} 应为二维数组")
    if len(value) == 0:
        return np.zeros((0, cols or 0), dtype=complex)
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise SpecParseError(f"字段 {field} 第 {i} 行不是数组")
        rows.append([_parse_entry(v, field, i, j) for j, v in enumerate(row)])
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise SpecParseError(f"字段 {field} 各行长度不一致：{sorted(widths)}")
    return np.array(rows, dtype=complex)


def parse_spec(data: dict) -> PhsSpec:
    if not isinstance(data, dict):
        raise SpecParseError("规格文件顶层应为 JSON 对象")
    missing = [f for f in REQUIRED_FIELDS if f not in data]
    if missing:
        raise SpecParseError(f"缺少字段：{', '.join(missing)}")
    for key in ("n", "m"):
        if isinstance(data[key], bool) or not isinstance(data[key], int):
            raise SpecParseError(f"字段 {key} 应为整数，实际为 {data[key]!r}")
    for key in ("a", "b"):
        if isinstance(data[key], bool) or not isinstance(data[key], (int, float)):
            raise SpecParseError(f"字段 {key} 应为数值，实际为 {data[key]!r}")
    n, m = data["n"], data["m"]
    a, b = float(data["a"]), float(data["b"])
    if n < 1 or m < 1:
        raise SpecParseError(f"n 与 m 必须为正整数（n={n}, m={m}）")

    matrices = {f: parse_matrix(data[f], f, cols=4 * n) for f in MATRIX_FIELDS}
    try:
        return PhsSpec(name=str(data["name"]), n=n, m=m, a=a, b=b, **matrices)
    except ValidationError as e:
        raise SpecParseError(f"规格字段无效：{e.errors()[0]['msg']}")


def parse_spec_json(text: str, source: str = "<input>") -> PhsSpec:
    """
    从 JSON 文本解析规格

    异常：
        SpecParseError: JSON 语法错误（带行列号）或字段缺失/格式错误
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"{source} 第{e.lineno}行第{e.colno}列 JSON 解析失败：{e.msg}")
    spec = parse_spec(data)
    logger.debug(f"已解析规格 {spec.name}（n={spec.n}, m={spec.m}）来自 {source}")
    return spec


def read_spec(path: str) -> PhsSpec:
    """path 为 '-' 时从标准输入读取"""
    if path == "-":
        return parse_spec_json(sys.stdin.read(), source="<stdin>")
    file = Path(path)
    if not file.is_file():
        raise SpecParseError(f"规格文件不存在：{path}")
    return parse_spec_json(file.read_text(encoding="utf-8"), source=str(file))


def spec_to_dict(spec: PhsSpec) -> dict:
    data = {"name": spec.name, "n": spec.n, "m": spec.m, "a": spec.a, "b": spec.b}
    for field in MATRIX_FIELDS:
        data[field] = matrix_to_pairs(getattr(spec, field))
    return data


def dump_spec_json(spec: PhsSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)
