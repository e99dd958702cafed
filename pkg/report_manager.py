"""
报告输出模块
把各命令的计算结果整理成文本报告（pandas 表格 + tabulate）或机器可读的 JSON
"""

import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tabulate import tabulate

from homology import Resolution
from modcat import Module

logger = logging.getLogger(__name__)

TEXT = "text"
MACHINE = "machine"


def _plain(value: Any) -> Any:
    """numpy 与枚举值转为 JSON 原生类型"""
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, 'value') and not isinstance(value, (int, float, str)):
        return value.value
    raise TypeError(f"无法序列化 {type(value).__name__}")


class ReportManager:
    """命令报告生成器"""

    def __init__(self, fmt: str = TEXT, header: Optional[Dict[str, Any]] = None):
        """
        初始化报告生成器

        Args:
            fmt: text 或 machine
            header: 每份报告都带上的运行参数（prime、cutoff、seed）
        """
        if fmt not in (TEXT, MACHINE):
            raise ValueError(f"未知输出格式: {fmt}")
        self.fmt = fmt
        self.header = dict(header or {})

    def render(self, command: str, payload: Dict[str, Any], lines: Sequence[str] = (),
               tables: Optional[Dict[str, pd.DataFrame]] = None) -> str:
        """
        生成报告

        Args:
            command: 子命令名
            payload: 机器输出的键值（文本输出不使用）
            lines: 文本输出的结论行
            tables: 文本输出附带的表格，标题 -> DataFrame
        """
        if self.fmt == MACHINE:
            record = {"command": command, **self.header, **payload}
            return json.dumps(record, sort_keys=True, ensure_ascii=False, default=_plain)

        params = ' '.join(f"{k}={v}" for k, v in self.header.items())
        out = ['=' * 60, f"{command}  ({params})", '=' * 60]
        out.extend(lines)
        for title, df in (tables or {}).items():
            out.append('')
            out.append(title)
            out.append(format_table(df))
        return '\n'.join(out)


def format_table(df: pd.DataFrame) -> str:
    if df.empty:
        return '(空)'
    return tabulate(df, headers='keys', tablefmt='simple', showindex=False)


# ----------------------------------------------------------------------
# 常用表格
# ----------------------------------------------------------------------

def resolution_frame(res: Resolution) -> pd.DataFrame:
    """分解各项的维数与不可分解项重数"""
    rows = []
    for i, (term, mults) in enumerate(zip(res.terms, res.multiplicities)):
        summands = ' ⊕ '.join(
            f"{'P' if res.direction == 'projective' else 'I'}{v + 1}" + (f"^{m}" if m > 1 else '')
            for v, m in enumerate(mults) if m
        )
        rows.append({"degree": i, "dim": term.dim, "summands": summands or '0'})
    return pd.DataFrame(rows, columns=["degree", "dim", "summands"])


def matrix_frame(matrix, row_labels: Sequence[str], col_labels: Sequence[str]) -> pd.DataFrame:
    df = pd.DataFrame(np.asarray(matrix, dtype=np.int64), columns=list(col_labels))
    df.insert(0, '', list(row_labels))
    return df


def summands_frame(summands: Sequence[Module], multiplicities: Optional[Sequence[int]] = None) -> pd.DataFrame:
    rows = []
    for k, M in enumerate(summands):
        row = {"summand": M.name or f"#{k + 1}", "dims": ' '.join(str(d) for d in M.dims), "dim": M.dim}
        if multiplicities is not None:
            row["multiplicity"] = multiplicities[k]
        rows.append(row)
    return pd.DataFrame(rows)


def checks_frame(checks: Dict[str, Any]) -> pd.DataFrame:
    rows = [{"check": name, "result": _plain(v) if not isinstance(v, (bool, str)) else v}
            for name, v in checks.items()]
    return pd.DataFrame(rows, columns=["check", "result"])


def records_frame(records: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(records)
