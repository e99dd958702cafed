#!/usr/bin/env python3
"""
命令行工具
读入代数与模文件，运行各项计算并输出文本或机器可读报告

使用方法:
  python cli.py gldim data/a2.alg
  python cli.py domdim data/kx2.alg --cutoff 10
  python cli.py ext --i 1 data/a2.alg data/a2_s1.mod data/a2_s2.mod
  python cli.py check-ct --d 2 data/a3rad2.alg data/a3rad2_ct.mod
  python cli.py roundtrip --d 2 data/a3rad2.alg data/a3rad2_ct.mod

退出码: 0 计算完成（结论为否也算完成），1 输入错误，2 内部证书校验失败
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from file_formats import (
    LoadedAlgebra, load_algebra, load_module, load_module_dir, write_based_algebra, write_module,
)
from homology import (
    INJECTIVE, PROJECTIVE, dominant_dimension, dominant_dimension_via_injective, ext_dim,
    global_dimension, min_resolution, sweep_apt_equivalence, verify_apt_equivalence, verify_ext_iso,
)
from linalg import PrimeField
from modcat import Module, decompose, regular
from report_manager import (
    MACHINE, TEXT, ReportManager, checks_frame, matrix_frame, records_frame, resolution_frame,
    summands_frame,
)
from tilting import (
    LEFT, RIGHT, c_resolution, correspondence_roundtrip, endo_algebra, fingerprint, hom_table,
    is_cluster_tilting, is_d_auslander, recover_ct,
)
from utils import (
    AlgebraError, CertificateError, ConfigManager, DecompositionError, InputError, LoggerManager,
    NotClusterTiltingError, PreconditionError, TruncationError, config_manager,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CERTIFICATE = 2


@dataclass
class RunConfig:
    """命令行参数与配置文件合并后的运行参数"""
    prime: int
    cutoff: int
    seed: int
    budget: int
    bound: Optional[int]
    fmt: str

    def header(self) -> dict:
        return {"prime": self.prime, "cutoff": self.cutoff, "seed": self.seed}


def resolve_run_config(args, config: ConfigManager) -> RunConfig:
    """命令行优先，其次配置文件"""
    def pick(name: str, key: str, default):
        value = getattr(args, name, None)
        return value if value is not None else config.get(key, default)

    prime = int(pick('prime', 'field.prime', 101))
    try:
        PrimeField(prime)
    except ValueError as e:
        raise InputError(str(e)) from e
    cutoff = int(pick('cutoff', 'homology.cutoff', 20))
    if cutoff < 1:
        raise InputError(f"cutoff 必须 ≥ 1，得到 {cutoff}")
    fmt = pick('format', 'output.format', TEXT)
    if fmt not in (TEXT, MACHINE):
        raise InputError(f"未知输出格式: {fmt}")
    bound = pick('bound', 'algebra.bound', None)
    return RunConfig(
        prime=prime, cutoff=cutoff, seed=int(pick('seed', 'random.seed', 0)),
        budget=int(config.get('random.budget', 32)),
        bound=int(bound) if bound is not None else None, fmt=fmt,
    )


def parse_subset(text: str, num_vertices: int) -> List[int]:
    """'2,3' -> [1, 2]"""
    try:
        values = sorted({int(t) - 1 for t in text.split(',') if t.strip()})
    except ValueError:
        raise InputError(f"幂等元列表格式错误: {text!r}")
    if any(v < 0 or v >= num_vertices for v in values):
        raise InputError(f"幂等元下标 {text} 超出 1..{num_vertices}")
    return values


def parse_degrees(text: str) -> List[int]:
    try:
        values = [int(t) for t in text.split(',') if t.strip()]
    except ValueError:
        raise InputError(f"d 列表格式错误: {text!r}")
    if not values or any(d < 1 for d in values):
        raise InputError(f"d 必须 ≥ 1: {text!r}")
    return values


class Session:
    """单次命令的上下文：运行参数、报告生成器和已读入的代数"""

    def __init__(self, run: RunConfig):
        self.run = run
        self.reporter = ReportManager(run.fmt, run.header())

    def algebra(self, path: str) -> LoadedAlgebra:
        return load_algebra(path, self.run.prime, self.run.bound)

    def module(self, path: str, algebra: LoadedAlgebra) -> Module:
        return load_module(path, algebra)

    def emit(self, command: str, payload: dict, lines=(), tables=None):
        print(self.reporter.render(command, payload, lines, tables))


# ----------------------------------------------------------------------
# 子命令
# ----------------------------------------------------------------------

def cmd_ext(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    M, N = s.module(args.module, alg), s.module(args.other, alg)
    if args.i < 0:
        raise InputError(f"Ext 次数不能为负: {args.i}")
    n = ext_dim(args.i, M, N, cutoff=max(args.i, 1))
    s.emit("ext", {"i": args.i, "module": M.name, "other": N.name, "dim": n},
           [f"dim Ext^{args.i}({M.name}, {N.name}) = {n}"])
    return EXIT_OK


def cmd_gldim(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    result = global_dimension(alg.based, s.run.cutoff)
    s.emit("gldim", {"kind": result.kind, "value": result.value}, [f"gl.dim {result}"])
    return EXIT_OK


def cmd_domdim(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    result = dominant_dimension(alg.based, s.run.cutoff)
    via_injective = dominant_dimension_via_injective(alg.based, s.run.cutoff)
    if (result.kind, result.value) != (via_injective.kind, via_injective.value):
        logger.warning(f"两种控制维数计算不一致: {result} vs {via_injective}")
    s.emit("domdim",
           {"kind": result.kind, "value": result.value,
            "injective_kind": via_injective.kind, "injective_value": via_injective.value},
           [f"dom.dim {result}", f"dom.dim (injective resolution of A) {via_injective}"])
    return EXIT_OK


def cmd_resolve(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    M = s.module(args.module, alg)
    direction = PROJECTIVE if args.direction == 'proj' else INJECTIVE
    res = min_resolution(M, direction, s.run.cutoff)
    s.emit("resolve",
           {"module": M.name, "direction": direction, "term_dims": res.term_dims(),
            "multiplicities": res.multiplicities, "truncated": res.truncated},
           [f"{M.name} 的极小{'投射' if direction == PROJECTIVE else '内射'}分解，长度 "
            f"{'>= ' + str(s.run.cutoff) if res.truncated else res.length}"],
           {"terms": resolution_frame(res)})
    return EXIT_OK


def cmd_decompose(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    M = s.module(args.module, alg)
    parts = decompose(M, s.run.seed, s.run.budget)
    s.emit("decompose",
           {"module": M.name, "summands": [{"dims": list(P.dims), "multiplicity": m} for P, m in parts]},
           [f"{M.name} 有 {sum(m for _, m in parts)} 个不可分解直和项（{len(parts)} 个同构类）"],
           {"summands": summands_frame([P for P, _ in parts], [m for _, m in parts])})
    return EXIT_OK


def cmd_fingerprint(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    fp = fingerprint(alg.based)
    s.emit("fingerprint", {"k": fp.k, "cartan": fp.cartan, "ext1": fp.ext1}, [f"fingerprint: {fp}"])
    return EXIT_OK


def cmd_check_ct(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    X = s.module(args.module, alg)
    candidates = None
    mode = "criterion"
    if args.indecomposables:
        candidates = load_module_dir(args.indecomposables, alg)
        mode = "enumerated"
    verdict = is_cluster_tilting(X, args.d, mode, candidates, s.run.cutoff, s.run.seed)
    s.emit("check-ct",
           {"d": args.d, "mode": mode, "verdict": verdict.decision.value,
            "checks": {k: v.value for k, v in verdict.checks.items()}, "evidence": verdict.evidence},
           [f"{args.d}-cluster-tilting ({mode}): {verdict.decision.value}"]
           + [f"  {line}" for line in verdict.evidence],
           {"checks": checks_frame(verdict.checks)})
    return EXIT_OK


def cmd_endo(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    X = s.module(args.module, alg)
    endo = endo_algebra(X, s.run.seed, s.run.budget)
    if args.out:
        write_based_algebra(endo.algebra, args.out)
    names = [f"X{i + 1}" for i in range(len(endo.summands))]
    table = hom_table(endo.summands)
    s.emit("endo",
           {"dim": endo.algebra.dim, "summand_dims": [list(S.dims) for S in endo.summands],
            "hom_table": table, "out": args.out},
           [f"End(X) 维数 {endo.algebra.dim}，{len(endo.summands)} 个直和项"]
           + ([f"已写入 {args.out}"] if args.out else []),
           {"summands": summands_frame(endo.summands), "dim Hom(Xi, Xj)": matrix_frame(table, names, names)})
    return EXIT_OK


def cmd_check_auslander(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    verdict = is_d_auslander(alg.based, args.d, s.run.cutoff)
    s.emit("check-auslander",
           {"d": args.d, "verdict": verdict.verdict.value,
            "gl_dim": {"kind": verdict.gl_dim.kind, "value": verdict.gl_dim.value},
            "dom_dim": {"kind": verdict.dom_dim.kind, "value": verdict.dom_dim.value}},
           [f"gl.dim {verdict.gl_dim}", f"dom.dim {verdict.dom_dim}",
            f"{args.d}-Auslander: {verdict.verdict.value}"])
    return EXIT_OK


def cmd_recover_ct(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    rec = recover_ct(alg.based, args.d, s.run.cutoff, s.run.seed)
    if args.out_dir:
        corner_path = os.path.join(args.out_dir, "corner.balg")
        write_based_algebra(rec.corner, corner_path)
        for X in rec.summands:
            write_module(X, os.path.join(args.out_dir, f"{X.name.replace(chr(39), 'p')}.mod"), "corner.balg")
    fp = fingerprint(rec.corner)
    s.emit("recover-ct",
           {"d": args.d, "e": [i + 1 for i in rec.subset], "corner_dim": rec.corner.dim,
            "summand_dims": [list(X.dims) for X in rec.summands],
            "certificates": {k: v.value for k, v in rec.certificates.items()},
            "fingerprint": {"k": fp.k, "cartan": fp.cartan, "ext1": fp.ext1}},
           [f"e = {{{', '.join(str(i + 1) for i in rec.subset)}}}，Λ′ 维数 {rec.corner.dim}",
            f"X′ 有 {len(rec.summands)} 个直和项，总维数 {rec.module.dim}",
            f"Λ′ fingerprint: {fp}"],
           {"X′": summands_frame(rec.summands), "certificates": checks_frame(rec.certificates)})
    return EXIT_OK


def cmd_roundtrip(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    X = s.module(args.module, alg)
    report = correspondence_roundtrip(X, args.d, s.run.seed, s.run.cutoff, s.run.budget)
    s.emit("roundtrip",
           {"d": args.d, "passed": report.passed, "gamma_dim": report.gamma_dim,
            "summand_count": report.summand_count,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.checks]},
           [report.summary],
           {"checks": records_frame([{"check": c.name, "passed": c.passed, "detail": c.detail}
                                     for c in report.checks])})
    return EXIT_OK


def cmd_c_resolve(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    X = s.module(args.module, alg)
    M = s.module(args.target, alg)
    endo = endo_algebra(X, s.run.seed, s.run.budget)
    direction = RIGHT if args.direction == 'right' else LEFT
    try:
        res = c_resolution(endo, M, args.d, direction)
    except NotClusterTiltingError as e:
        witness = e.witness
        s.emit("c-resolve",
               {"d": args.d, "direction": direction, "module": M.name, "resolved": False,
                "witness_dims": list(witness.dims) if witness is not None else None},
               [f"not {args.d}-cluster-tilting at {M.name}", f"  {e}"])
        return EXIT_OK
    rows = [{"term": f"C_{k}", "dims": ' '.join(str(x) for x in C.dims), "dim": C.dim,
             "summands": ' ⊕ '.join(f"X{i + 1}" for i in idx) or '0'}
            for k, (C, idx) in enumerate(zip(res.terms, res.term_indices))]
    s.emit("c-resolve",
           {"d": args.d, "direction": direction, "module": M.name, "resolved": True,
            "length": res.length, "term_dims": [C.dim for C in res.terms],
            "term_indices": [[i + 1 for i in idx] for idx in res.term_indices],
            "certificates": res.certificates},
           [f"{M.name} 的{direction} c-分解，长度 {res.length}"],
           {"terms": records_frame(rows), "certificates": checks_frame(res.certificates)})
    return EXIT_OK


def cmd_verify_apt(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    M = s.module(args.module, alg)
    subset = parse_subset(args.e, alg.based.num_vertices)
    report = verify_apt_equivalence(alg.based, subset, M, args.d, s.run.cutoff)
    s.emit("verify-apt",
           {"d": args.d, "e": [i + 1 for i in subset], "module": M.name,
            "projective_condition": report.projective_condition, "ext_condition": report.ext_condition,
            "injective_condition": report.injective_condition, "agree": report.agree,
            "failures": [[i, name] for i, name in report.failures]},
           [f"(i) 投射分解前 {args.d} 项在 add(Ae) 中: {report.projective_condition}",
            f"(ii) Ext^i(M, 单模与内射模) = 0, 0 ≤ i < {args.d}: {report.ext_condition}",
            f"(iii) Ext^i(M, 内射模) = 0, 0 ≤ i < {args.d}: {report.injective_condition}",
            f"agree: {report.agree}"])
    return EXIT_OK


def cmd_verify_extiso(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    Y = s.module(args.other, alg)
    X = s.module(args.x, alg) if args.x else regular(alg.based)
    subset = parse_subset(args.e, alg.based.num_vertices)
    report = verify_ext_iso(alg.based, subset, X, Y, args.d, s.run.cutoff)
    rows = [{"i": i, "dim Ext^i(X,Y)": a, "dim Ext^i(GX,GY)": b} for i, a, b in report.rows]
    s.emit("verify-extiso",
           {"d": args.d, "e": [i + 1 for i in subset], "outcome": report.outcome,
            "rows": [list(r) for r in report.rows]},
           [f"outcome: {report.outcome}"],
           {"Ext": records_frame(rows)} if rows else None)
    return EXIT_OK


def cmd_sweep_apt(args, s: Session) -> int:
    alg = s.algebra(args.algebra)
    ds = parse_degrees(args.d)
    reports = sweep_apt_equivalence(alg.based, ds, s.run.cutoff, progress=s.run.fmt == TEXT)
    bad = [r for r in reports if not r.agree]
    rows = [{"e": ','.join(str(v + 1) for v in r.subset), "M": r.module, "d": r.d,
             "(i)": r.projective_condition, "(ii)": r.ext_condition, "(iii)": r.injective_condition}
            for r in bad]
    s.emit("sweep-apt",
           {"d": ds, "instances": len(reports), "disagreements": len(bad),
            "failures": [{"e": [v + 1 for v in r.subset], "module": r.module, "d": r.d} for r in bad]},
           [f"{len(reports)} 个实例，不一致 {len(bad)} 个"],
           {"disagreements": records_frame(rows)} if rows else None)
    return EXIT_OK


COMMANDS = {
    'ext': cmd_ext,
    'gldim': cmd_gldim,
    'domdim': cmd_domdim,
    'resolve': cmd_resolve,
    'decompose': cmd_decompose,
    'fingerprint': cmd_fingerprint,
    'check-ct': cmd_check_ct,
    'endo': cmd_endo,
    'check-auslander': cmd_check_auslander,
    'recover-ct': cmd_recover_ct,
    'roundtrip': cmd_roundtrip,
    'c-resolve': cmd_c_resolve,
    'verify-apt': cmd_verify_apt,
    'verify-extiso': cmd_verify_extiso,
    'sweep-apt': cmd_sweep_apt,
}


def _common_options() -> argparse.ArgumentParser:
    """全局选项，既可写在子命令之前也可写在之后"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--prime', type=int, default=argparse.SUPPRESS, help='素数域的模数（默认: 101）')
    common.add_argument('--cutoff', type=int, default=argparse.SUPPRESS, help='分解的截断长度（默认: 20）')
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='随机种子（默认: 0）')
    common.add_argument('--bound', type=int, default=argparse.SUPPRESS, help='路代数的幂零安全界')
    common.add_argument('--format', choices=[TEXT, MACHINE], default=argparse.SUPPRESS,
                        help='输出格式（默认: text）')
    common.add_argument('--config', default=argparse.SUPPRESS, help='配置文件路径')
    common.add_argument('--log-level', default=argparse.SUPPRESS,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='日志级别')
    return common


def create_parser():
    """创建命令行参数解析器"""
    common = _common_options()
    parser = argparse.ArgumentParser(
        description='有限维代数的同调计算与高阶 Auslander 对应',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
使用示例:
  python cli.py gldim data/a2.alg
  python cli.py domdim data/kx2.alg --cutoff 10
  python cli.py endo data/a3rad2.alg data/a3rad2_ct.mod --out out/gamma.balg
  python cli.py check-auslander --d 2 out/gamma.balg
  python cli.py roundtrip --d 2 data/a3rad2.alg data/a3rad2_ct.mod --format machine
        """
    )
    subparsers = parser.add_subparsers(dest='command', help='可用命令')

    def sub(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help_text, parents=[common])

    p = sub('ext', '计算 dim Ext^i(M, N)')
    p.add_argument('--i', type=int, required=True, help='Ext 次数')
    p.add_argument('algebra')
    p.add_argument('module')
    p.add_argument('other')

    for name, text in (('gldim', '整体维数'), ('domdim', '控制维数'), ('fingerprint', 'Morita 指纹')):
        sub(name, text).add_argument('algebra')

    p = sub('resolve', '极小投射或内射分解')
    p.add_argument('--direction', choices=['proj', 'inj'], default='proj')
    p.add_argument('algebra')
    p.add_argument('module')

    p = sub('decompose', '不可分解直和分解')
    p.add_argument('algebra')
    p.add_argument('module')

    p = sub('check-ct', 'd-丛倾斜判定')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--indecomposables', help='不可分解模目录，给出时使用 enumerated 模式')
    p.add_argument('algebra')
    p.add_argument('module')

    p = sub('endo', '计算自同态代数 End(X)')
    p.add_argument('--out', help='写出带基代数文件')
    p.add_argument('algebra')
    p.add_argument('module')

    p = sub('check-auslander', 'd-Auslander 判定')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('algebra')

    p = sub('recover-ct', '由 d-Auslander 代数恢复 (Λ′, X′)')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--out-dir', help='写出角代数与 X′ 的目录')
    p.add_argument('algebra')

    p = sub('roundtrip', '对应的往返验证')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('algebra')
    p.add_argument('module')

    p = sub('c-resolve', 'add(X)-分解')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--direction', choices=['right', 'left'], default='right')
    p.add_argument('algebra')
    p.add_argument('module', help='X')
    p.add_argument('target', help='M')

    p = sub('verify-apt', '比较 P_{d-1} 与 Ext 消失条件')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--e', required=True, help='幂等元下标，逗号分隔，从 1 开始')
    p.add_argument('algebra')
    p.add_argument('module')

    p = sub('verify-extiso', '比较 Ext_Γ(X, Y) 与 Ext_eΓe(GX, GY)')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--e', required=True, help='幂等元下标，逗号分隔，从 1 开始')
    p.add_argument('--x', help='X 的模文件（默认: 正则模）')
    p.add_argument('algebra')
    p.add_argument('other', help='Y')

    p = sub('sweep-apt', '对全部单模与幂等元子集验证等价性')
    p.add_argument('--d', default='1,2,3', help='逗号分隔的 d 值（默认: 1,2,3）')
    p.add_argument('algebra')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数 - 处理命令行参数并执行相应操作，返回退出码"""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    config_path = getattr(args, 'config', None)
    try:
        config = ConfigManager(config_path, required=True) if config_path else config_manager
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    LoggerManager.setup_logger(config, getattr(args, 'log_level', None))

    try:
        run = resolve_run_config(args, config)
        return COMMANDS[args.command](args, Session(run))
    except CertificateError as e:
        logger.error(f"内部证书校验失败: {e}")
        print(f"certificate failure: {e}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except (InputError, AlgebraError, PreconditionError, DecompositionError, TruncationError,
            NotClusterTiltingError) as e:
        logger.error(f"执行命令 {args.command} 时出错: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
