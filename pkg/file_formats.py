"""
文件格式模块
负责代数文件、带基代数文件与模文件的解析和写出

代数文件（.alg）:
    field 101
    vertices 3
    arrow a 1 2
    arrow b 2 3
    relation a*b
    bound 8            # 可选

带基代数文件（.balg，由 endo 命令写出）:
    field 101
    basis e1 e2 g1_2_1
    idem e1 e2
    mult e1 g1_2_1 = [0, 0, 1]

模文件（.mod）:
    algebra a3rad2.alg # 相对模文件所在目录
    dims 1 1 0
    map a = [[1]]      # 路代数: 目标维数 × 起点维数
    act g1_2_1 = [[0, 0], [1, 0]]   # 带基代数: 基元素的作用矩阵

顶点编号从 1 开始，# 之后为注释
"""

import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from algebra import Arrow, BasedAlgebra, Quiver, QuiverAlgebra, Relation, build_quiver_algebra
from linalg import PrimeField
from modcat import Module, representation
from utils import AlgebraError, InputError

logger = logging.getLogger(__name__)

Line = Tuple[int, str]


@dataclass
class LoadedAlgebra:
    """读入的代数；由箭图给出时保留 quiver_algebra 以便按箭头读模"""
    based: BasedAlgebra
    quiver_algebra: Optional[QuiverAlgebra]
    path: str

    @property
    def field(self) -> PrimeField:
        return self.based.field


def _clean_lines(text: str) -> List[Line]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append((lineno, line))
    return lines


def _read(path: str) -> str:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise InputError(f"无法读取文件 {path}: {e}") from e


def _fail(source: str, lineno: int, message: str) -> InputError:
    return InputError(f"{source}:{lineno}: {message}")


def _int(source: str, lineno: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise _fail(source, lineno, f"{what} 应为整数，得到 {token!r}")


def _literal(source: str, lineno: int, text: str):
    """矩阵和向量按 YAML 流式列表解析"""
    try:
        value = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise _fail(source, lineno, f"无法解析 {text!r}: {e}")
    if not isinstance(value, list):
        raise _fail(source, lineno, f"需要方括号列表，得到 {text!r}")
    return value


def _assignment(source: str, lineno: int, rest: str) -> Tuple[List[str], str]:
    if '=' not in rest:
        raise _fail(source, lineno, "缺少 '='")
    head, value = rest.split('=', 1)
    return head.split(), value.strip()


def _field_of(lines: Sequence[Line], source: str, prime: Optional[int]) -> PrimeField:
    declared = [(n, line.split()) for n, line in lines if line.split()[0] == 'field']
    if not declared:
        return PrimeField(prime or 101)
    lineno, tokens = declared[-1]
    if len(tokens) != 2:
        raise _fail(source, lineno, "用法: field <p>")
    p = _int(source, lineno, tokens[1], "模数")
    try:
        return PrimeField(p)
    except ValueError as e:
        raise _fail(source, lineno, str(e))


# ----------------------------------------------------------------------
# 代数
# ----------------------------------------------------------------------

def parse_relation(text: str, source: str = "<string>", lineno: int = 0) -> Relation:
    """
    解析关系，如 "a*b"、"a*b - c*d"、"2*a*b + 3*c*d"

    Returns:
        Relation，路径从左到右书写
    """
    terms = []
    expr = text.replace(' ', '').replace('-', '+-')
    for chunk in expr.split('+'):
        if not chunk:
            continue
        sign = 1
        if chunk.startswith('-'):
            sign, chunk = -1, chunk[1:]
        factors = [f for f in chunk.split('*') if f]
        coeff = 1
        if factors and factors[0].isdigit():
            coeff = int(factors.pop(0))
        if not factors:
            raise _fail(source, lineno, f"关系项 {chunk!r} 缺少路径")
        terms.append((sign * coeff, tuple(factors)))
    if not terms:
        raise _fail(source, lineno, "空关系")
    return Relation(terms)


def parse_algebra(text: str, source: str = "<string>", prime: Optional[int] = None,
                  bound: Optional[int] = None) -> QuiverAlgebra:
    """
    解析箭图代数文件

    Args:
        text: 文件内容
        source: 出错信息中使用的来源名
        prime: 文件未声明 field 时使用的模数
        bound: 覆盖文件中的 bound
    """
    lines = _clean_lines(text)
    field = _field_of(lines, source, prime)
    num_vertices = None
    arrows: List[Arrow] = []
    relations: List[Relation] = []
    file_bound = None
    for lineno, line in lines:
        keyword, _, rest = line.partition(' ')
        tokens = rest.split()
        if keyword == 'field':
            continue
        if keyword == 'vertices':
            if len(tokens) != 1:
                raise _fail(source, lineno, "用法: vertices <n>")
            num_vertices = _int(source, lineno, tokens[0], "顶点数")
        elif keyword == 'arrow':
            if len(tokens) != 3:
                raise _fail(source, lineno, "用法: arrow <name> <source> <target>")
            src = _int(source, lineno, tokens[1], "起点")
            tgt = _int(source, lineno, tokens[2], "终点")
            arrows.append(Arrow(tokens[0], src - 1, tgt - 1))
        elif keyword == 'relation':
            relations.append(parse_relation(rest, source, lineno))
        elif keyword == 'bound':
            file_bound = _int(source, lineno, rest.strip(), "bound")
        else:
            raise _fail(source, lineno, f"未知关键字 {keyword!r}")
    if num_vertices is None:
        raise InputError(f"{source}: 缺少 vertices 行")
    try:
        quiver = Quiver(num_vertices, arrows)
    except AlgebraError as e:
        raise InputError(f"{source}: {e}") from e
    qa = build_quiver_algebra(quiver, relations, field, bound if bound is not None else file_bound)
    logger.info(f"读入代数 {source}: {num_vertices} 个顶点，{len(arrows)} 条箭头，维数 {qa.dim}")
    return qa


def parse_based_algebra(text: str, source: str = "<string>", prime: Optional[int] = None) -> BasedAlgebra:
    """解析带基代数文件，未给出的乘积为零"""
    lines = _clean_lines(text)
    field = _field_of(lines, source, prime)
    labels: Optional[List[str]] = None
    idem_labels: List[str] = []
    products: List[Tuple[int, str, str, list]] = []
    for lineno, line in lines:
        keyword, _, rest = line.partition(' ')
        if keyword == 'field':
            continue
        if keyword == 'basis':
            labels = rest.split()
        elif keyword == 'idem':
            idem_labels = rest.split()
        elif keyword == 'mult':
            head, value = _assignment(source, lineno, rest)
            if len(head) != 2:
                raise _fail(source, lineno, "用法: mult <label> <label> = [向量]")
            products.append((lineno, head[0], head[1], _literal(source, lineno, value)))
        else:
            raise _fail(source, lineno, f"未知关键字 {keyword!r}")
    if not labels:
        raise InputError(f"{source}: 缺少 basis 行")
    if len(set(labels)) != len(labels):
        raise InputError(f"{source}: 基标签重复")
    index = {label: k for k, label in enumerate(labels)}
    n = len(labels)

    def lookup(lineno: int, label: str) -> int:
        if label not in index:
            raise _fail(source, lineno, f"未知基标签 {label!r}")
        return index[label]

    structure = np.zeros((n, n, n), dtype=np.int64)
    for lineno, a, b, vec in products:
        if len(vec) != n:
            raise _fail(source, lineno, f"乘积向量长度 {len(vec)}，应为 {n}")
        structure[lookup(lineno, a), lookup(lineno, b)] = np.mod(np.array(vec, dtype=np.int64), field.p)
    if not idem_labels:
        raise InputError(f"{source}: 缺少 idem 行")
    idempotents = np.zeros((len(idem_labels), n), dtype=np.int64)
    for r, label in enumerate(idem_labels):
        idempotents[r, lookup(0, label)] = 1
    A = BasedAlgebra(field, labels, structure, idempotents).validate()
    logger.info(f"读入带基代数 {source}: 维数 {n}，{len(idem_labels)} 个原始幂等元")
    return A


def _is_based_format(lines: Sequence[Line]) -> bool:
    return any(line.split()[0] == 'basis' for _, line in lines)


def load_algebra(path: str, prime: Optional[int] = None, bound: Optional[int] = None) -> LoadedAlgebra:
    """按内容自动识别箭图代数或带基代数"""
    text = _read(path)
    if _is_based_format(_clean_lines(text)):
        return LoadedAlgebra(parse_based_algebra(text, path, prime), None, path)
    qa = parse_algebra(text, path, prime, bound)
    return LoadedAlgebra(qa.to_based(), qa, path)


def format_based_algebra(A: BasedAlgebra) -> str:
    """写出带基代数，只写非零乘积"""
    out = [f"field {A.field.p}", f"basis {' '.join(A.labels)}"]
    idem = []
    for e in A.idempotents:
        nz = np.nonzero(e)[0]
        if nz.size != 1 or e[nz[0]] != 1:
            raise AlgebraError("只能写出幂等元为基元素的带基代数")
        idem.append(A.labels[nz[0]])
    out.append(f"idem {' '.join(idem)}")
    for a in range(A.dim):
        for b in range(A.dim):
            vec = A.structure[a, b]
            if np.any(vec):
                out.append(f"mult {A.labels[a]} {A.labels[b]} = {[int(x) for x in vec]}")
    return '\n'.join(out) + '\n'


def write_based_algebra(A: BasedAlgebra, path: str):
    out_dir = os.path.dirname(path)
    if out_dir and not os.path.exists(out_dir):
        os.makedirs(out_dir)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_based_algebra(A))
    logger.info(f"带基代数已写入 {path}")


# ----------------------------------------------------------------------
# 模
# ----------------------------------------------------------------------

def _matrix(source: str, lineno: int, value, shape: Tuple[int, int], field: PrimeField) -> np.ndarray:
    rows, cols = shape
    if rows == 0 or cols == 0:
        return field.zeros(rows, cols)
    arr = np.array(value, dtype=np.int64)
    if arr.shape != shape:
        raise _fail(source, lineno, f"矩阵形状 {arr.shape}，应为 {shape}")
    return np.mod(arr, field.p)


def parse_module(text: str, algebra: LoadedAlgebra, source: str = "<string>", name: str = "") -> Module:
    """
    解析模文件

    路代数上用 map 行给出箭头的线性映射；带基代数上用 act 行给出基元素的作用，
    未给出的幂等元作用为对应分块上的恒等，其余为零
    """
    A = algebra.based
    dims = None
    maps: Dict[str, Tuple[int, object]] = {}
    acts: Dict[str, Tuple[int, object]] = {}
    for lineno, line in _clean_lines(text):
        keyword, _, rest = line.partition(' ')
        if keyword == 'algebra':
            continue
        if keyword == 'dims':
            dims = [_int(source, lineno, t, "维数") for t in rest.split()]
        elif keyword in ('map', 'act'):
            head, value = _assignment(source, lineno, rest)
            if len(head) != 1:
                raise _fail(source, lineno, f"用法: {keyword} <label> = [[...]]")
            target = maps if keyword == 'map' else acts
            target[head[0]] = (lineno, _literal(source, lineno, value))
        else:
            raise _fail(source, lineno, f"未知关键字 {keyword!r}")
    if dims is None:
        raise InputError(f"{source}: 缺少 dims 行")
    if len(dims) != A.num_vertices or any(x < 0 for x in dims):
        raise InputError(f"{source}: 维数向量 {dims} 与 {A.num_vertices} 个顶点不符")
    name = name or os.path.splitext(os.path.basename(source))[0]

    if maps:
        qa = algebra.quiver_algebra
        if qa is None:
            raise InputError(f"{source}: 带基代数上的模需用 act 行")
        matrices = {}
        for arrow, (lineno, value) in maps.items():
            try:
                a = qa.quiver.arrow(arrow)
            except AlgebraError as e:
                raise _fail(source, lineno, str(e))
            matrices[arrow] = _matrix(source, lineno, value, (dims[a.target], dims[a.source]), A.field)
        if acts:
            raise InputError(f"{source}: map 与 act 不能混用")
        return representation(qa, A, dims, matrices, name)

    total = sum(dims)
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    index = {label: k for k, label in enumerate(A.labels)}
    action = np.zeros((A.dim, total, total), dtype=np.int64)
    for v, e in enumerate(A.idempotents):
        k = int(np.nonzero(e)[0][0])
        action[k, offsets[v]:offsets[v + 1], offsets[v]:offsets[v + 1]] = np.eye(dims[v], dtype=np.int64)
    for label, (lineno, value) in acts.items():
        if label not in index:
            raise _fail(source, lineno, f"未知基标签 {label!r}")
        action[index[label]] = _matrix(source, lineno, value, (total, total), A.field)
    try:
        module = Module(A, action, name)
    except AlgebraError as e:
        raise InputError(f"{source}: {e}") from e
    if not module.check_action():
        raise AlgebraError(f"模 {name} 的作用不满足代数的乘法关系")
    return module


def _algebra_reference(text: str, path: str) -> Optional[str]:
    for lineno, line in _clean_lines(text):
        keyword, _, rest = line.partition(' ')
        if keyword == 'algebra':
            return os.path.join(os.path.dirname(path), rest.strip())
    return None


def load_module(path: str, algebra: Optional[LoadedAlgebra] = None, prime: Optional[int] = None,
                bound: Optional[int] = None) -> Module:
    """
    读入模文件

    Args:
        path: 模文件路径
        algebra: 已读入的代数；为空时使用文件中的 algebra 行
    """
    text = _read(path)
    if algebra is None:
        ref = _algebra_reference(text, path)
        if ref is None:
            raise InputError(f"{path}: 未给出代数，且文件中没有 algebra 行")
        algebra = load_algebra(ref, prime, bound)
    module = parse_module(text, algebra, path)
    logger.info(f"读入模 {module.name}: 维数向量 {module.dims}")
    return module


def load_module_dir(directory: str, algebra: LoadedAlgebra) -> List[Module]:
    """读入目录下全部 .mod 文件（按文件名排序）"""
    if not os.path.isdir(directory):
        raise InputError(f"目录不存在: {directory}")
    files = sorted(f for f in os.listdir(directory) if f.endswith('.mod'))
    if not files:
        raise InputError(f"目录 {directory} 中没有 .mod 文件")
    return [load_module(os.path.join(directory, f), algebra) for f in files]


def format_module(M: Module, algebra_path: Optional[str] = None) -> str:
    """按 act 形式写出模，幂等元与零作用省略"""
    A = M.algebra
    out = []
    if algebra_path:
        out.append(f"algebra {algebra_path}")
    out.append(f"dims {' '.join(str(d) for d in M.dims)}")
    idem_positions = {int(np.nonzero(e)[0][0]) for e in A.idempotents}
    for k, label in enumerate(A.labels):
        if k in idem_positions or not np.any(M.action[k]):
            continue
        out.append(f"act {label} = {[[int(x) for x in row] for row in M.action[k]]}")
    return '\n'.join(out) + '\n'


def write_module(M: Module, path: str, algebra_path: Optional[str] = None):
    out_dir = os.path.dirname(path)
    if out_dir and not os.path.exists(out_dir):
        os.makedirs(out_dir)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_module(M, algebra_path))
    logger.info(f"模 {M.name} 已写入 {path}")
