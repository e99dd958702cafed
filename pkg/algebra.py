"""
有限维代数模块
构造带关系的箭图路代数以及由结构常数给出的基代数，
并提供反代数、角代数、迹理想、商代数等构造
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from linalg import Matrix, PrimeField, as_columns
from utils import AlgebraError, CertificateError

logger = logging.getLogger(__name__)

# 路径记为 (起点, 终点, 箭头名序列)，箭头序列从左到右依次走过
Path = Tuple[int, int, Tuple[str, ...]]


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass
class Quiver:
    """箭图：顶点 0..num_vertices-1 与带名字的箭头"""
    num_vertices: int
    arrows: List[Arrow] = dc_field(default_factory=list)

    def __post_init__(self):
        if self.num_vertices < 1:
            raise AlgebraError("箭图至少需要一个顶点")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError(f"箭头名重复: {names}")
        for a in self.arrows:
            if not (0 <= a.source < self.num_vertices and 0 <= a.target < self.num_vertices):
                raise AlgebraError(f"箭头 {a.name} 的端点超出顶点范围")
        self._by_name = {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        if name not in self._by_name:
            raise AlgebraError(f"未知箭头: {name}")
        return self._by_name[name]

    def walk_endpoints(self, walk: Sequence[str]) -> Tuple[int, int]:
        """检查箭头序列可依次复合，返回 (起点, 终点)"""
        arrows = [self.arrow(name) for name in walk]
        for prev, nxt in zip(arrows, arrows[1:]):
            if prev.target != nxt.source:
                raise AlgebraError(f"路径 {'*'.join(walk)} 不可复合: {prev.name} 之后不能走 {nxt.name}")
        return arrows[0].source, arrows[-1].target

    def extend(self, walks: Dict[Tuple[int, int], List[Tuple[str, ...]]]) -> Dict[Tuple[int, int], List[Tuple[str, ...]]]:
        """所有路径再走一步箭头"""
        longer: Dict[Tuple[int, int], List[Tuple[str, ...]]] = {}
        for (s, t), items in sorted(walks.items()):
            for walk in items:
                for a in self.arrows:
                    if a.source == t:
                        longer.setdefault((s, a.target), []).append(walk + (a.name,))
        return longer


@dataclass
class Relation:
    """关系：若干 (系数, 路径) 项之和"""
    terms: List[Tuple[int, Tuple[str, ...]]]

    def __str__(self) -> str:
        return ' + '.join(f"{c}*{'*'.join(w)}" for c, w in self.terms)


@dataclass(eq=False)
class BasedAlgebra:
    """
    带基的有限维代数

    structure[i, j] 是 b_i·b_j 在基下的坐标；idempotents 每行是一个本原正交幂等元
    """
    field: PrimeField
    labels: List[str]
    structure: np.ndarray
    idempotents: np.ndarray
    generator_vectors: Optional[np.ndarray] = None

    def __post_init__(self):
        p = self.field.p
        n = len(self.labels)
        self.labels = list(self.labels)
        if len(set(self.labels)) != n:
            raise AlgebraError(f"基标签重复: {self.labels}")
        self.structure = np.mod(np.asarray(self.structure, dtype=np.int64), p)
        if self.structure.shape != (n, n, n):
            raise AlgebraError(f"结构常数形状应为 {(n, n, n)}，得到 {self.structure.shape}")
        self.idempotents = np.mod(np.asarray(self.idempotents, dtype=np.int64).reshape(-1, n), p)
        if self.idempotents.shape[0] == 0:
            raise AlgebraError("至少需要一个本原幂等元")
        if self.generator_vectors is not None:
            self.generator_vectors = np.mod(np.asarray(self.generator_vectors, dtype=np.int64).reshape(-1, n), p)
        self._radical: Optional[Matrix] = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasedAlgebra):
            return NotImplemented
        return (self.field == other.field
                and self.structure.shape == other.structure.shape
                and np.array_equal(self.structure, other.structure)
                and np.array_equal(self.idempotents, other.idempotents))

    __hash__ = None

    def __repr__(self) -> str:
        return f"BasedAlgebra(dim={self.dim}, vertices={self.num_vertices}, p={self.field.p})"

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def num_vertices(self) -> int:
        return self.idempotents.shape[0]

    def unit(self, k: int) -> np.ndarray:
        return self.field.unit(self.dim, k)

    def one(self) -> np.ndarray:
        return np.mod(self.idempotents.sum(axis=0), self.field.p)

    def idempotent_sum(self, subset: Sequence[int]) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.int64)
        for i in subset:
            vec = vec + self.idempotents[i]
        return np.mod(vec, self.field.p)

    # ------------------------------------------------------------------
    # 乘法
    # ------------------------------------------------------------------

    def multiply(self, x, y) -> np.ndarray:
        p, n = self.field.p, self.dim
        t = np.mod(np.asarray(x, dtype=np.int64) @ self.structure.reshape(n, n * n), p).reshape(n, n)
        return np.mod(np.asarray(y, dtype=np.int64) @ t, p)

    def left_matrix(self, x) -> Matrix:
        """左乘 x 的矩阵：第 j 列为 x·b_j"""
        p, n = self.field.p, self.dim
        t = np.mod(np.asarray(x, dtype=np.int64) @ self.structure.reshape(n, n * n), p).reshape(n, n)
        return t.T.copy()

    def right_matrix(self, y) -> Matrix:
        """右乘 y 的矩阵：第 i 列为 b_i·y"""
        u = np.mod(np.tensordot(self.structure, np.asarray(y, dtype=np.int64), axes=([1], [0])), self.field.p)
        return u.T.copy()

    def block(self, i: int, j: int) -> Matrix:
        """e_i A e_j 的一组基（列）"""
        m = self.field.matmul(self.left_matrix(self.idempotents[i]), self.right_matrix(self.idempotents[j]))
        return self.field.column_space(m)

    # ------------------------------------------------------------------
    # 校验
    # ------------------------------------------------------------------

    def check_associativity(self) -> bool:
        p = self.field.p
        c = self.structure
        lhs = np.mod(np.einsum('ijk,klm->ijlm', c, c), p)
        rhs = np.mod(np.einsum('jlk,ikm->ijlm', c, c), p)
        return bool(np.array_equal(lhs, rhs))

    def check_idempotents(self) -> bool:
        k = self.num_vertices
        for i in range(k):
            for j in range(k):
                prod = self.multiply(self.idempotents[i], self.idempotents[j])
                expected = self.idempotents[i] if i == j else np.zeros(self.dim, dtype=np.int64)
                if not np.array_equal(prod, expected):
                    return False
        one = self.one()
        ident = self.field.identity(self.dim)
        return (np.array_equal(self.left_matrix(one), ident)
                and np.array_equal(self.right_matrix(one), ident))

    def validate(self) -> "BasedAlgebra":
        if not self.check_associativity():
            raise AlgebraError("结构常数不满足结合律")
        if not self.check_idempotents():
            raise AlgebraError("幂等元不是完备的正交幂等元组")
        return self

    # ------------------------------------------------------------------
    # 根与生成元
    # ------------------------------------------------------------------

    def _scalar_part(self, i: int, y: np.ndarray) -> int:
        """局部角代数 e_i A e_i 中元素 y 的标量部分"""
        F = self.field
        powers = [self.idempotents[i], y]
        for _ in range(self.dim):
            powers.append(self.multiply(powers[-1], y))
        poly = F.minimal_relation(powers)
        factors = F.factor(poly)
        if len(factors) != 1 or len(factors[0][0]) != 2:
            raise AlgebraError(f"顶点 {i + 1} 处的角代数不是分裂局部代数，幂等元可能不本原")
        return (-factors[0][0][0]) % F.p

    def radical(self) -> Matrix:
        """
        Jacobson根的一组基（列）

        适用于分裂基本代数：非对角块全部属于根，对角块取去掉标量部分的幂零元
        """
        if self._radical is None:
            F = self.field
            cols = [F.zeros(self.dim, 0)]
            for i in range(self.num_vertices):
                for j in range(self.num_vertices):
                    b = self.block(i, j)
                    if i != j:
                        cols.append(b)
                        continue
                    for y in b.T:
                        lam = self._scalar_part(i, y)
                        cols.append(np.mod(y - lam * self.idempotents[i], F.p).reshape(-1, 1))
            self._radical = F.column_space(np.hstack(cols))
        return self._radical

    def generators(self) -> np.ndarray:
        """生成元（行）：幂等元加上 rad/rad² 的一组代表"""
        if self.generator_vectors is not None:
            return self.generator_vectors
        F = self.field
        rad = self.radical()
        if rad.shape[1] == 0:
            self.generator_vectors = self.idempotents.copy()
            return self.generator_vectors
        products = [F.matmul(self.left_matrix(a), rad) for a in rad.T]
        rad2 = F.column_space(np.hstack(products))
        units = [self.unit(k).reshape(-1, 1) for k in range(self.dim)
                 if F.in_column_space(rad, self.unit(k).reshape(-1, 1))]
        candidates = np.hstack(units + [rad])
        chosen = F.extend_columns(rad2, candidates)
        self.generator_vectors = np.vstack([self.idempotents, candidates[:, chosen].T])
        return self.generator_vectors


@dataclass(eq=False)
class QuiverAlgebra:
    """路代数 KQ/I，路径基为剩余路径"""
    quiver: Quiver
    relations: List[Relation]
    bound: int
    field: PrimeField
    paths: List[Path]
    normal_forms: Dict[Path, Dict[int, int]]
    vanishing_length: int

    @property
    def dim(self) -> int:
        return len(self.paths)

    @property
    def labels(self) -> List[str]:
        return [f"e{s + 1}" if not w else '*'.join(w) for s, _, w in self.paths]

    def arrow_index(self, name: str) -> int:
        a = self.quiver.arrow(name)
        return self.paths.index((a.source, a.target, (name,)))

    def reduce(self, path: Path) -> np.ndarray:
        """任意路径在剩余路径基下的坐标"""
        vec = np.zeros(self.dim, dtype=np.int64)
        if len(path[2]) >= self.vanishing_length:
            return vec
        for k, c in self.normal_forms.get(path, {}).items():
            vec[k] = c
        return vec

    def product(self, i: int, j: int) -> np.ndarray:
        """b_i·b_j：先走 b_j 再走 b_i"""
        si, ti, wi = self.paths[i]
        sj, tj, wj = self.paths[j]
        if tj != si:
            return np.zeros(self.dim, dtype=np.int64)
        return self.reduce((sj, ti, wj + wi))

    def to_based(self) -> BasedAlgebra:
        return to_based(self)


def _validate_relations(quiver: Quiver, relations: Sequence[Relation], p: int):
    """检查关系各项平行且落在 rad² 中，各项长度可以不同"""
    checked = []
    for rel in relations:
        combined: Dict[Tuple[str, ...], int] = {}
        endpoints = set()
        for coeff, walk in rel.terms:
            walk = tuple(walk)
            if not walk:
                raise AlgebraError(f"关系 {rel} 含平凡路径，理想不可容许")
            endpoints.add(quiver.walk_endpoints(walk))
            combined[walk] = (combined.get(walk, 0) + int(coeff)) % p
        if len(endpoints) > 1:
            raise AlgebraError(f"关系 {rel} 的各项起点终点不一致")
        combined = {w: c for w, c in combined.items() if c}
        if not combined:
            continue
        if min(len(w) for w in combined) < 2:
            raise AlgebraError(f"关系 {rel} 不在箭头理想的平方中")
        s, t = endpoints.pop()
        checked.append((s, t, combined))
    return checked


def _ideal_rows(rels, s, t, top, columns, levels, p):
    """长度不超过 top 的截断下，理想在 (s, t) 分量中的张成向量 u·r·w"""
    rows = []
    for rs, rt, terms in rels:
        shortest = min(len(w) for w in terms)
        for a in range(top - shortest + 1):
            for u in levels[a].get((s, rs), []):
                for b in range(top - shortest - a + 1):
                    for w in levels[b].get((rt, t), []):
                        row = np.zeros(len(columns), dtype=np.int64)
                        for walk, coeff in terms.items():
                            key = u + walk + w
                            if len(key) <= top:
                                row[columns[key]] += coeff
                        row %= p
                        if row.any():
                            rows.append(row)
    return rows


def _truncated_quotient(field: PrimeField, rels, levels, top: int):
    """
    KQ/(I + rad^(top+1)) 的剩余路径与范式

    每个 (起点, 终点) 分量把长度 1..top 的路径一起约化；长路径排在前面，
    主元取较长的路径
    """
    p = field.p
    residues: Dict[Tuple[int, int], set] = {}
    forms: Dict[Path, Dict[Tuple[str, ...], int]] = {}
    pairs = sorted({key for level in levels[1:] for key in level})
    for s, t in pairs:
        walks = [w for k in range(top, 0, -1) for w in levels[k].get((s, t), [])]
        columns = {w: c for c, w in enumerate(walks)}
        rows = _ideal_rows(rels, s, t, top, columns, levels, p)
        if rows:
            r, pivots = field.rref(np.vstack(rows))
        else:
            r, pivots = field.zeros(0, len(walks)), []
        pivot_set = set(pivots)
        free = [c for c in range(len(walks)) if c not in pivot_set]
        residues[(s, t)] = {walks[c] for c in free}
        for c in free:
            forms[(s, t, walks[c])] = {walks[c]: 1}
        for row, pc in enumerate(pivots):
            forms[(s, t, walks[pc])] = {walks[f]: int((-r[row, f]) % p) for f in free if r[row, f] % p}
    return residues, forms


def build_quiver_algebra(quiver: Quiver, relations: Sequence[Relation],
                         field: Optional[PrimeField] = None,
                         bound: Optional[int] = None) -> QuiverAlgebra:
    """
    构造 KQ/I 的路径基与乘法表

    逐级提高截断长度 L，计算 KQ/(I + rad^(L+1))；当长度 L 的路径全部落入
    理想时 rad^L ⊆ I + rad^(L+1)，此时截断商就是 KQ/I

    Args:
        quiver: 箭图
        relations: 关系列表，每个关系的各项平行，长度可以不同
        field: 素数域，默认 F_101
        bound: 幂零安全界，默认 2·箭头数+2

    Returns:
        QuiverAlgebra
    """
    field = field or PrimeField()
    if bound is None:
        bound = 2 * len(quiver.arrows) + 2
    if bound < 1:
        raise AlgebraError(f"安全界必须为正，得到 {bound}")
    rels = _validate_relations(quiver, relations, field.p)

    levels = [{(v, v): [()] for v in range(quiver.num_vertices)}]
    for top in range(1, bound + 1):
        levels.append(quiver.extend(levels[-1]))
        residues, forms = _truncated_quotient(field, rels, levels, top)
        if all(not forms[(s, t, w)] for (s, t), walks in levels[top].items() for w in walks):
            break
    else:
        raise AlgebraError(f"长度为 {bound} 的路径在约化后仍未消失，理想不可容许或安全界 bound={bound} 过小")

    paths: List[Path] = [(v, v, ()) for v in range(quiver.num_vertices)]
    for k in range(1, top):
        for (s, t) in sorted(levels[k]):
            paths.extend((s, t, w) for w in levels[k][(s, t)] if w in residues[(s, t)])
    index = {path: k for k, path in enumerate(paths)}
    normal_forms: Dict[Path, Dict[int, int]] = {path: {k: 1} for k, path in enumerate(paths)}
    for (s, t, w), form in forms.items():
        normal_forms[(s, t, w)] = {index[(s, t, r)]: c for r, c in form.items()}

    logger.debug(f"路代数构造完成: 维数 {len(paths)}，长度 {top} 的路径全部为零")
    return QuiverAlgebra(quiver=quiver, relations=list(relations), bound=bound, field=field,
                         paths=paths, normal_forms=normal_forms, vanishing_length=top)


def to_based(qa: QuiverAlgebra) -> BasedAlgebra:
    """路代数转为带基代数，幂等元为平凡路径，生成元为平凡路径加箭头"""
    n = qa.dim
    structure = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            structure[i, j] = qa.product(i, j)
    k = qa.quiver.num_vertices
    idempotents = np.eye(k, n, dtype=np.int64)
    arrows = [qa.arrow_index(a.name) for a in qa.quiver.arrows]
    generators = np.vstack([idempotents] + [qa.field.unit(n, a).reshape(1, -1) for a in arrows])
    return BasedAlgebra(qa.field, qa.labels, structure, idempotents, generators).validate()


def opposite(A: BasedAlgebra) -> BasedAlgebra:
    """反代数：c^op[i][j] = c[j][i]"""
    return BasedAlgebra(A.field, A.labels, np.transpose(A.structure, (1, 0, 2)).copy(),
                        A.idempotents.copy(),
                        None if A.generator_vectors is None else A.generator_vectors.copy())


def normalize_subset(A: BasedAlgebra, subset: Sequence[int], allow_empty: bool = False) -> List[int]:
    result = sorted(set(int(i) for i in subset))
    if not result and not allow_empty:
        raise AlgebraError("幂等元子集不能为空")
    for i in result:
        if not 0 <= i < A.num_vertices:
            raise AlgebraError(f"幂等元下标 {i + 1} 超出范围 1..{A.num_vertices}")
    return result


def _basis_label(A: BasedAlgebra, column: np.ndarray, fallback: str) -> str:
    nz = np.nonzero(column)[0]
    if nz.size == 1 and column[nz[0]] == 1:
        return A.labels[nz[0]]
    return fallback


def corner(A: BasedAlgebra, subset: Sequence[int]) -> Tuple[BasedAlgebra, Matrix]:
    """
    角代数 eAe

    Args:
        A: 带基代数
        subset: 组成 e 的幂等元下标

    Returns:
        (eAe, 嵌入矩阵 E)，E 的列是角代数的基在 A 中的坐标
    """
    subset = normalize_subset(A, subset)
    F = A.field
    blocks = []
    idem_positions = []
    offset = 0
    for i in subset:
        for j in subset:
            b = A.block(i, j)
            if i == j:
                b = F.column_space(np.hstack([A.idempotents[i].reshape(-1, 1), b]))
                idem_positions.append(offset)
            blocks.append(b)
            offset += b.shape[1]
    E = np.hstack(blocks)
    m = E.shape[1]
    products = np.hstack([F.matmul(A.left_matrix(E[:, a]), E) for a in range(m)])
    coords = F.solve(E, products)
    if coords is None:
        raise CertificateError("角代数的乘法在嵌入像上不封闭")
    structure = coords.reshape(m, m, m).transpose(1, 2, 0)
    idempotents = np.zeros((len(subset), m), dtype=np.int64)
    for r, pos in enumerate(idem_positions):
        idempotents[r, pos] = 1
    labels = [_basis_label(A, E[:, a], f"u{a + 1}") for a in range(m)]
    result = BasedAlgebra(F, labels, structure, idempotents).validate()
    logger.debug(f"角代数 e={[i + 1 for i in subset]} 维数 {m}")
    return result, E


def is_ideal(A: BasedAlgebra, I: Matrix) -> bool:
    """I（列）是否是双边理想"""
    F = A.field
    I = as_columns(I, A.dim)
    if I.shape[1] == 0:
        return True
    images = []
    for k in range(A.dim):
        b = A.unit(k)
        images.append(F.matmul(A.left_matrix(b), I))
        images.append(F.matmul(A.right_matrix(b), I))
    return F.in_column_space(I, np.hstack(images))


def trace_ideal(A: BasedAlgebra, subset: Sequence[int]) -> Matrix:
    """迹理想 AeA 的一组基（列）"""
    subset = normalize_subset(A, subset, allow_empty=True)
    F = A.field
    if not subset:
        return F.zeros(A.dim, 0)
    e = A.idempotent_sum(subset)
    Ae = F.column_space(A.right_matrix(e))
    I = F.column_space(np.hstack([A.left_matrix(y) for y in Ae.T]))
    if not is_ideal(A, I):
        raise CertificateError("迹理想在双边乘法下不封闭")
    return I


def quotient_algebra(A: BasedAlgebra, I: Matrix) -> Tuple[BasedAlgebra, Matrix]:
    """
    商代数 A/I

    Returns:
        (A/I, 投影矩阵 π)，π 为 dim(A/I) × dim(A)
    """
    F = A.field
    n = A.dim
    I = as_columns(I, n)
    if not is_ideal(A, I):
        raise AlgebraError("给定子空间不是双边理想")
    r = F.rank(I)
    if r == n:
        raise AlgebraError("理想等于整个代数，商代数为零")
    if r == 0:
        return A, F.identity(n)
    R = F.row_space(I.T)
    _, pivots = F.rref(R)
    free = [c for c in range(n) if c not in set(pivots)]
    S = np.zeros((len(pivots), n), dtype=np.int64)
    for row, pc in enumerate(pivots):
        S[row, pc] = 1
    full = np.mod(F.identity(n) - R.T @ S, F.p)
    proj = full[free, :]
    sub = A.structure[np.ix_(free, free)]
    structure = np.mod(np.einsum('ijk,mk->ijm', sub, proj), F.p)
    images = F.matmul(A.idempotents, proj.T)
    images = images[np.any(images, axis=1)]
    Q = BasedAlgebra(F, [A.labels[f] for f in free], structure, images).validate()
    logger.debug(f"商代数维数 {Q.dim}（理想维数 {r}）")
    return Q, proj
