"""
模范畴模块
左模的构造（单模、投射模、内射模）、Hom空间、直和、子模与商模、
直和分解与同构判定、对偶，以及函子 F = Hom(X, -) 与 G = e·(-)
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra import BasedAlgebra, QuiverAlgebra, corner, normalize_subset, opposite
from linalg import Matrix, as_columns, as_rows
from utils import AlgebraError, CertificateError, Decision, DecompositionError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 32


@dataclass(eq=False)
class Module:
    """
    有限维左模

    action[k] 是基元素 b_k 的作用矩阵；基按顶点分块连续排列，
    即 e_i 作用为第 i 块上的坐标投影
    """
    algebra: BasedAlgebra
    action: np.ndarray
    name: str = ""
    dims: Tuple[int, ...] = dc_field(init=False)

    def __post_init__(self):
        A = self.algebra
        self.action = np.mod(np.asarray(self.action, dtype=np.int64), A.field.p)
        if self.action.ndim != 3 or self.action.shape[0] != A.dim or self.action.shape[1] != self.action.shape[2]:
            raise AlgebraError(f"作用张量形状错误: {self.action.shape}")
        dims = []
        pos = 0
        for e in A.idempotents:
            diag = np.diag(self.act(e))
            d_i = int(np.count_nonzero(diag))
            expected = np.zeros(self.dim, dtype=np.int64)
            expected[pos:pos + d_i] = 1
            if not np.array_equal(self.act(e), np.diag(expected)):
                raise AlgebraError("模的分次未规范化，请使用 Module.from_action 构造")
            dims.append(d_i)
            pos += d_i
        if pos != self.dim:
            raise AlgebraError("幂等元作用之和不是恒等映射")
        self.dims = tuple(dims)

    @classmethod
    def from_action(cls, algebra: BasedAlgebra, action, name: str = "",
                    check: bool = True) -> Tuple["Module", Matrix]:
        """
        由任意基下的作用矩阵构造规范化的模

        Returns:
            (模, T)，T 把新坐标变到原坐标
        """
        F = algebra.field
        action = np.mod(np.asarray(action, dtype=np.int64), F.p)
        d = action.shape[1]
        blocks = [F.column_space(np.mod(np.tensordot(e, action, axes=1), F.p)) for e in algebra.idempotents]
        T = np.hstack(blocks) if blocks else F.zeros(d, 0)
        T_inv = F.inverse(T)
        if T_inv is None:
            raise AlgebraError("幂等元的像不构成直和分解")
        new_action = np.stack([F.mul_chain(T_inv, a, T) for a in action]) if algebra.dim else action
        module = cls(algebra, new_action, name)
        if check and not module.check_action():
            raise AlgebraError(f"模 {name or ''} 的作用不满足代数的乘法关系")
        return module, T

    def __repr__(self) -> str:
        return f"Module({self.name or '?'}, dims={self.dims})"

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def field(self):
        return self.algebra.field

    def is_zero(self) -> bool:
        return self.dim == 0

    def offsets(self) -> List[int]:
        return [int(x) for x in np.concatenate([[0], np.cumsum(self.dims)])]

    def block_indices(self, i: int) -> np.ndarray:
        off = self.offsets()
        return np.arange(off[i], off[i + 1])

    def act(self, x) -> Matrix:
        return np.mod(np.tensordot(np.asarray(x, dtype=np.int64), self.action, axes=1), self.field.p)

    def check_action(self) -> bool:
        p = self.field.p
        if self.dim == 0:
            return True
        lhs = np.mod(np.einsum('iab,jbc->ijac', self.action, self.action), p)
        rhs = np.mod(np.einsum('ijk,kac->ijac', self.algebra.structure, self.action), p)
        one = self.act(self.algebra.one())
        return bool(np.array_equal(lhs, rhs)) and np.array_equal(one, np.eye(self.dim, dtype=np.int64))

    def generator_actions(self) -> List[Matrix]:
        """非幂等生成元的作用矩阵"""
        gens = self.algebra.generators()[self.algebra.num_vertices:]
        return [self.act(g) for g in gens]


@dataclass
class ModuleMap:
    source: Module
    target: Module
    matrix: Matrix

    def is_homomorphism(self) -> bool:
        F = self.source.field
        return all(np.array_equal(F.matmul(self.matrix, self.source.act(b)),
                                  F.matmul(self.target.act(b), self.matrix))
                   for b in np.eye(self.source.algebra.dim, dtype=np.int64))


@dataclass
class HomSpace:
    source: Module
    target: Module
    basis: List[Matrix]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def flat(self) -> Matrix:
        """基矩阵按行展开后作为列"""
        size = self.target.dim * self.source.dim
        if not self.basis:
            return np.zeros((size, 0), dtype=np.int64)
        return np.stack([b.reshape(-1) for b in self.basis], axis=1)

    def coordinates(self, phi: Matrix) -> Optional[np.ndarray]:
        if not self.basis:
            return np.zeros(0, dtype=np.int64) if not np.any(phi) else None
        return self.source.field.solve(self.flat(), np.asarray(phi).reshape(-1))

    def combine(self, coeffs) -> Matrix:
        F = self.source.field
        result = F.zeros(self.target.dim, self.source.dim)
        for c, b in zip(coeffs, self.basis):
            result = np.mod(result + int(c) * b, F.p)
        return result


def _same_algebra(M: Module, N: Module):
    if M.algebra is not N.algebra and M.algebra != N.algebra:
        raise AlgebraError(f"模 {M.name} 与 {N.name} 不属于同一个代数")


def hom_basis(M: Module, N: Module) -> HomSpace:
    """
    Hom_A(M, N) 的一组基

    未知量只取保持分块的位置，方程来自非幂等生成元的交换条件
    """
    _same_algebra(M, N)
    F = M.field
    nM, nN = M.dim, N.dim
    rr_list, cc_list = [], []
    offM, offN = M.offsets(), N.offsets()
    for i in range(M.algebra.num_vertices):
        for r in range(offN[i], offN[i + 1]):
            for c in range(offM[i], offM[i + 1]):
                rr_list.append(r)
                cc_list.append(c)
    u = len(rr_list)
    if u == 0:
        return HomSpace(M, N, [])
    rr = np.array(rr_list)
    cc = np.array(cc_list)
    cols = np.arange(u)[None, :]
    system = F.zeros(0, u)
    for GM, GN in zip(M.generator_actions(), N.generator_actions()):
        eq = np.zeros((nN * nM, u), dtype=np.int64)
        # Φ·G_M 的第 r 行为 G_M 的第 c 行
        eq[rr[None, :] * nM + np.arange(nM)[:, None], cols] += GM[cc, :].T
        # G_N·Φ 的第 c 列为 G_N 的第 r 列
        eq[np.arange(nN)[:, None] * nM + cc[None, :], cols] -= GN[:, rr]
        system = F.row_space(np.vstack([system, np.mod(eq, F.p)]))
    kernel = F.kernel_basis(system) if system.shape[0] else F.identity(u)
    basis = []
    for v in kernel:
        phi = F.zeros(nN, nM)
        phi[rr, cc] = v
        basis.append(phi)
    return HomSpace(M, N, basis)


def zero_module(A: BasedAlgebra) -> Module:
    return Module(A, np.zeros((A.dim, 0, 0), dtype=np.int64), "0")


# ----------------------------------------------------------------------
# 子模、商模、直和
# ----------------------------------------------------------------------

def _check_vertex(A: BasedAlgebra, v: int):
    if not 0 <= v < A.num_vertices:
        raise AlgebraError(f"顶点下标 {v + 1} 超出范围 1..{A.num_vertices}")


def submodule(M: Module, U: Matrix, name: str = "") -> Tuple[Module, Matrix]:
    """
    由 A-稳定子空间 U（列）得到子模

    Returns:
        (子模, 包含映射矩阵)
    """
    F = M.field
    U = as_columns(U, M.dim)
    blocks = [F.column_space(F.matmul(M.act(e), U)) for e in M.algebra.idempotents]
    B = np.hstack(blocks) if blocks else F.zeros(M.dim, 0)
    r = B.shape[1]
    if r == 0:
        return zero_module(M.algebra), F.zeros(M.dim, 0)
    images = np.hstack([F.matmul(a, B) for a in M.action])
    coords = F.solve(B, images)
    if coords is None:
        raise CertificateError("子空间在代数作用下不稳定")
    action = coords.reshape(r, M.algebra.dim, r).transpose(1, 0, 2)
    return Module(M.algebra, action, name), B


def quotient_module(M: Module, U: Matrix, name: str = "") -> Tuple[Module, Matrix]:
    """
    商模 M/U

    Returns:
        (商模, 投影矩阵 π)
    """
    F = M.field
    U = as_columns(U, M.dim)
    sub_blocks, comp_blocks = [], []
    for i, e in enumerate(M.algebra.idempotents):
        Ui = F.column_space(F.matmul(M.act(e), U))
        units = np.eye(M.dim, dtype=np.int64)[:, M.block_indices(i)]
        chosen = F.extend_columns(Ui, units)
        sub_blocks.append(Ui)
        comp_blocks.append(units[:, chosen])
    Us = np.hstack(sub_blocks)
    C = np.hstack(comp_blocks)
    q = C.shape[1]
    W_inv = F.inverse(np.hstack([Us, C]))
    if W_inv is None:
        raise CertificateError("商模补空间选取失败")
    proj = W_inv[Us.shape[1]:, :]
    if q == 0:
        return zero_module(M.algebra), F.zeros(0, M.dim)
    if Us.shape[1] and not F.in_column_space(Us, np.hstack([F.matmul(a, Us) for a in M.action])):
        raise CertificateError("子空间不是子模")
    action = np.stack([F.mul_chain(proj, a, C) for a in M.action])
    return Module(M.algebra, action, name), proj


def kernel_module(M: Module, f: Matrix, name: str = "") -> Tuple[Module, Matrix]:
    """同态 f: M → N 的核"""
    F = M.field
    f = as_rows(f, M.dim)
    K = F.kernel_basis(f).T if f.shape[0] else F.identity(M.dim)
    return submodule(M, K, name)


def cokernel(N: Module, f: Matrix, name: str = "") -> Tuple[Module, Matrix]:
    """同态 f: M → N 的余核"""
    F = N.field
    f = as_columns(f, N.dim)
    return quotient_module(N, F.column_space(f) if f.shape[1] else F.zeros(N.dim, 0), name)


def direct_sum(modules: Sequence[Module], algebra: Optional[BasedAlgebra] = None,
               name: str = "") -> Tuple[Module, List[Matrix], List[Matrix]]:
    """
    直和

    Returns:
        (直和模, 嵌入矩阵列表, 投影矩阵列表)
    """
    modules = list(modules)
    if not modules:
        if algebra is None:
            raise AlgebraError("空直和需要指定代数")
        return zero_module(algebra), [], []
    A = modules[0].algebra
    for m in modules[1:]:
        _same_algebra(modules[0], m)
    F = A.field
    total = sum(m.dim for m in modules)
    # 按 (顶点, 第几个直和项) 重新排列坐标
    order = []
    starts = np.concatenate([[0], np.cumsum([m.dim for m in modules])])
    for i in range(A.num_vertices):
        for k, m in enumerate(modules):
            order.extend(int(starts[k] + x) for x in m.block_indices(i))
    perm = np.zeros((total, total), dtype=np.int64)
    for new, old in enumerate(order):
        perm[new, old] = 1
    action = np.zeros((A.dim, total, total), dtype=np.int64)
    for k, m in enumerate(modules):
        s = slice(starts[k], starts[k + 1])
        action[:, s, s] = m.action
    action = np.einsum('ab,kbc,dc->kad', perm, action, perm)
    summed = Module(A, action, name or ' ⊕ '.join(m.name or '?' for m in modules))
    injections, projections = [], []
    for k, m in enumerate(modules):
        inc = np.zeros((total, m.dim), dtype=np.int64)
        inc[starts[k]:starts[k + 1], :] = np.eye(m.dim, dtype=np.int64)
        injections.append(F.matmul(perm, inc))
        projections.append(F.matmul(perm, inc).T.copy())
    return summed, injections, projections


def direct_power(M: Module, k: int) -> Module:
    return direct_sum([M] * k, M.algebra, name=f"{M.name}^{k}")[0]


# ----------------------------------------------------------------------
# 标准模
# ----------------------------------------------------------------------

def projective_basis(A: BasedAlgebra, v: int) -> Matrix:
    """P(v) = A·e_v 在 A 中的基（列），按顶点分块且 e_v 排在第 v 块首位"""
    _check_vertex(A, v)
    F = A.field
    blocks = []
    for i in range(A.num_vertices):
        b = A.block(i, v)
        if i == v:
            b = F.column_space(np.hstack([A.idempotents[v].reshape(-1, 1), b]))
        blocks.append(b)
    return np.hstack(blocks)


def projective(A: BasedAlgebra, v: int) -> Module:
    """不可分解投射模 P(v) = A·e_v，作用为左乘"""
    F = A.field
    B = projective_basis(A, v)
    d = B.shape[1]
    images = np.hstack([F.matmul(A.left_matrix(A.unit(k)), B) for k in range(A.dim)])
    coords = F.solve(B, images)
    if coords is None:
        raise CertificateError(f"A·e_{v + 1} 在左乘下不封闭")
    action = coords.reshape(d, A.dim, d).transpose(1, 0, 2)
    return Module(A, action, f"P{v + 1}")


def map_from_projective(A: BasedAlgebra, v: int, M: Module, m: np.ndarray) -> Matrix:
    """P(v) → M，e_v ↦ m（m 需位于 e_v M）"""
    F = A.field
    B = projective_basis(A, v)
    m = np.asarray(m, dtype=np.int64)
    if M.dim == 0:
        return F.zeros(0, B.shape[1])
    return np.stack([F.matmul(M.act(u), m) for u in B.T], axis=1)


def radical_submodule(M: Module) -> Matrix:
    """rad(A)·M 的一组基（列）"""
    F = M.field
    rad = M.algebra.radical()
    if rad.shape[1] == 0 or M.dim == 0:
        return F.zeros(M.dim, 0)
    return F.column_space(np.hstack([M.act(r) for r in rad.T]))


def top_generators(M: Module) -> List[Tuple[int, np.ndarray]]:
    """
    顶部生成元：每个顶点块内 rad(A)M 的补空间的一组基

    Returns:
        [(顶点, 向量)]，个数即 top(M) 中各单模的重数之和
    """
    F = M.field
    radM = radical_submodule(M)
    result = []
    for i in range(M.algebra.num_vertices):
        idx = M.block_indices(i)
        if idx.size == 0:
            continue
        Ri = F.column_space(F.matmul(M.act(M.algebra.idempotents[i]), radM))
        units = np.eye(M.dim, dtype=np.int64)[:, idx]
        for c in F.extend_columns(Ri, units):
            result.append((i, units[:, c]))
    return result


def top_multiplicities(M: Module) -> List[int]:
    counts = [0] * M.algebra.num_vertices
    for v, _ in top_generators(M):
        counts[v] += 1
    return counts


def simple(A: BasedAlgebra, v: int) -> Module:
    """单模 S(v) = top P(v)"""
    P = projective(A, v)
    S, _ = quotient_module(P, radical_submodule(P), f"S{v + 1}")
    return S


def dualize(M: Module, algebra: Optional[BasedAlgebra] = None) -> Module:
    """
    对偶 D = Hom_K(-, K)，A-模变为 A^op-模

    Args:
        M: 模
        algebra: 目标代数，缺省时构造 opposite(M.algebra)
    """
    target = algebra if algebra is not None else opposite(M.algebra)
    action = np.transpose(M.action, (0, 2, 1)).copy()
    name = M.name[1:] if M.name.startswith('D') else f"D{M.name}"
    return Module(target, action, name)


def injective(A: BasedAlgebra, v: int) -> Module:
    """不可分解内射模 I(v) = D(e_v A)"""
    Aop = opposite(A)
    I = dualize(projective(Aop, v), A)
    I.name = f"I{v + 1}"
    return I


def regular(A: BasedAlgebra) -> Module:
    return direct_sum([projective(A, v) for v in range(A.num_vertices)], A, name="A")[0]


def cogenerator(A: BasedAlgebra) -> Module:
    return direct_sum([injective(A, v) for v in range(A.num_vertices)], A, name="DA")[0]


def representation(qa: QuiverAlgebra, A: BasedAlgebra, dims: Sequence[int],
                   maps: Dict[str, Matrix], name: str = "") -> Module:
    """
    由箭图表示构造模

    Args:
        qa: 路代数
        A: qa 对应的带基代数
        dims: 各顶点维数
        maps: 箭头名 -> 矩阵（目标维数 × 起点维数），缺省为零
    """
    F = A.field
    dims = [int(x) for x in dims]
    if len(dims) != qa.quiver.num_vertices:
        raise AlgebraError(f"维数向量长度 {len(dims)} 与顶点数 {qa.quiver.num_vertices} 不符")
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offsets[-1])
    arrow_mats = {}
    for a in qa.quiver.arrows:
        shape = (dims[a.target], dims[a.source])
        mat = maps.get(a.name)
        mat = F.zeros(*shape) if mat is None else np.mod(np.asarray(mat, dtype=np.int64).reshape(shape), F.p)
        arrow_mats[a.name] = mat
    unknown = set(maps) - set(arrow_mats)
    if unknown:
        raise AlgebraError(f"未知箭头: {sorted(unknown)}")
    action = np.zeros((A.dim, total, total), dtype=np.int64)
    for k, (s, t, walk) in enumerate(qa.paths):
        mat = np.eye(dims[s], dtype=np.int64)
        for arrow in walk:
            mat = F.matmul(arrow_mats[arrow], mat)
        action[k, offsets[t]:offsets[t + 1], offsets[s]:offsets[s + 1]] = mat
    module = Module(A, action, name)
    if not module.check_action():
        raise AlgebraError(f"表示 {name} 不满足关系")
    return module


def restrict_scalars(N: Module, A: BasedAlgebra, proj: Matrix) -> Module:
    """沿商映射 π: A → A/I 把 A/I-模看作 A-模"""
    action = np.einsum('kb,kij->bij', np.asarray(proj, dtype=np.int64), N.action)
    module, _ = Module.from_action(A, np.mod(action, A.field.p), N.name, check=False)
    return module


def random_module(A: BasedAlgebra, rng: np.random.Generator, max_summands: int = 3) -> Module:
    """投射模直和的随机循环子模或商模，偶尔取对偶方向"""
    F = A.field
    count = int(rng.integers(1, max_summands + 1))
    vertices = [int(v) for v in rng.integers(0, A.num_vertices, size=count)]
    use_dual = bool(rng.integers(0, 4) == 0)
    base_alg = opposite(A) if use_dual else A
    P = direct_sum([projective(base_alg, v) for v in vertices], base_alg)[0]
    x = F.random_vector(rng, P.dim)
    U = F.column_space(np.stack([F.matmul(P.act(base_alg.unit(k)), x) for k in range(base_alg.dim)], axis=1))
    if rng.integers(0, 2) == 0:
        M, _ = submodule(P, U)
    else:
        M, _ = quotient_module(P, U)
    if use_dual:
        M = dualize(M, A)
    M.name = "R"
    return M


# ----------------------------------------------------------------------
# 直和分解与同构
# ----------------------------------------------------------------------

def _endomorphism_candidates(H: HomSpace, rng: np.random.Generator, budget: int):
    for phi in H.basis:
        yield phi
    for _ in range(budget):
        yield H.combine(H.source.field.random_vector(rng, H.dim))


def _fitting_parts(M: Module, phi: Matrix):
    """按 φ 的极小多项式的互素因子把 M 分成广义特征子模"""
    F = M.field
    factors = F.factor(F.matrix_minimal_polynomial(phi))
    if len(factors) < 2:
        return None
    parts = []
    for f, mult in factors:
        g = F.matrix_power(F.evaluate(f, phi), mult)
        parts.append(submodule(M, F.kernel_basis(g).T))
    return parts


def is_local(M: Module, endo_basis: Sequence[Matrix]) -> bool:
    """End(M) = K·1 ⊕ N 且 N 是幂零的乘法封闭子空间"""
    F = M.field
    d = M.dim
    nil = []
    for phi in endo_basis:
        factors = F.factor(F.matrix_minimal_polynomial(phi))
        if len(factors) != 1 or len(factors[0][0]) != 2:
            return False
        lam = (-factors[0][0][0]) % F.p
        nil.append(np.mod(phi - lam * F.identity(d), F.p).reshape(-1))
    if not nil:
        return d == 0
    N = F.column_space(np.stack(nil, axis=1))
    if N.shape[1] != len(endo_basis) - 1:
        return False
    current = N
    for _ in range(d + 1):
        if current.shape[1] == 0:
            return True
        prods = np.stack([F.matmul(a.reshape(d, d), b.reshape(d, d)).reshape(-1)
                          for a in current.T for b in N.T], axis=1)
        if not F.in_column_space(N, prods):
            return False
        current = F.column_space(prods)
    return current.shape[1] == 0


def _split(M: Module, rng: np.random.Generator, budget: int) -> List[Tuple[Module, Matrix, Matrix]]:
    F = M.field
    if M.dim == 0:
        return []
    H = hom_basis(M, M)
    for phi in _endomorphism_candidates(H, rng, budget):
        parts = _fitting_parts(M, phi)
        if parts is None:
            continue
        W_inv = F.inverse(np.hstack([inc for _, inc in parts]))
        if W_inv is None:
            raise CertificateError("广义特征子模之和不是直和")
        result = []
        start = 0
        for part, inc in parts:
            proj = W_inv[start:start + part.dim]
            start += part.dim
            for sub, sub_inc, sub_proj in _split(part, rng, budget):
                result.append((sub, F.matmul(inc, sub_inc), F.matmul(sub_proj, proj)))
        return result
    if is_local(M, H.basis):
        return [(M, F.identity(M.dim), F.identity(M.dim))]
    raise DecompositionError(f"模 {M.name or '?'} (dims={M.dims}) 在 {budget} 次随机尝试后"
                             f"既未找到分裂的自同态，也未通过局部性检验")


def split_summands(M: Module, seed: int = 0,
                   budget: int = DEFAULT_BUDGET) -> List[Tuple[Module, Matrix, Matrix]]:
    """
    把 M 分解为不可分解直和项，给出显式的分裂同构

    Returns:
        [(直和项, 嵌入 ι_k, 投影 π_k)]，满足 Σ ι_k π_k = 1
    """
    rng = np.random.default_rng(seed)
    pieces = _split(M, rng, budget)
    base = M.name or "M"
    for k, (part, _, _) in enumerate(pieces):
        part.name = f"{base}[{k + 1}]"
    return pieces


def indecomposable_isomorphism(M: Module, N: Module) -> Optional[Matrix]:
    """
    M 不可分解时的精确同构判定

    End(M) 局部，故 M ≅ N 当且仅当存在基元素之积 g∘f 可逆，此时 f 即为同构
    """
    _same_algebra(M, N)
    F = M.field
    if M.dims != N.dims:
        return None
    if M.dim == 0:
        return F.zeros(0, 0)
    H1 = hom_basis(M, N)
    if H1.dim == 0:
        return None
    H2 = hom_basis(N, M)
    for f in H1.basis:
        for g in H2.basis:
            if F.is_invertible(F.matmul(g, f)):
                return f
    return None


def decompose(M: Module, seed: int = 0, budget: int = DEFAULT_BUDGET) -> List[Tuple[Module, int]]:
    """不可分解直和项及其重数"""
    groups: List[List] = []
    for part, _, _ in split_summands(M, seed, budget):
        for group in groups:
            if indecomposable_isomorphism(group[0], part) is not None:
                group[1] += 1
                break
        else:
            groups.append([part, 1])
    logger.debug(f"{M.name} 分解为 {[(g[0].dims, g[1]) for g in groups]}")
    return [(g[0], g[1]) for g in groups]


def basic_summands(M: Module, seed: int = 0, budget: int = DEFAULT_BUDGET) -> List[Module]:
    return [part for part, _ in decompose(M, seed, budget)]


def _match_pieces(M: Module, N: Module, seed: int, budget: int) -> Optional[Matrix]:
    F = M.field
    pieces_M = split_summands(M, seed, budget)
    pieces_N = split_summands(N, seed, budget)
    if len(pieces_M) != len(pieces_N):
        return None
    used = set()
    iso = F.zeros(N.dim, M.dim)
    for part, _, proj in pieces_M:
        for k, (other, inc, _) in enumerate(pieces_N):
            if k in used:
                continue
            f = indecomposable_isomorphism(part, other)
            if f is not None:
                used.add(k)
                iso = np.mod(iso + F.mul_chain(inc, f, proj), F.p)
                break
        else:
            return None
    return iso


def _search_isomorphism(M: Module, N: Module, seed: int, budget: int) -> Tuple[Decision, Optional[Matrix]]:
    """
    寻找同构 M → N

    依次尝试：随机取 Hom(M,N) 中的元素；当 dim Hom ≤ 4 时枚举系数取自 {0,1,2} 的组合；
    比较四个 Hom 维数；最后逐个匹配不可分解直和项。
    系数网格只覆盖 Hom 空间的一小部分，网格中找不到可逆元并不能说明不同构，
    只有后两步才能给出 FALSE。
    """
    _same_algebra(M, N)
    F = M.field
    if M.dims != N.dims:
        return Decision.FALSE, None
    if M.dim == 0:
        return Decision.TRUE, F.zeros(0, 0)
    H = hom_basis(M, N)
    if H.dim == 0:
        return Decision.FALSE, None
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        f = H.combine(F.random_vector(rng, H.dim))
        if F.is_invertible(f):
            return Decision.TRUE, f
    if H.dim <= 4:
        for coeffs in itertools.product(range(min(F.p, 3)), repeat=H.dim):
            f = H.combine(coeffs)
            if F.is_invertible(f):
                return Decision.TRUE, f
    dims = {H.dim, hom_basis(M, M).dim, hom_basis(N, N).dim, hom_basis(N, M).dim}
    if len(dims) > 1:
        return Decision.FALSE, None
    try:
        iso = _match_pieces(M, N, seed, budget)
    except DecompositionError as e:
        logger.warning(f"同构判定无法完成: {e}")
        return Decision.UNKNOWN, None
    if iso is None:
        return Decision.FALSE, None
    return Decision.TRUE, iso


def is_isomorphic(M: Module, N: Module, seed: int = 0, budget: int = DEFAULT_BUDGET) -> Decision:
    """三值同构判定"""
    return _search_isomorphism(M, N, seed, budget)[0]


def find_isomorphism(M: Module, N: Module, seed: int = 0, budget: int = DEFAULT_BUDGET) -> Optional[Matrix]:
    return _search_isomorphism(M, N, seed, budget)[1]


def in_add(M: Module, summands: Sequence[Module], seed: int = 0, budget: int = DEFAULT_BUDGET) -> bool:
    """M 是否属于 add(⊕ summands)，summands 需为不可分解模"""
    for part, _ in decompose(M, seed, budget):
        if not any(indecomposable_isomorphism(part, X) is not None for X in summands):
            return False
    return True


def nakayama_pairing(A: BasedAlgebra) -> Dict[int, int]:
    """满足 P(v) ≅ I(w) 的顶点对 v -> w"""
    injectives = [injective(A, w) for w in range(A.num_vertices)]
    pairing = {}
    for v in range(A.num_vertices):
        P = projective(A, v)
        for w, I in enumerate(injectives):
            if indecomposable_isomorphism(P, I) is not None:
                pairing[v] = w
                break
    return pairing


def projective_injective_vertices(A: BasedAlgebra) -> List[int]:
    """投射模 P(v) 同时是内射模的顶点"""
    return sorted(nakayama_pairing(A))


def socle_vertices(A: BasedAlgebra) -> List[int]:
    """内射模 I(w) 同时是投射模的顶点"""
    return sorted(nakayama_pairing(A).values())


# ----------------------------------------------------------------------
# 函子 F 与 G
# ----------------------------------------------------------------------

def apply_F_with_bases(endo, M: Module, name: str = "") -> Tuple[Module, List[HomSpace]]:
    """
    F(M) = ⊕_i Hom(X_i, M)，γ: X_i → X_j 把 φ ∈ Hom(X_j, M) 送到 φ∘γ

    Args:
        endo: 自同态代数，需提供 algebra、summands 与 basis_maps（(i, j, 矩阵) 序列）
        M: Λ-模
    """
    Gamma = endo.algebra
    F = Gamma.field
    homs = [hom_basis(X, M) for X in endo.summands]
    offsets = np.concatenate([[0], np.cumsum([h.dim for h in homs])]).astype(int)
    total = int(offsets[-1])
    action = np.zeros((Gamma.dim, total, total), dtype=np.int64)
    for k, (i, j, g) in enumerate(endo.basis_maps):
        src, tgt = homs[j], homs[i]
        if src.dim == 0 or tgt.dim == 0:
            continue
        images = np.stack([F.matmul(phi, g).reshape(-1) for phi in src.basis], axis=1)
        coords = F.solve(tgt.flat(), images)
        if coords is None:
            raise CertificateError("Hom(X, M) 在预复合下不封闭")
        action[k, offsets[i]:offsets[i + 1], offsets[j]:offsets[j + 1]] = coords
    return Module(Gamma, action, name or f"F({M.name})"), homs


def apply_F(endo, M: Module, name: str = "") -> Module:
    return apply_F_with_bases(endo, M, name)[0]


def apply_F_map(f: Matrix, source_homs: Sequence[HomSpace], target_homs: Sequence[HomSpace]) -> Matrix:
    """F(f): F(M) → F(N)，φ ↦ f∘φ"""
    blocks = []
    for hM, hN in zip(source_homs, target_homs):
        F = hM.source.field
        if hM.dim == 0 or hN.dim == 0:
            blocks.append(F.zeros(hN.dim, hM.dim))
            continue
        images = np.stack([F.matmul(f, phi).reshape(-1) for phi in hM.basis], axis=1)
        coords = F.solve(hN.flat(), images)
        if coords is None:
            raise CertificateError("F(f) 不落在 Hom(X, N) 中")
        blocks.append(coords)
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    result = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        result[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return result


def apply_G(Gamma: BasedAlgebra, subset: Sequence[int], N: Module,
            corner_data: Optional[Tuple[BasedAlgebra, Matrix]] = None, name: str = "") -> Module:
    """G(N) = e·N，作为角代数 eΓe 上的模"""
    subset = normalize_subset(Gamma, subset)
    C, E = corner_data if corner_data is not None else corner(Gamma, subset)
    idx = _corner_indices(N, subset)
    action = np.stack([N.act(E[:, a])[np.ix_(idx, idx)] for a in range(C.dim)])
    return Module(C, action, name or f"G({N.name})")


def _corner_indices(N: Module, subset: Sequence[int]) -> np.ndarray:
    parts = [N.block_indices(i) for i in subset]
    return np.concatenate(parts).astype(int) if parts else np.zeros(0, dtype=int)


def apply_G_map(subset: Sequence[int], N: Module, N2: Module, g: Matrix) -> Matrix:
    """G(g) 即 g 在 e 分块上的限制"""
    return np.asarray(g)[np.ix_(_corner_indices(N2, subset), _corner_indices(N, subset))]
