"""
同调代数模块
极小投射/内射分解、Ext维数、整体维数、控制维数、P_k 判定，
以及迹理想相关的两个验证（Ext消失条件的等价性、函子G诱导的Ext同构）
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from algebra import BasedAlgebra, corner, normalize_subset, opposite, quotient_algebra, trace_ideal
from linalg import Matrix
from modcat import (
    Module, ModuleMap, apply_G, direct_sum, dualize, hom_basis, injective, kernel_module,
    map_from_projective, projective, projective_injective_vertices, radical_submodule,
    regular, restrict_scalars, simple, socle_vertices, top_generators, zero_module,
)
from utils import CertificateError, TruncationError

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 20

PROJECTIVE = "projective"
INJECTIVE = "injective"


@dataclass
class DimensionResult:
    """精确值或截断下界"""
    kind: str
    value: int
    cutoff: Optional[int] = None

    @classmethod
    def exact(cls, value: int, cutoff: Optional[int] = None) -> "DimensionResult":
        return cls("exact", value, cutoff)

    @classmethod
    def at_least(cls, value: int, cutoff: int) -> "DimensionResult":
        return cls("at-least", value, cutoff)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def __str__(self) -> str:
        return f"= {self.value}" if self.is_exact else f">= {self.value}"


@dataclass
class Resolution:
    """
    极小分解

    投射方向: differentials[0]: P_0 → M，differentials[i]: P_i → P_{i-1}；
    syzygies[i] 为 Ω^i（syzygies[0] = M），inclusions[i-1]: Ω^i → P_{i-1}。
    内射方向各映射反向：differentials[0]: M → I_0，differentials[i]: I_{i-1} → I_i，
    inclusions[i-1] 为 I_{i-1} → 余合冲 的投影。
    """
    direction: str
    base: Module
    terms: List[Module]
    differentials: List[Matrix]
    syzygies: List[Module]
    inclusions: List[Matrix]
    multiplicities: List[List[int]]
    cutoff: int
    truncated: bool
    minimal: bool = True

    @property
    def length(self) -> int:
        return max(len(self.terms) - 1, 0)

    def term_dims(self) -> List[int]:
        return [t.dim for t in self.terms]

    def verify(self) -> "Resolution":
        """逐个接合处用秩检验正合性"""
        if self.direction == INJECTIVE:
            return self
        F = self.base.field
        if not self.terms:
            if self.base.dim:
                raise CertificateError("非零模的分解没有项")
            return self
        if F.rank(self.differentials[0]) != self.base.dim:
            raise CertificateError("P_0 → M 不是满射")
        for i, term in enumerate(self.terms):
            d_i = self.differentials[i]
            if i + 1 < len(self.terms):
                d_next = self.differentials[i + 1]
                if np.any(F.matmul(d_i, d_next)):
                    raise CertificateError(f"d_{i}∘d_{i + 1} ≠ 0")
                expected = term.dim - F.rank(d_i)
                if F.rank(d_next) != expected:
                    raise CertificateError(f"分解在 P_{i} 处不正合")
            else:
                tail = self.syzygies[i + 1].dim if i + 1 < len(self.syzygies) else 0
                if term.dim - F.rank(d_i) != tail:
                    raise CertificateError(f"末项 P_{i} 的核维数与合冲不符")
        return self


@dataclass
class _Cover:
    map: ModuleMap
    vertices: List[int]
    kernel: Module
    inclusion: Matrix


def _cover(M: Module) -> _Cover:
    A = M.algebra
    F = A.field
    gens = top_generators(M)
    if not gens:
        P = zero_module(A)
        return _Cover(ModuleMap(P, M, F.zeros(M.dim, 0)), [], P, F.zeros(0, 0))
    P, _, projections = direct_sum([projective(A, v) for v, _ in gens], A)
    pi = F.zeros(M.dim, P.dim)
    for (v, m), proj in zip(gens, projections):
        pi = np.mod(pi + F.matmul(map_from_projective(A, v, M, m), proj), F.p)
    if F.rank(pi) != M.dim:
        raise CertificateError(f"{M.name} 的投射覆盖不是满射")
    K, inc = kernel_module(P, pi)
    if K.dim and not F.in_column_space(radical_submodule(P), inc):
        raise CertificateError(f"{M.name} 的投射覆盖不是极小的")
    return _Cover(ModuleMap(P, M, pi), [v for v, _ in gens], K, inc)


def projective_cover(M: Module) -> ModuleMap:
    """极小投射覆盖 ⊕ P(v)^{m_v} ↠ M"""
    return _cover(M).map


def injective_envelope(M: Module) -> ModuleMap:
    """内射包 M ↪ ⊕ I(v)^{m_v}，经由反代数上的投射覆盖对偶得到"""
    Aop = opposite(M.algebra)
    cover = projective_cover(dualize(M, Aop))
    I = dualize(cover.source, M.algebra)
    return ModuleMap(M, I, cover.matrix.T.copy())


def _counts(vertices: Sequence[int], k: int) -> List[int]:
    counts = [0] * k
    for v in vertices:
        counts[v] += 1
    return counts


def min_resolution(M: Module, direction: str = PROJECTIVE, cutoff: int = DEFAULT_CUTOFF) -> Resolution:
    """
    极小投射或内射分解

    Args:
        M: 模
        direction: projective 或 injective
        cutoff: 最多计算 P_0..P_cutoff；若 Ω^{cutoff+1} ≠ 0 则标记为截断
    """
    if cutoff < 0:
        raise ValueError(f"cutoff 不能为负: {cutoff}")
    if direction == INJECTIVE:
        dual = min_resolution(dualize(M, opposite(M.algebra)), PROJECTIVE, cutoff)
        return _dual_resolution(dual, M)
    if direction != PROJECTIVE:
        raise ValueError(f"未知的分解方向: {direction}")

    F = M.field
    k = M.algebra.num_vertices
    terms, diffs, syzygies, inclusions, mults = [], [], [M], [], []
    current = M
    for i in range(cutoff + 1):
        if current.dim == 0:
            break
        cover = _cover(current)
        P = cover.map.source
        P.name = f"P_{i}"
        d = cover.map.matrix if i == 0 else F.matmul(inclusions[-1], cover.map.matrix)
        cover.kernel.name = f"Ω{i + 1}({M.name})"
        terms.append(P)
        diffs.append(d)
        mults.append(_counts(cover.vertices, k))
        syzygies.append(cover.kernel)
        inclusions.append(cover.inclusion)
        current = cover.kernel
    truncated = current.dim != 0
    logger.debug(f"{M.name} 的极小投射分解项维数 {[t.dim for t in terms]}，截断={truncated}")
    return Resolution(PROJECTIVE, M, terms, diffs, syzygies, inclusions, mults, cutoff, truncated).verify()


def _dual_resolution(res: Resolution, M: Module) -> Resolution:
    A = M.algebra
    terms = [dualize(t, A) for t in res.terms]
    for i, t in enumerate(terms):
        t.name = f"I_{i}"
    syzygies = [M] + [dualize(s, A) for s in res.syzygies[1:]]
    return Resolution(
        direction=INJECTIVE, base=M, terms=terms,
        differentials=[d.T.copy() for d in res.differentials],
        syzygies=syzygies,
        inclusions=[inc.T.copy() for inc in res.inclusions],
        multiplicities=res.multiplicities, cutoff=res.cutoff, truncated=res.truncated,
    )


# ----------------------------------------------------------------------
# Ext 与维数
# ----------------------------------------------------------------------

def ext_dim(i: int, M: Module, N: Module, cutoff: Optional[int] = None,
            resolution: Optional[Resolution] = None) -> int:
    """
    dim Ext^i(M, N) = dim Hom(Ω^i M, N) − rank(Hom(P_{i-1}, N) → Hom(Ω^i M, N))
    """
    if i < 0:
        raise ValueError(f"Ext 次数不能为负: {i}")
    if i == 0:
        return hom_basis(M, N).dim
    F = M.field
    res = resolution or min_resolution(M, PROJECTIVE, max(cutoff if cutoff is not None else i, i - 1))
    if i >= len(res.syzygies):
        if res.truncated:
            raise TruncationError(f"分解在 {res.cutoff} 处截断，计算 Ext^{i} 需要 cutoff ≥ {i - 1}")
        return 0
    omega = res.syzygies[i]
    if omega.dim == 0:
        return 0
    h_omega = hom_basis(omega, N)
    if h_omega.dim == 0:
        return 0
    h_prev = hom_basis(res.terms[i - 1], N)
    if h_prev.dim == 0:
        return h_omega.dim
    restricted = np.stack([F.matmul(psi, res.inclusions[i - 1]).reshape(-1) for psi in h_prev.basis], axis=1)
    return h_omega.dim - F.rank(restricted)


def projective_dimension(M: Module, cutoff: int = DEFAULT_CUTOFF) -> DimensionResult:
    res = min_resolution(M, PROJECTIVE, cutoff)
    if res.truncated:
        return DimensionResult.at_least(cutoff, cutoff)
    return DimensionResult.exact(res.length, cutoff)


def global_dimension(A: BasedAlgebra, cutoff: int = DEFAULT_CUTOFF) -> DimensionResult:
    """各单模投射维数的最大值"""
    best = 0
    for v in range(A.num_vertices):
        pd = projective_dimension(simple(A, v), cutoff)
        if not pd.is_exact:
            return DimensionResult.at_least(cutoff, cutoff)
        best = max(best, pd.value)
    return DimensionResult.exact(best, cutoff)


def _leading_segment(res: Resolution, allowed: Sequence[int], cutoff: int) -> DimensionResult:
    allowed = set(allowed)
    for i, counts in enumerate(res.multiplicities):
        if any(c and v not in allowed for v, c in enumerate(counts)):
            return DimensionResult.exact(i, cutoff)
    return DimensionResult.at_least(cutoff, cutoff)


def dominant_dimension(A: BasedAlgebra, cutoff: int = DEFAULT_CUTOFF) -> DimensionResult:
    """
    控制维数：DA 的极小投射分解中开头连续的投射-内射项个数

    出现非投射-内射项时为精确值；分解终止或到达截断时给出下界
    """
    DA = dualize(regular(opposite(A)), A)
    res = min_resolution(DA, PROJECTIVE, cutoff)
    return _leading_segment(res, projective_injective_vertices(A), cutoff)


def dominant_dimension_via_injective(A: BasedAlgebra, cutoff: int = DEFAULT_CUTOFF) -> DimensionResult:
    """控制维数：正则模的极小内射分解中开头连续的投射-内射项个数"""
    res = min_resolution(regular(A), INJECTIVE, cutoff)
    return _leading_segment(res, socle_vertices(A), cutoff)


# ----------------------------------------------------------------------
# P_k 与迹理想相关的验证
# ----------------------------------------------------------------------

def pk_membership(A: BasedAlgebra, subset: Sequence[int], M: Module, k: int,
                  resolution: Optional[Resolution] = None) -> bool:
    """
    极小投射分解的前 k+1 项是否都属于 add(Ae)

    传入的分解不是极小投射分解或截断过早时重新计算
    """
    subset = set(normalize_subset(A, subset, allow_empty=True))
    usable = (resolution is not None and resolution.minimal
              and resolution.direction == PROJECTIVE and resolution.cutoff >= k)
    res = resolution if usable else min_resolution(M, PROJECTIVE, k)
    for counts in res.multiplicities[:k + 1]:
        if any(c and v not in subset for v, c in enumerate(counts)):
            return False
    return True


@dataclass
class AptReport:
    subset: List[int]
    module: str
    d: int
    projective_condition: bool
    ext_condition: bool
    injective_condition: bool
    failures: List[Tuple[int, str]] = dc_field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.projective_condition == self.ext_condition == self.injective_condition


def _quotient_test_modules(A: BasedAlgebra, subset: Sequence[int]):
    """A/AeA 的单模与内射模，沿商映射看作 A-模"""
    I = trace_ideal(A, subset)
    if I.shape[1] == A.dim:
        return [], []
    Q, proj = quotient_algebra(A, I)
    simples = [restrict_scalars(simple(Q, v), A, proj) for v in range(Q.num_vertices)]
    injectives = [restrict_scalars(injective(Q, v), A, proj) for v in range(Q.num_vertices)]
    for k, (s, j) in enumerate(zip(simples, injectives)):
        s.name, j.name = f"S'{k + 1}", f"I'{k + 1}"
    return simples, injectives


def verify_apt_equivalence(A: BasedAlgebra, subset: Sequence[int], M: Module, d: int,
                           cutoff: Optional[int] = None) -> AptReport:
    """
    比较三个条件：
    (i) M ∈ P_{d-1}；
    (ii) 对 A/AeA 的所有单模和内射模 Y，0 ≤ i < d 时 Ext^i(M, Y) = 0；
    (iii) 同 (ii) 但只取内射模
    """
    if d < 1:
        raise ValueError(f"d 必须 ≥ 1，得到 {d}")
    subset = normalize_subset(A, subset, allow_empty=True)
    res = min_resolution(M, PROJECTIVE, max(d, cutoff or 0))
    cond_i = pk_membership(A, subset, M, d - 1, res)
    simples, injectives = _quotient_test_modules(A, subset)
    failures = []
    for Y in simples + injectives:
        for i in range(d):
            if ext_dim(i, M, Y, resolution=res):
                failures.append((i, Y.name))
    inj_names = {Y.name for Y in injectives}
    report = AptReport(subset, M.name, d, cond_i, not failures,
                       not any(name in inj_names for _, name in failures), failures)
    if not report.agree:
        logger.warning(f"条件不一致: e={[v + 1 for v in subset]} M={M.name} d={d}")
    return report


def sweep_apt_equivalence(A: BasedAlgebra, ds: Sequence[int] = (1, 2, 3), cutoff: Optional[int] = None,
                          progress: bool = False) -> List[AptReport]:
    """对所有单模、所有非空幂等元子集和给定的 d 检验等价性"""
    k = A.num_vertices
    subsets = [list(c) for r in range(1, k + 1) for c in itertools.combinations(range(k), r)]
    simples = [simple(A, v) for v in range(k)]
    jobs = [(s, M, d) for s in subsets for M in simples for d in ds]
    reports = []
    for s, M, d in tqdm(jobs, desc="验证等价条件", disable=not progress):
        reports.append(verify_apt_equivalence(A, s, M, d, cutoff))
    logger.info(f"共 {len(reports)} 个实例，不一致 {sum(not r.agree for r in reports)} 个")
    return reports


@dataclass
class ExtIsoReport:
    subset: List[int]
    d: int
    hypothesis: bool
    rows: List[Tuple[int, int, int]]

    @property
    def passed(self) -> Optional[bool]:
        if not self.hypothesis:
            return None
        return all(a == b for _, a, b in self.rows)

    @property
    def outcome(self) -> str:
        if not self.hypothesis:
            return "hypothesis not met"
        return "pass" if self.passed else "fail"


def verify_ext_iso(Gamma: BasedAlgebra, subset: Sequence[int], X: Module, Y: Module, d: int,
                   cutoff: Optional[int] = None,
                   corner_data: Optional[Tuple[BasedAlgebra, Matrix]] = None) -> ExtIsoReport:
    """
    X ∈ P_d 时比较 0 ≤ i ≤ d-1 的 dim Ext^i_Γ(X, Y) 与 dim Ext^i_{eΓe}(GX, GY)
    """
    subset = normalize_subset(Gamma, subset)
    res = min_resolution(X, PROJECTIVE, max(d, cutoff or 0))
    if not pk_membership(Gamma, subset, X, d, res):
        return ExtIsoReport(subset, d, False, [])
    corner_data = corner_data or corner(Gamma, subset)
    GX = apply_G(Gamma, subset, X, corner_data)
    GY = apply_G(Gamma, subset, Y, corner_data)
    res_G = min_resolution(GX, PROJECTIVE, max(d, cutoff or 0))
    rows = []
    for i in range(d):
        rows.append((i, ext_dim(i, X, Y, resolution=res), ext_dim(i, GX, GY, resolution=res_G)))
    return ExtIsoReport(subset, d, True, rows)
