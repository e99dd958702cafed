"""
倾斜理论模块
自同态代数、右/左逼近、c-分解、d-Auslander判定、d-丛倾斜判定，
以及 X ↦ End(X) 对应的反向构造与往返验证
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra import BasedAlgebra, corner, opposite
from homology import (
    DEFAULT_CUTOFF, DimensionResult, dominant_dimension, ext_dim, global_dimension, min_resolution,
)
from linalg import Matrix
from modcat import (
    DEFAULT_BUDGET, HomSpace, Module, ModuleMap, apply_F_with_bases, apply_G, apply_G_map, basic_summands,
    cogenerator, decompose, direct_sum, dualize, hom_basis, in_add, indecomposable_isomorphism, injective,
    kernel_module, projective, projective_basis, regular, simple, socle_vertices, top_generators,
)
from utils import CertificateError, Decision, NotClusterTiltingError, PreconditionError

logger = logging.getLogger(__name__)

RIGHT = "right"
LEFT = "left"


# ----------------------------------------------------------------------
# 自同态代数
# ----------------------------------------------------------------------

def _with_identity(H: HomSpace) -> List[Matrix]:
    """把恒等映射放在 End(X_i) 基的首位"""
    F = H.source.field
    ident = F.identity(H.source.dim)
    candidates = np.stack([ident.reshape(-1)] + [b.reshape(-1) for b in H.basis], axis=1)
    _, pivots = F.rref(candidates)
    if 0 not in pivots:
        raise CertificateError("自同态空间不含恒等映射")
    return [candidates[:, c].reshape(H.source.dim, H.source.dim) for c in pivots]


@dataclass(eq=False)
class EndomorphismAlgebra:
    """
    Γ = End(X)，X = ⊕ summands

    Γ 的第 k 个基元素对应 basis_maps[k] = (i, j, X_i → X_j 的矩阵)，
    乘法从左到右复合：γ·δ = δ∘γ
    """
    summands: List[Module]
    algebra: BasedAlgebra
    basis_maps: List[Tuple[int, int, Matrix]]
    hom_spaces: Dict[Tuple[int, int], HomSpace]
    offsets: Dict[Tuple[int, int], int]
    _dual: Optional["EndomorphismAlgebra"] = dc_field(default=None, repr=False)
    _positions: Dict[str, Dict[int, Tuple[int, Matrix]]] = dc_field(default_factory=dict, repr=False)

    @property
    def base(self) -> BasedAlgebra:
        return self.summands[0].algebra

    def embed(self, i: int, j: int, phi: Matrix) -> np.ndarray:
        """Hom(X_i, X_j) 中的映射在 Γ 基下的坐标"""
        coords = self.hom_spaces[(i, j)].coordinates(phi)
        if coords is None:
            raise CertificateError(f"映射不属于 Hom(X{i + 1}, X{j + 1})")
        vec = np.zeros(self.algebra.dim, dtype=np.int64)
        start = self.offsets[(i, j)]
        vec[start:start + len(coords)] = coords
        return vec

    def position_of(self, M: Module) -> Optional[Tuple[int, Matrix]]:
        """与不可分解模 M 同构的直和项下标及同构 M → X_i"""
        for i, X in enumerate(self.summands):
            theta = indecomposable_isomorphism(M, X)
            if theta is not None:
                return i, theta
        return None

    def projective_positions(self) -> Dict[int, Tuple[int, Matrix]]:
        """每个 P(v) 对应的直和项，缺少时报错"""
        if "projective" in self._positions:
            return self._positions["projective"]
        positions = {}
        for v in range(self.base.num_vertices):
            found = self.position_of(projective(self.base, v))
            if found is None:
                raise PreconditionError(f"投射模 P{v + 1} 不在 add(X) 中，右逼近需要 Λ ∈ add(X)")
            positions[v] = found
        self._positions["projective"] = positions
        return positions

    def injective_positions(self) -> Dict[int, Tuple[int, Matrix]]:
        """每个 I(v) 对应的直和项，缺少时报错"""
        if "injective" in self._positions:
            return self._positions["injective"]
        positions = {}
        for v in range(self.base.num_vertices):
            found = self.position_of(injective(self.base, v))
            if found is None:
                raise PreconditionError(f"内射模 I{v + 1} 不在 add(X) 中，左逼近需要 DΛ ∈ add(X)")
            positions[v] = found
        self._positions["injective"] = positions
        return positions

    def dual(self) -> "EndomorphismAlgebra":
        """D X 在反代数上的自同态代数"""
        if self._dual is None:
            Aop = opposite(self.base)
            self._dual = endo_algebra_of_summands([dualize(X, Aop) for X in self.summands])
        return self._dual


def endo_algebra_of_summands(summands: Sequence[Module]) -> EndomorphismAlgebra:
    """由两两不同构的不可分解模构造 End(⊕ X_i)"""
    summands = list(summands)
    if not summands:
        raise PreconditionError("X 不能为零模")
    F = summands[0].field
    k = len(summands)
    hom_spaces, offsets, basis_maps, labels = {}, {}, [], []
    idem_positions = []
    for i in range(k):
        for j in range(k):
            H = hom_basis(summands[i], summands[j])
            if i == j:
                H = HomSpace(H.source, H.target, _with_identity(H))
                idem_positions.append(len(basis_maps))
            hom_spaces[(i, j)] = H
            offsets[(i, j)] = len(basis_maps)
            for t, phi in enumerate(H.basis):
                basis_maps.append((i, j, phi))
                labels.append(f"e{i + 1}" if i == j and t == 0 else f"g{i + 1}_{j + 1}_{t + 1}")
    n = len(basis_maps)
    structure = np.zeros((n, n, n), dtype=np.int64)
    for a, (i, j, g) in enumerate(basis_maps):
        for b, (j2, l, h) in enumerate(basis_maps):
            if j2 != j:
                continue
            coords = hom_spaces[(i, l)].coordinates(F.matmul(h, g))
            if coords is None:
                raise CertificateError("复合映射不在 Hom 空间中")
            start = offsets[(i, l)]
            structure[a, b, start:start + len(coords)] = coords
    idempotents = np.zeros((k, n), dtype=np.int64)
    for r, pos in enumerate(idem_positions):
        idempotents[r, pos] = 1
    Gamma = BasedAlgebra(F, labels, structure, idempotents).validate()
    logger.debug(f"自同态代数维数 {n}，直和项 {k} 个")
    return EndomorphismAlgebra(summands, Gamma, basis_maps, hom_spaces, offsets)


def endo_algebra(X: Module, seed: int = 0, budget: int = DEFAULT_BUDGET) -> EndomorphismAlgebra:
    """Γ = End(X)，先把 X 化为基本形式"""
    return endo_algebra_of_summands(basic_summands(X, seed, budget))


# ----------------------------------------------------------------------
# 逼近
# ----------------------------------------------------------------------

@dataclass
class Approximation:
    map: ModuleMap
    indices: List[int]
    certificates: Dict[str, bool]


def _hom_image_rank(F, maps: Sequence[Matrix]) -> int:
    if not maps:
        return 0
    return F.rank(np.stack([m.reshape(-1) for m in maps], axis=1))


def right_approximation(endo: EndomorphismAlgebra, M: Module) -> Approximation:
    """
    极小右 add(X)-逼近 C_M → M

    取 F(M) 的投射覆盖，经 add(X) ≃ proj Γ 搬回
    """
    endo.projective_positions()
    F = M.field
    FM, homs = apply_F_with_bases(endo, M)
    gens = top_generators(FM)
    offsets = FM.offsets()
    indices, maps = [], []
    for i, vec in gens:
        coords = vec[offsets[i]:offsets[i + 1]]
        indices.append(i)
        maps.append(homs[i].combine(coords))
    C, _, projections = direct_sum([endo.summands[i] for i in indices], endo.base, name="C")
    f = F.zeros(M.dim, C.dim)
    for phi, proj in zip(maps, projections):
        f = np.mod(f + F.matmul(phi, proj), F.p)
    certificates = {"surjective": F.rank(f) == M.dim}
    for j, X in enumerate(endo.summands):
        target = homs[j]
        images = [F.matmul(f, psi) for psi in hom_basis(X, C).basis]
        certificates[f"Hom(X{j + 1},-) surjective"] = _hom_image_rank(F, images) == target.dim
    if not all(certificates.values()):
        failed = [k for k, v in certificates.items() if not v]
        raise CertificateError(f"{M.name} 的右逼近证书失败: {failed}")
    return Approximation(ModuleMap(C, M, f), indices, certificates)


def left_approximation(endo: EndomorphismAlgebra, M: Module) -> Approximation:
    """极小左 add(X)-逼近 M → C^M，由反代数上的右逼近对偶得到"""
    endo.injective_positions()
    dual = endo.dual()
    approx = right_approximation(dual, dualize(M, dual.base))
    F = M.field
    C = dualize(approx.map.source, M.algebra)
    f = approx.map.matrix.T.copy()
    certificates = {"injective": F.rank(f) == M.dim}
    for j, X in enumerate(endo.summands):
        images = [F.matmul(psi, f) for psi in hom_basis(C, X).basis]
        certificates[f"Hom(-,X{j + 1}) surjective"] = _hom_image_rank(F, images) == hom_basis(M, X).dim
    if not all(certificates.values()):
        failed = [k for k, v in certificates.items() if not v]
        raise CertificateError(f"{M.name} 的左逼近证书失败: {failed}")
    return Approximation(ModuleMap(M, C, f), approx.indices, certificates)


# ----------------------------------------------------------------------
# c-分解
# ----------------------------------------------------------------------

@dataclass
class CResolution:
    """
    右方向: 0 → C_n → … → C_0 → M → 0，maps[0]: C_0 → M，maps[s]: C_s → C_{s-1}；
    左方向: 0 → M → C_0 → … → C_n → 0，maps[0]: M → C_0，maps[s]: C_{s-1} → C_s
    """
    base: Module
    direction: str
    d: int
    terms: List[Module]
    maps: List[Matrix]
    term_indices: List[List[int]]
    certificates: Dict[str, bool]

    @property
    def length(self) -> int:
        return max(len(self.terms) - 1, 0)

    @property
    def passed(self) -> bool:
        return all(self.certificates.values())


def _exact_chain(F, dims: Sequence[int], maps: Sequence[Matrix]) -> bool:
    """0 → V_n → … → V_0 → V_{-1} → 0 的正合性，dims 从 V_{-1} 开始"""
    if not maps:
        return dims[0] == 0
    if F.rank(maps[0]) != dims[0]:
        return False
    for s in range(len(maps) - 1):
        if np.any(F.matmul(maps[s], maps[s + 1])):
            return False
        if F.rank(maps[s + 1]) != dims[s + 1] - F.rank(maps[s]):
            return False
    return F.rank(maps[-1]) == dims[-1]


def _induced(F, H_src: HomSpace, H_tgt: HomSpace, g: Matrix) -> Matrix:
    """Hom(X, g): ψ ↦ g∘ψ 在给定基下的矩阵"""
    if H_src.dim == 0 or H_tgt.dim == 0:
        return F.zeros(H_tgt.dim, H_src.dim)
    images = np.stack([F.matmul(g, psi).reshape(-1) for psi in H_src.basis], axis=1)
    coords = F.solve(H_tgt.flat(), images)
    if coords is None:
        raise CertificateError("诱导映射不落在目标 Hom 空间中")
    return coords


def _term_indices(endo: EndomorphismAlgebra, C: Module) -> List[int]:
    indices = []
    for part, mult in decompose(C):
        found = endo.position_of(part)
        indices.extend([found[0]] * mult)
    return sorted(indices)


def _right_c_resolution(endo: EndomorphismAlgebra, M: Module, d: int) -> CResolution:
    F = M.field
    terms, maps, indices = [], [], []
    current, inc = M, None
    for _ in range(d - 1):
        if current.dim == 0:
            break
        approx = right_approximation(endo, current)
        C, f = approx.map.source, approx.map.matrix
        maps.append(f if inc is None else F.matmul(inc, f))
        terms.append(C)
        indices.append(sorted(approx.indices))
        current, inc = kernel_module(C, f)
    if current.dim:
        if not in_add(current, endo.summands):
            raise NotClusterTiltingError(
                f"{M.name} 的第 {d - 1} 个逼近核不在 add(X) 中，X 在 {M.name} 处不是 {d}-丛倾斜的",
                witness=current)
        maps.append(F.identity(M.dim) if inc is None else inc)
        terms.append(current)
        indices.append(_term_indices(endo, current))

    dims = [M.dim] + [C.dim for C in terms]
    certificates = {
        "exact": _exact_chain(F, dims, maps),
        "add(X)": all(in_add(C, endo.summands) for C in terms),
        "length": len(terms) - 1 <= d - 1,
    }
    hom_exact = True
    for X in endo.summands:
        spaces = [hom_basis(X, M)] + [hom_basis(X, C) for C in terms]
        induced = [_induced(F, spaces[s + 1], spaces[s], g) for s, g in enumerate(maps)]
        hom_exact = hom_exact and _exact_chain(F, [h.dim for h in spaces], induced)
    certificates["Hom(X,-) exact"] = hom_exact
    return CResolution(M, RIGHT, d, terms, maps, indices, certificates)


def c_resolution(endo: EndomorphismAlgebra, M: Module, d: int, direction: str = RIGHT) -> CResolution:
    """
    迭代逼近构造的 add(X)-分解

    右方向需要 Λ ∈ add(X)，左方向需要 DΛ ∈ add(X)；
    第 d-1 步的核不在 add(X) 中时抛出 NotClusterTiltingError
    """
    if d < 1:
        raise ValueError(f"d 必须 ≥ 1，得到 {d}")
    if direction == RIGHT:
        result = _right_c_resolution(endo, M, d)
    elif direction == LEFT:
        endo.injective_positions()
        dual = endo.dual()
        res = _right_c_resolution(dual, dualize(M, dual.base), d)
        terms = [dualize(C, M.algebra) for C in res.terms]
        certificates = {k.replace("Hom(X,-)", "Hom(-,X)"): v for k, v in res.certificates.items()}
        result = CResolution(M, LEFT, d, terms, [g.T.copy() for g in res.maps], res.term_indices, certificates)
    else:
        raise ValueError(f"未知方向: {direction}")
    if not result.passed:
        failed = [k for k, v in result.certificates.items() if not v]
        raise CertificateError(f"{M.name} 的 c-分解证书失败: {failed}")
    logger.info(f"{M.name} 的{direction} c-分解长度 {result.length}，各项维数 {[C.dim for C in result.terms]}")
    return result


# ----------------------------------------------------------------------
# d-Auslander 与 d-丛倾斜判定
# ----------------------------------------------------------------------

@dataclass
class AuslanderVerdict:
    gl_dim: DimensionResult
    dom_dim: DimensionResult
    d: int
    verdict: Decision


def is_d_auslander(Gamma: BasedAlgebra, d: int, cutoff: int = DEFAULT_CUTOFF) -> AuslanderVerdict:
    """dom.dim Γ ≥ d+1 ≥ gl.dim Γ"""
    gl = global_dimension(Gamma, cutoff)
    dom = dominant_dimension(Gamma, cutoff)
    target = d + 1
    if dom.is_exact and dom.value < target:
        verdict = Decision.FALSE
    elif gl.value > target:
        verdict = Decision.FALSE
    elif not gl.is_exact:
        verdict = Decision.UNKNOWN
    elif dom.value < target:
        verdict = Decision.UNKNOWN
    else:
        verdict = Decision.TRUE
    if verdict is Decision.UNKNOWN:
        logger.warning(f"d-Auslander 判定无法完成: gl.dim {gl}, dom.dim {dom}，可尝试增大 cutoff")
    return AuslanderVerdict(gl, dom, d, verdict)


@dataclass
class CTCandidate:
    algebra: BasedAlgebra
    module: Module
    summands: List[Module]
    contains_regular: bool
    contains_cogenerator: bool
    rigidity_checked: int
    missing: List[str] = dc_field(default_factory=list)


def ct_candidate(X: Module, d: int, seed: int = 0, budget: int = DEFAULT_BUDGET) -> CTCandidate:
    summands = basic_summands(X, seed, budget)
    A = X.algebra
    missing = []
    for v in range(A.num_vertices):
        if not any(indecomposable_isomorphism(projective(A, v), S) is not None for S in summands):
            missing.append(f"P{v + 1}")
    has_regular = not missing
    for v in range(A.num_vertices):
        if not any(indecomposable_isomorphism(injective(A, v), S) is not None for S in summands):
            missing.append(f"I{v + 1}")
    has_cogenerator = not any(m.startswith("I") for m in missing)
    return CTCandidate(A, X, summands, has_regular, has_cogenerator, d - 1, missing)


@dataclass
class CTVerdict:
    decision: Decision
    evidence: List[str]
    checks: Dict[str, Decision]
    candidate: CTCandidate


def rigidity_evidence(summands: Sequence[Module], d: int) -> List[str]:
    """0 < i < d 时 Ext^i(X_a, X_b) 的非零项"""
    evidence = []
    resolutions = [min_resolution(S, cutoff=max(d - 1, 0)) for S in summands]
    for a, Xa in enumerate(summands):
        for b, Xb in enumerate(summands):
            for i in range(1, d):
                n = ext_dim(i, Xa, Xb, resolution=resolutions[a])
                if n:
                    evidence.append(f"Ext^{i}({Xa.name}, {Xb.name}) = {n}")
    return evidence


def is_cluster_tilting(X: Module, d: int, mode: str = "criterion",
                       candidates: Optional[Sequence[Module]] = None,
                       cutoff: int = DEFAULT_CUTOFF, seed: int = 0) -> CTVerdict:
    """
    d-丛倾斜判定

    criterion: 生成-余生成 + Ext刚性 + End(X) 是 d-Auslander 代数；
    enumerated: 生成-余生成 + Ext刚性 + 在给定不可分解模列表上直接检验两个极大性条件
    """
    if d < 1:
        raise ValueError(f"d 必须 ≥ 1，得到 {d}")
    cand = ct_candidate(X, d, seed)
    evidence = [f"{m} ∉ add(X)" for m in cand.missing]
    checks = {"generator-cogenerator": Decision.of(not cand.missing)}
    rigid = rigidity_evidence(cand.summands, d)
    evidence.extend(rigid)
    checks["rigid"] = Decision.of(not rigid)
    if mode == "criterion":
        endo = endo_algebra_of_summands(cand.summands)
        verdict = is_d_auslander(endo.algebra, d, cutoff)
        checks["d-Auslander"] = verdict.verdict
        if verdict.verdict is not Decision.TRUE:
            evidence.append(f"End(X): gl.dim {verdict.gl_dim}, dom.dim {verdict.dom_dim}")
    elif mode == "enumerated":
        if candidates is None:
            raise ValueError("enumerated 模式需要不可分解模列表")
        maximal = True
        for Y in candidates:
            if any(indecomposable_isomorphism(Y, S) is not None for S in cand.summands):
                continue
            res_Y = min_resolution(Y, cutoff=max(d - 1, 0))
            left = any(ext_dim(i, S, Y, cutoff=d - 1) for S in cand.summands for i in range(1, d))
            right = any(ext_dim(i, Y, S, resolution=res_Y) for S in cand.summands for i in range(1, d))
            if not left or not right:
                maximal = False
                side = "Ext(X, Y)" if not left else "Ext(Y, X)"
                evidence.append(f"{Y.name} ∉ add(X) 但 {side} 在 1..{d - 1} 次消失")
        checks["maximal"] = Decision.of(maximal)
    else:
        raise ValueError(f"未知模式: {mode}")
    return CTVerdict(Decision.all_of(checks.values()), evidence, checks, cand)


# ----------------------------------------------------------------------
# 反向构造: Γ ↦ (eΓe, G(Γ))
# ----------------------------------------------------------------------

@dataclass
class RecoveredCT:
    gamma: BasedAlgebra
    d: int
    subset: List[int]
    corner: BasedAlgebra
    embedding: Matrix
    summands: List[Module]
    module: Module
    verdict: AuslanderVerdict
    certificates: Dict[str, Decision]

    @property
    def passed(self) -> bool:
        return Decision.all_of(self.certificates.values()) is Decision.TRUE


def recover_ct(Gamma: BasedAlgebra, d: int, cutoff: int = DEFAULT_CUTOFF, seed: int = 0) -> RecoveredCT:
    """
    由 d-Auslander 代数 Γ 恢复 (Λ′, X′)

    e 取内射包络为投射模的顶点，P = ⊕ I(i) 是基本的投射-内射生成元，
    Λ′ = eΓe，X′ = e·Γ 按 Γ 的不可分解投射模分成直和项
    """
    verdict = is_d_auslander(Gamma, d, cutoff)
    if verdict.verdict is Decision.FALSE:
        raise PreconditionError(
            f"Γ 不是 {d}-Auslander 代数: gl.dim {verdict.gl_dim}, dom.dim {verdict.dom_dim}")
    subset = socle_vertices(Gamma)
    if not subset:
        raise PreconditionError("Γ 没有投射-内射模，dom.dim ≥ 1 不成立")
    corner_alg, E = corner(Gamma, subset)
    summands = [
        apply_G(Gamma, subset, projective(Gamma, i), (corner_alg, E), name=f"X'{i + 1}")
        for i in range(Gamma.num_vertices)
    ]
    module = direct_sum(summands, corner_alg, name="X'")[0]
    certificates = {
        "rigid": Decision.of(not rigidity_evidence(summands, d)),
        "regular ∈ add(X')": Decision.of(in_add(regular(corner_alg), summands, seed)),
        "cogenerator ∈ add(X')": Decision.of(in_add(cogenerator(corner_alg), summands, seed)),
    }
    certificates["cluster-tilting"] = is_cluster_tilting(module, d, cutoff=cutoff, seed=seed).decision
    logger.info(f"e = {[i + 1 for i in subset]}，Λ′ 维数 {corner_alg.dim}，X′ 直和项维数 {[X.dim for X in summands]}")
    if Decision.all_of(certificates.values()) is not Decision.TRUE:
        logger.warning(f"X′ 的证书未全部通过: {certificates}")
    return RecoveredCT(Gamma, d, subset, corner_alg, E, summands, module, verdict, certificates)


# ----------------------------------------------------------------------
# 指纹
# ----------------------------------------------------------------------

# 超过该顶点数时不再穷举排列
MAX_CANONICAL_VERTICES = 8


@dataclass(frozen=True)
class Fingerprint:
    """Morita 类的可计算替身: (顶点数, Cartan 矩阵, Ext¹ 矩阵)，按顶点排列取字典序最小"""
    k: int
    cartan: Tuple[Tuple[int, ...], ...]
    ext1: Tuple[Tuple[int, ...], ...]

    def __str__(self) -> str:
        return f"k={self.k}, cartan={[list(r) for r in self.cartan]}, ext1={[list(r) for r in self.ext1]}"


def _permuted(table: np.ndarray, perm: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    sub = table[np.ix_(perm, perm)]
    return tuple(tuple(int(x) for x in row) for row in sub)


def fingerprint(A: BasedAlgebra) -> Fingerprint:
    k = A.num_vertices
    cartan = np.array([[A.block(i, j).shape[1] for j in range(k)] for i in range(k)], dtype=np.int64)
    simples = [simple(A, v) for v in range(k)]
    resolutions = [min_resolution(S, cutoff=1) for S in simples]
    ext1 = np.array([[ext_dim(1, simples[i], simples[j], resolution=resolutions[i]) for j in range(k)]
                     for i in range(k)], dtype=np.int64)
    if k <= MAX_CANONICAL_VERTICES:
        perms = itertools.permutations(range(k))
    else:
        logger.warning(f"顶点数 {k} 过多，指纹按行和排序，不保证规范")
        key = lambda v: (int(cartan[v].sum()), int(cartan[:, v].sum()), int(ext1[v].sum()), int(ext1[:, v].sum()))
        perms = [sorted(range(k), key=key)]
    best = min((_permuted(cartan, p), _permuted(ext1, p)) for p in perms) if k else ((), ())
    return Fingerprint(k, best[0], best[1])


# ----------------------------------------------------------------------
# 往返验证
# ----------------------------------------------------------------------

@dataclass
class RoundtripCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class RoundtripReport:
    d: int
    gamma_dim: int
    summand_count: int
    checks: List[RoundtripCheck]
    recovered: Optional[RecoveredCT] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def summary(self) -> str:
        if self.passed:
            return f"PASS (Γ dim {self.gamma_dim}, fingerprint match)"
        failed = ", ".join(c.name for c in self.checks if not c.passed)
        return f"FAIL (Γ dim {self.gamma_dim}; {failed})"


def hom_table(summands: Sequence[Module]) -> np.ndarray:
    """dim Hom(X_i, X_j)"""
    return np.array([[hom_basis(a, b).dim for b in summands] for a in summands], dtype=np.int64)


def _relabeling(T: np.ndarray, T2: np.ndarray) -> Optional[Tuple[int, ...]]:
    """使 T2[σi, σj] = T[i, j] 的排列 σ，恒等排列优先"""
    k = T.shape[0]
    if T2.shape != T.shape:
        return None
    if np.array_equal(T, T2):
        return tuple(range(k))

    def extend(partial: List[int]) -> Optional[List[int]]:
        i = len(partial)
        if i == k:
            return partial
        for s in range(k):
            if s in partial:
                continue
            trial = partial + [s]
            if all(T2[trial[a], s] == T[a, i] and T2[s, trial[a]] == T[i, a] for a in range(i + 1)):
                found = extend(trial)
                if found is not None:
                    return found
        return None

    found = extend([])
    return tuple(found) if found is not None else None


def _right_multiplication(A: BasedAlgebra, v: int, w: int, y: np.ndarray) -> Matrix:
    """ρ_y: P(v) → P(w)，z ↦ z·y，其中 y ∈ e_v A e_w"""
    F = A.field
    B_v, B_w = projective_basis(A, v), projective_basis(A, w)
    R = F.solve(B_w, F.matmul(A.right_matrix(y), B_v))
    if R is None:
        raise CertificateError(f"右乘不把 P{v + 1} 送入 P{w + 1}")
    return R


def _algebra_map(A: BasedAlgebra, target: EndomorphismAlgebra, transport) -> Matrix:
    """
    A → End(⊕ target.summands)，基元素 b 分解为 Σ e_v b e_w 后各块取右乘，
    再由 transport(v, w, ρ) 得到 (i, j, X_i → X_j) 并嵌入
    """
    F = A.field
    columns = []
    for k in range(A.dim):
        vec = np.zeros(target.algebra.dim, dtype=np.int64)
        for v in range(A.num_vertices):
            left = A.multiply(A.idempotents[v], A.unit(k))
            for w in range(A.num_vertices):
                y = A.multiply(left, A.idempotents[w])
                if not np.any(y):
                    continue
                i, j, phi = transport(v, w, _right_multiplication(A, v, w, y))
                vec = np.mod(vec + target.embed(i, j, phi), F.p)
        columns.append(vec)
    return np.stack(columns, axis=1) if columns else F.zeros(target.algebra.dim, 0)


def _is_multiplicative(A: BasedAlgebra, B: BasedAlgebra, phi: Matrix, unit: np.ndarray) -> bool:
    """φ(ab) = φ(a)φ(b)，且 φ(1) = unit"""
    F = A.field
    for a in range(A.dim):
        for b in range(A.dim):
            lhs = F.matmul(phi, A.multiply(A.unit(a), A.unit(b)))
            if not np.array_equal(lhs, B.multiply(phi[:, a], phi[:, b])):
                return False
    return np.array_equal(F.matmul(phi, A.one()), np.mod(unit, F.p))


def _pull_back(M: Module, A: BasedAlgebra, phi: Matrix, name: str) -> Module:
    """沿代数同态 φ: A → M.algebra 把 M 看作 A-模"""
    F = A.field
    action = np.mod(np.tensordot(phi.T, M.action, axes=1), F.p)
    return Module.from_action(A, action, name)[0]


def _check(checks: List[RoundtripCheck], name: str, passed: bool, detail: str = "") -> bool:
    checks.append(RoundtripCheck(name, bool(passed), detail))
    if not passed:
        logger.warning(f"往返检查失败: {name} {detail}")
    return bool(passed)


def _lambda_checks(endo: EndomorphismAlgebra, rec: RecoveredCT, checks: List[RoundtripCheck]):
    """Λ ≅ eΓe 以及 G(F(X_i)) ≅ X_i"""
    Lam = endo.base
    F = Lam.field
    positions = endo.projective_positions()
    inverses = {v: F.inverse(theta) for v, (_, theta) in positions.items()}

    def transport(v, w, rho):
        (i, theta_v), (j, theta_w) = positions[v], positions[w]
        return i, j, F.mul_chain(theta_w, rho, inverses[v])

    projective_summands = sorted(i for i, _ in positions.values())
    if not _check(checks, "e = projective summands", projective_summands == rec.subset,
                  f"{[i + 1 for i in rec.subset]} vs {[i + 1 for i in projective_summands]}"):
        return
    phi = _algebra_map(Lam, endo, transport)
    coords = F.solve(rec.embedding, phi)
    bijective = coords is not None and coords.shape[0] == coords.shape[1] and F.is_invertible(coords)
    if not _check(checks, "Λ ≅ eΓe", bijective and _is_multiplicative(Lam, endo.algebra, phi, endo.algebra.idempotent_sum(rec.subset)),
                  f"dim Λ = {Lam.dim}, dim eΓe = {rec.corner.dim}"):
        return
    for i, X in enumerate(endo.summands):
        FX = apply_F_with_bases(endo, X)[0]
        GFX = apply_G(endo.algebra, rec.subset, FX, (rec.corner, rec.embedding))
        pulled = _pull_back(GFX, Lam, coords, f"GF({X.name})")
        _check(checks, f"G(F(X{i + 1})) ≅ X{i + 1}", indecomposable_isomorphism(pulled, X) is not None)


def _gamma_checks(endo: EndomorphismAlgebra, rec: RecoveredCT, checks: List[RoundtripCheck]):
    """Γ ≅ End(X′) 以及 F′(G(Γe_i)) ≅ Γe_i"""
    Gamma = endo.algebra
    F = Gamma.field
    endo2 = endo_algebra_of_summands(rec.summands)
    projectives = [projective(Gamma, i) for i in range(Gamma.num_vertices)]

    def transport(a, b, rho):
        return a, b, apply_G_map(rec.subset, projectives[a], projectives[b], rho)

    psi = _algebra_map(Gamma, endo2, transport)
    bijective = psi.shape[0] == psi.shape[1] and F.is_invertible(psi)
    if not _check(checks, "Γ ≅ End(X′)", bijective and _is_multiplicative(Gamma, endo2.algebra, psi, endo2.algebra.one()),
                  f"dim Γ = {Gamma.dim}, dim End(X′) = {endo2.algebra.dim}"):
        return
    for i, X2 in enumerate(rec.summands):
        pulled = _pull_back(apply_F_with_bases(endo2, X2)[0], Gamma, psi, f"F′({X2.name})")
        _check(checks, f"F′(X′{i + 1}) ≅ Γe{i + 1}", indecomposable_isomorphism(pulled, projectives[i]) is not None)


def correspondence_roundtrip(X: Module, d: int, seed: int = 0, cutoff: int = DEFAULT_CUTOFF,
                             budget: int = DEFAULT_BUDGET) -> RoundtripReport:
    """
    X ↦ Γ = End(X) ↦ (eΓe, X′) 的往返验证

    比较直和项个数、End(X′) 与 Γ 的指纹、Hom 维数表，并构造显式同构
    Λ ≅ eΓe 与 Γ ≅ End(X′)，在直和项上检查 G∘F ≅ 1 与 F∘G ≅ 1
    """
    endo = endo_algebra(X, seed, budget)
    Gamma = endo.algebra
    checks: List[RoundtripCheck] = []
    try:
        rec = recover_ct(Gamma, d, cutoff, seed)
    except PreconditionError as e:
        _check(checks, "recover_ct", False, str(e))
        return RoundtripReport(d, Gamma.dim, len(endo.summands), checks)

    _check(checks, "certificates", rec.passed, str({k: v.value for k, v in rec.certificates.items()}))
    _check(checks, "summand count", len(rec.summands) == len(endo.summands),
           f"{len(endo.summands)} → {len(rec.summands)}")
    endo2 = endo_algebra_of_summands(rec.summands)
    fp, fp2 = fingerprint(Gamma), fingerprint(endo2.algebra)
    _check(checks, "fingerprint", fp == fp2, f"{fp} vs {fp2}")
    sigma = _relabeling(hom_table(endo.summands), hom_table(rec.summands))
    _check(checks, "Hom table", sigma is not None,
           "" if sigma is None else f"σ = {[s + 1 for s in sigma]}")
    _lambda_checks(endo, rec, checks)
    _gamma_checks(endo, rec, checks)
    report = RoundtripReport(d, Gamma.dim, len(endo.summands), checks, rec)
    logger.info(f"往返验证: {report.summary}")
    return report
