"""
有限域线性代数模块
素数域 F_p 上的稠密精确线性代数：行最简形、核、线性方程组、极小多项式
所有同调计算最终都归结到这里的运算
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, symbols

logger = logging.getLogger(__name__)

# 矩阵就是二维 int64 数组，元素取值于 [0, p)；0×n 与 n×0 都合法
Matrix = np.ndarray

_T = symbols('t')


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class PrimeField:
    """素数域 F_p"""

    # p^2 * 2^23 < 2^63，保证 int64 矩阵乘法不溢出
    MAX_MODULUS = 1 << 20

    def __init__(self, p: int = 101):
        """
        初始化素数域

        Args:
            p: 素数模数
        """
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"模数 {p} 不是素数")
        if p >= self.MAX_MODULUS:
            raise ValueError(f"模数 {p} 过大，需小于 {self.MAX_MODULUS}")
        self.p = p

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(('F', self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    # ------------------------------------------------------------------
    # 元素与矩阵构造
    # ------------------------------------------------------------------

    def inv(self, a: int) -> int:
        """非零元素的乘法逆"""
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("零元素没有逆")
        return pow(a, self.p - 2, self.p)

    def matrix(self, data, rows: Optional[int] = None, cols: Optional[int] = None) -> Matrix:
        """
        构造规范化矩阵

        Args:
            data: 嵌套列表、数组或按行展开的序列
            rows: 行数（data为扁平序列时使用）
            cols: 列数

        Returns:
            元素位于 [0, p) 的 int64 矩阵
        """
        arr = np.array(data, dtype=np.int64)
        if rows is not None and cols is not None:
            arr = arr.reshape(rows, cols)
        elif arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else np.zeros((0, 0), dtype=np.int64)
        return np.mod(arr, self.p)

    def vector(self, data) -> np.ndarray:
        return np.mod(np.array(data, dtype=np.int64).reshape(-1), self.p)

    def zeros(self, rows: int, cols: int) -> Matrix:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> Matrix:
        return np.eye(n, dtype=np.int64)

    def unit(self, n: int, k: int) -> np.ndarray:
        v = np.zeros(n, dtype=np.int64)
        v[k] = 1
        return v

    def matmul(self, a: Matrix, b: Matrix) -> Matrix:
        return np.mod(a @ b, self.p)

    def mul_chain(self, *mats: Matrix) -> Matrix:
        result = mats[0]
        for m in mats[1:]:
            result = self.matmul(result, m)
        return result

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> Matrix:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def random_vector(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, self.p, size=n, dtype=np.int64)

    # ------------------------------------------------------------------
    # 消元
    # ------------------------------------------------------------------

    def rref(self, m: Matrix) -> Tuple[Matrix, List[int]]:
        """
        行最简形，取每列第一个非零元为主元

        Args:
            m: 输入矩阵

        Returns:
            (行最简形矩阵, 严格递增的主元列列表)
        """
        a = np.mod(np.array(m, dtype=np.int64), self.p)
        if a.ndim != 2:
            raise ValueError(f"需要二维矩阵，得到 {a.ndim} 维")
        rows, cols = a.shape
        pivots: List[int] = []
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            a[r] = np.mod(a[r] * self.inv(a[r, c]), self.p)
            col = a[:, c].copy()
            col[r] = 0
            others = np.nonzero(col)[0]
            if others.size:
                a[others] = np.mod(a[others] - np.outer(col[others], a[r]), self.p)
            pivots.append(c)
            r += 1
        return a, pivots

    def rank(self, m: Matrix) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        return len(self.rref(m)[1])

    def kernel_basis(self, m: Matrix) -> Matrix:
        """
        右零空间的一组基

        Args:
            m: r×c 矩阵

        Returns:
            行向量为基的矩阵，行数 = c - rank(m)
        """
        m = np.asarray(m, dtype=np.int64)
        cols = m.shape[1]
        if m.shape[0] == 0:
            return self.identity(cols)
        r, pivots = self.rref(m)
        free = [c for c in range(cols) if c not in set(pivots)]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        for i, f in enumerate(free):
            basis[i, f] = 1
            for row, pc in enumerate(pivots):
                basis[i, pc] = (-r[row, f]) % self.p
        return basis

    def solve(self, m: Matrix, rhs) -> Optional[np.ndarray]:
        """
        求解 m·x = rhs

        Args:
            m: r×c 系数矩阵
            rhs: r 维向量或 r×k 矩阵

        Returns:
            一个解（形状与 rhs 对应），无解时返回 None
        """
        m = np.asarray(m, dtype=np.int64)
        rhs = np.asarray(rhs, dtype=np.int64)
        vector_rhs = rhs.ndim == 1
        if vector_rhs:
            rhs = rhs.reshape(-1, 1)
        if rhs.shape[0] != m.shape[0]:
            raise ValueError(f"维数不匹配: 系数矩阵 {m.shape[0]} 行，右端 {rhs.shape[0]} 行")
        cols = m.shape[1]
        k = rhs.shape[1]
        if m.shape[0] == 0:
            x = np.zeros((cols, k), dtype=np.int64)
            return x.reshape(-1) if vector_rhs else x
        r, pivots = self.rref(np.hstack([m, rhs]))
        if pivots and pivots[-1] >= cols:
            return None
        x = np.zeros((cols, k), dtype=np.int64)
        for row, pc in enumerate(pivots):
            x[pc] = r[row, cols:]
        return x.reshape(-1) if vector_rhs else x

    def inverse(self, m: Matrix) -> Optional[Matrix]:
        m = np.asarray(m, dtype=np.int64)
        if m.shape[0] != m.shape[1]:
            return None
        n = m.shape[0]
        if self.rank(m) < n:
            return None
        return self.solve(m, self.identity(n))

    def is_invertible(self, m: Matrix) -> bool:
        m = np.asarray(m)
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    # ------------------------------------------------------------------
    # 子空间
    # ------------------------------------------------------------------

    def row_space(self, m: Matrix) -> Matrix:
        """行空间的行最简基"""
        m = np.asarray(m, dtype=np.int64)
        if m.shape[0] == 0:
            return np.zeros((0, m.shape[1]), dtype=np.int64)
        r, pivots = self.rref(m)
        return r[:len(pivots)]

    def column_space(self, m: Matrix) -> Matrix:
        """列空间的基，取原矩阵的主元列"""
        m = np.asarray(m, dtype=np.int64)
        if m.shape[1] == 0:
            return np.zeros((m.shape[0], 0), dtype=np.int64)
        _, pivots = self.rref(m)
        return m[:, pivots] % self.p

    def extend_columns(self, base: Matrix, candidates: Matrix) -> List[int]:
        """
        选出能扩充 base 列空间的候选列

        Returns:
            候选矩阵中被选中的列下标（按顺序贪心）
        """
        base = np.asarray(base, dtype=np.int64)
        candidates = np.asarray(candidates, dtype=np.int64)
        if candidates.shape[1] == 0:
            return []
        offset = base.shape[1]
        _, pivots = self.rref(np.hstack([base, candidates]))
        return [c - offset for c in pivots if c >= offset]

    def in_column_space(self, base: Matrix, vectors: Matrix) -> bool:
        """vectors 的每一列是否都在 base 的列空间里"""
        vectors = np.asarray(vectors, dtype=np.int64)
        if vectors.size == 0:
            return True
        if np.asarray(base).shape[1] == 0:
            return not np.any(np.mod(vectors, self.p))
        return self.solve(base, vectors) is not None

    # ------------------------------------------------------------------
    # 多项式
    # ------------------------------------------------------------------

    def minimal_relation(self, powers: Sequence[np.ndarray]) -> Optional[List[int]]:
        """
        序列 v_0, v_1, ... 的第一个线性相关关系

        Returns:
            首一多项式系数（低次在前），序列线性无关时返回 None
        """
        stacked: List[np.ndarray] = []
        for r, v in enumerate(powers):
            stacked.append(np.asarray(v, dtype=np.int64).reshape(-1))
            mat = np.stack(stacked, axis=1)
            if self.rank(mat) < r + 1:
                prev = mat[:, :r]
                coeffs = self.solve(prev, mat[:, r]) if r else np.zeros(0, dtype=np.int64)
                poly = [int((-c) % self.p) for c in coeffs] + [1]
                return poly
        return None

    def matrix_minimal_polynomial(self, m: Matrix) -> List[int]:
        """方阵的极小多项式（低次在前，首一）"""
        n = m.shape[0]
        powers = [self.identity(n)]
        for _ in range(n):
            powers.append(self.matmul(powers[-1], m))
        poly = self.minimal_relation(powers)
        if poly is None:
            raise ArithmeticError("极小多项式次数超过矩阵阶数")
        return poly

    def factor(self, poly: Sequence[int]) -> List[Tuple[List[int], int]]:
        """
        在 F_p 上分解多项式

        Args:
            poly: 系数，低次在前

        Returns:
            [(首一不可约因子系数(低次在前), 重数)]
        """
        coeffs = [int(c) % self.p for c in reversed(list(poly))]
        if len(coeffs) <= 1:
            return []
        _, factors = Poly(coeffs, _T, modulus=self.p).factor_list()
        result = []
        for f, mult in factors:
            fc = [int(c) % self.p for c in reversed(f.all_coeffs())]
            lead_inv = self.inv(fc[-1])
            result.append(([(c * lead_inv) % self.p for c in fc], int(mult)))
        result.sort(key=lambda item: (len(item[0]), item[0]))
        return result

    def evaluate(self, poly: Sequence[int], m: Matrix) -> Matrix:
        """用Horner法把多项式代入方阵"""
        n = m.shape[0]
        result = self.zeros(n, n)
        for c in reversed(list(poly)):
            result = self.matmul(result, m)
            result = np.mod(result + int(c) * self.identity(n), self.p)
        return result

    def matrix_power(self, m: Matrix, k: int) -> Matrix:
        result = self.identity(m.shape[0])
        for _ in range(k):
            result = self.matmul(result, m)
        return result


def as_columns(data, rows: int) -> Matrix:
    """整理为 rows 行的矩阵，兼容空矩阵"""
    arr = np.asarray(data, dtype=np.int64)
    if arr.ndim == 2 and arr.shape[0] == rows:
        return arr
    if arr.size == 0:
        return np.zeros((rows, 0), dtype=np.int64)
    return arr.reshape(rows, -1)


def as_rows(data, cols: int) -> Matrix:
    """整理为 cols 列的矩阵，兼容空矩阵"""
    arr = np.asarray(data, dtype=np.int64)
    if arr.ndim == 2 and arr.shape[1] == cols:
        return arr
    if arr.size == 0:
        return np.zeros((0, cols), dtype=np.int64)
    return arr.reshape(-1, cols)
