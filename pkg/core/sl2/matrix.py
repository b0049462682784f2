"""2×2 矩阵、Möbius 作用与矩阵曲线"""

import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

import numpy as np
import pandas as pd

from core.errors import GroupError, NotUnimodularError
from core.numerics.trajectory import FLOAT_FORMAT

logger = logging.getLogger(__name__)

INF = math.inf
UNIMODULAR_TOL = 1e-9


def is_infinite(x: float) -> bool:
    """投影直线上只有一个 ∞，±inf 视为同一点"""
    return math.isinf(x)


@dataclass(frozen=True)
class Mat2:
    """行主序 [[a, b], [c, d]]，即 [[α, β], [γ, δ]]"""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def identity(cls) -> 'Mat2':
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, arr) -> 'Mat2':
        m = np.asarray(arr, dtype=float).reshape(2, 2)
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: 'Mat2') -> 'Mat2':
        return Mat2(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: 'Mat2') -> 'Mat2':
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def scale(self, s: float) -> 'Mat2':
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def inverse(self) -> 'Mat2':
        det = self.det
        if det == 0.0:
            raise GroupError("矩阵奇异，不可逆")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def normalized(self) -> 'Mat2':
        """乘以 1/√det 使行列式为 1；Möbius 作用不变"""
        det = self.det
        if not det > 0.0:
            raise NotUnimodularError(f"行列式非正，无法归一化: det={det:.6g}")
        return self.scale(1.0 / math.sqrt(det))

    def is_unimodular(self, tol: float = UNIMODULAR_TOL) -> bool:
        return abs(self.det - 1.0) <= tol

    def apply(self, vector: Sequence[float]) -> np.ndarray:
        """线性作用于 (x, p)"""
        x, p = vector
        return np.array([self.a * x + self.b * p, self.c * x + self.d * p])

    def close_to(self, other: 'Mat2', tol: float) -> bool:
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)


GENERATORS = (
    Mat2(0.0, 1.0, 0.0, 0.0),      # a₀
    Mat2(0.5, 0.0, 0.0, -0.5),     # a₁
    Mat2(0.0, 0.0, -1.0, 0.0),     # a₂
)


def mobius(m: Mat2, x: float) -> float:
    """(αx+β)/(γx+δ)，在投影直线 ℝ∪{∞} 上精确处理 ∞

    Φ(A, ∞) = α/γ（γ=0 时为 ∞），Φ(A, −δ/γ) = ∞。
    """
    if is_infinite(x):
        if m.c == 0.0:
            return INF
        return m.a / m.c
    den = m.c * x + m.d
    if den == 0.0:
        return INF
    return (m.a * x + m.b) / den


def expm_traceless(m: Mat2, tau: float) -> Mat2:
    """无迹矩阵的指数 exp(τM) = cosh(sτ)I + sinh(sτ)/s·M，s² = −det M

    分双曲、抛物、椭圆三种情形给出闭式。
    """
    if abs(m.trace) > 1e-12 * (1.0 + abs(m.a) + abs(m.d)):
        raise GroupError(f"矩阵不是无迹的: trace={m.trace:.3e}")
    s2 = -m.det
    if s2 > 0.0:
        s = math.sqrt(s2)
        ch = math.cosh(s * tau)
        sh_s = math.sinh(s * tau) / s
    elif s2 < 0.0:
        w = math.sqrt(-s2)
        ch = math.cos(w * tau)
        sh_s = math.sin(w * tau) / w
    else:
        ch = 1.0
        sh_s = tau
    return Mat2(ch + sh_s * m.a, sh_s * m.b, sh_s * m.c, ch + sh_s * m.d)


@dataclass(frozen=True, eq=False)
class Mat2Curve:
    """时间索引的单模矩阵族

    matrices 为归一化后的矩阵；raw_det 记录归一化前的行列式，用于诊断。
    """

    times: np.ndarray
    matrices: np.ndarray
    raw_det: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        mats = np.asarray(self.matrices, dtype=float).reshape(-1, 2, 2)
        if mats.shape[0] != times.shape[0]:
            raise GroupError("矩阵曲线的时间与矩阵数量不一致")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'matrices', mats)
        if self.raw_det is not None:
            object.__setattr__(self, 'raw_det', np.asarray(self.raw_det, dtype=float).reshape(-1))

    def __len__(self) -> int:
        return self.times.shape[0]

    def __getitem__(self, index: int) -> Mat2:
        return Mat2.from_array(self.matrices[index])

    def __iter__(self) -> Iterator[Mat2]:
        for i in range(len(self)):
            yield self[i]

    @property
    def dets(self) -> np.ndarray:
        m = self.matrices
        return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]

    def max_raw_det_drift(self) -> float:
        source = self.raw_det if self.raw_det is not None else self.dets
        return float(np.max(np.abs(source - 1.0)))

    def act(self, x0: float) -> np.ndarray:
        """对初值做 Möbius 作用，逐样本"""
        return np.array([mobius(m, x0) for m in self])

    def act_linear(self, state) -> np.ndarray:
        """对相空间初值做线性作用，形状 (样本数, 2)"""
        v = np.asarray(state, dtype=float).reshape(2)
        return np.einsum('nij,j->ni', self.matrices, v)

    def to_dataframe(self) -> pd.DataFrame:
        m = self.matrices
        return pd.DataFrame({'t': self.times, 'a': m[:, 0, 0], 'b': m[:, 0, 1],
                             'c': m[:, 1, 0], 'd': m[:, 1, 1]})

    def to_csv(self, target: Union[str, Path, io.TextIOBase, None] = None) -> Optional[str]:
        """写出 t,a,b,c,d 行；target 为 None 时返回文本"""
        text = self.to_dataframe().to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        if target is None:
            return text
        if isinstance(target, (str, Path)):
            Path(target).write_text(text, encoding='utf-8')
            logger.info(f"矩阵曲线已写出: {target}")
        else:
            target.write(text)
        return None
