"""统一异常层次

所有领域异常都继承自 LieSystemError，CLI 根据异常类别映射退出码。
"""

from typing import Any, Iterable, Optional, Tuple


class LieSystemError(Exception):
    """所有领域异常的基类"""


class ConfigError(LieSystemError):
    """运行配置错误（CLI 参数、预设参数等）"""


# ---------------------------------------------------------------- 表达式

class ExprError(LieSystemError):
    """表达式相关错误的基类"""


class ExprSyntaxError(ExprError):
    """表达式语法错误，携带字节偏移与期望的记号集合"""

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} (偏移 {offset}"
        if self.expected:
            detail += f"，期望: {', '.join(self.expected)}"
        detail += ")"
        super().__init__(detail)


class UnknownIdentifierError(ExprError):
    """未知标识符"""

    def __init__(self, name: str, offset: int = -1):
        self.name = name
        self.offset = offset
        super().__init__(f"未知标识符: {name} (偏移 {offset})")


class UnboundVariableError(ExprError):
    """求值时变量未绑定"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"变量未绑定: {name}")


class ExprDomainError(ExprError):
    """定义域错误（除零、ln≤0、sqrt<0 等），携带出错的子表达式"""

    def __init__(self, message: str, subexpression: Any = None):
        self.subexpression = subexpression
        super().__init__(f"{message}: {subexpression}" if subexpression is not None else message)


# ---------------------------------------------------------------- 数值

class NumericsError(LieSystemError):
    """数值计算错误的基类"""


class StepBudgetExceeded(NumericsError):
    """积分步数预算耗尽"""

    def __init__(self, max_steps: int, last_time: float):
        self.max_steps = max_steps
        self.last_time = last_time
        super().__init__(f"积分步数超过上限 {max_steps}，最后时间 t={last_time:.12g}")


class StepSizeUnderflow(NumericsError):
    """步长下溢（通常出现在奇点附近）"""

    def __init__(self, last_time: float, step: float):
        self.last_time = last_time
        self.step = step
        super().__init__(f"步长下溢 h={step:.3e}，最后有效时间 t={last_time:.12g}")


class RhsEvaluationError(NumericsError):
    """右端函数求值失败"""

    def __init__(self, t: float, cause: Exception):
        self.t = t
        self.cause = cause
        super().__init__(f"t={t:.12g} 处右端函数求值失败: {cause}")


class QuadratureError(NumericsError):
    """数值积分失败（细分层数耗尽等）"""


class NonFiniteSampleError(NumericsError):
    """采样值非有限"""

    def __init__(self, message: str, at: Optional[float] = None):
        self.at = at
        super().__init__(message if at is None else f"{message} (位置 {at:.12g})")


# ---------------------------------------------------------------- 群

class GroupError(LieSystemError):
    """SL(2,R) 结构相关错误"""


class VariableMismatchError(GroupError):
    """向量场变量列表不一致"""


class NotUnimodularError(GroupError):
    """矩阵不满足单模条件"""


# ---------------------------------------------------------------- Riccati

class RiccatiError(LieSystemError):
    """Riccati 方程相关错误"""


class DegenerateConfigurationError(RiccatiError):
    """交比配置退化（输入点重合）"""


class ParticularSolutionError(RiccatiError):
    """给定的特解不满足方程"""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"特解残差 {residual:.3e} 超过容差 {tol:.1e}")


class BlowUpError(RiccatiError):
    """解在区间内爆破，携带括住爆破点的区间"""

    def __init__(self, bracket: Tuple[float, float]):
        self.bracket = bracket
        super().__init__(f"解在区间 [{bracket[0]:.12g}, {bracket[1]:.12g}] 内爆破")


class PreconditionError(RiccatiError):
    """前置条件不满足（b0·b2 为零或变号、缩放因子非正等）"""


class CriterionRejected(RiccatiError):
    """可积性判据拒绝，携带恒定性诊断"""

    def __init__(self, message: str, diagnostics: Any = None, k_samples: Any = None):
        self.diagnostics = diagnostics
        self.k_samples = k_samples
        super().__init__(message)


# ---------------------------------------------------------------- 振子

class OscillatorError(LieSystemError):
    """谐振子相关错误"""


class PoleInIntervalError(OscillatorError):
    """频率函数或 V(t) 在区间内有极点"""

    def __init__(self, pole: float, interval: Tuple[float, float]):
        self.pole = pole
        self.interval = interval
        super().__init__(f"极点 t={pole:.12g} 落在区间 [{interval[0]:.12g}, {interval[1]:.12g}] 内")


class GridMismatchError(OscillatorError):
    """两条轨迹的采样网格不一致"""


# ---------------------------------------------------------------- Ermakov

class ErmakovError(LieSystemError):
    """Ermakov / Pinney 系统相关错误"""


class PinneyDomainError(ErmakovError):
    """Pinney 变量为零或公式定义域外"""


class SingularIntegrandError(ErmakovError):
    """广义不变量的被积函数在积分路径上奇异"""


class DegenerateInvariantsError(ErmakovError):
    """叠加公式的不变量退化（W=0、判别式为负等）"""


#: CLI 退出码约定
EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def exit_code_for(error: BaseException) -> int:
    """将异常映射为 CLI 退出码"""
    if isinstance(error, CriterionRejected):
        return EXIT_REJECTED
    if isinstance(error, (ConfigError, ExprError)):
        return EXIT_USAGE
    return EXIT_NUMERIC
