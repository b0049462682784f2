"""数值工具：积分器、数值积分、恒定性检测"""

from .config import DEFAULT_CONFIG, IntegratorConfig
from .trajectory import Event, EventKind, Trajectory
from .integrator import integrate_ode, integrate_rk4
from .quadrature import cumulative_quad, quad, quad_with_error
from .constancy import ConstancyReport, constancy, max_drift
from .interpolate import HermiteInterpolant

__all__ = [
    'IntegratorConfig', 'DEFAULT_CONFIG', 'Trajectory', 'Event', 'EventKind',
    'integrate_ode', 'integrate_rk4', 'quad', 'quad_with_error', 'cumulative_quad',
    'ConstancyReport', 'constancy', 'max_drift', 'HermiteInterpolant',
]
