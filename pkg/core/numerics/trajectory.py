"""数值解轨迹及其 CSV 表示"""

import io
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from core.errors import NumericsError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12e'
_STATE_COLUMN = re.compile(r'^s(\d+)$')


class EventKind(str, Enum):
    BLOW_UP = 'blow_up'
    CHART_SWITCH = 'chart_switch'
    DOMAIN = 'domain'


@dataclass(frozen=True)
class Event:
    time: float
    kind: EventKind
    # 停止型事件附带停止时刻的状态
    state: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True, eq=False)
class Trajectory:
    """采样网格上的数值解

    times 严格递增；states 形状为 (样本数, 维数)；只有在记录了 blow_up
    事件时才允许出现非有限分量（投影直线上的 ∞）。
    """

    times: np.ndarray
    states: np.ndarray
    events: Tuple[Event, ...] = field(default_factory=tuple)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states.reshape(-1, 1)
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'events', tuple(self.events))

        if states.shape[0] != times.shape[0]:
            raise NumericsError(f"样本数不一致: {times.shape[0]} 个时间点，{states.shape[0]} 个状态")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise NumericsError("采样时间必须严格递增")
        if not np.all(np.isfinite(times)):
            raise NumericsError("采样时间必须有限")
        if not np.all(np.isfinite(states)) and not self.has_event(EventKind.BLOW_UP):
            raise NumericsError("轨迹含非有限分量但未标记爆破")

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def component(self, index: int) -> np.ndarray:
        return self.states[:, index]

    def has_event(self, kind: EventKind) -> bool:
        return any(e.kind == kind for e in self.events)

    def event_times(self, kind: EventKind) -> np.ndarray:
        return np.array([e.time for e in self.events if e.kind == kind], dtype=float)

    def same_grid(self, other: 'Trajectory', tol: float = 0.0) -> bool:
        if len(self) != len(other):
            return False
        return bool(np.all(np.abs(self.times - other.times) <= tol))

    def with_states(self, states: np.ndarray, events: Optional[Sequence[Event]] = None) -> 'Trajectory':
        return Trajectory(self.times, states, tuple(self.events if events is None else events))

    # ------------------------------------------------------------ CSV

    def to_dataframe(self, extra: Optional[Mapping[str, np.ndarray]] = None) -> pd.DataFrame:
        data = {'t': self.times}
        for i in range(self.dim):
            data[f's{i}'] = self.states[:, i]
        for name, values in (extra or {}).items():
            data[name] = np.asarray(values, dtype=float)
        return pd.DataFrame(data)

    def to_csv(self, target: Union[str, Path, io.TextIOBase, None] = None,
               extra: Optional[Mapping[str, np.ndarray]] = None) -> Optional[str]:
        """写出 CSV：表头 t,s0,s1,...，附加列在后，事件作为注释行追加

        target 为 None 时返回文本。
        """
        buf = io.StringIO()
        self.to_dataframe(extra).to_csv(buf, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        for event in self.events:
            buf.write(f"# event,{FLOAT_FORMAT % event.time},{event.kind.value}\n")
        text = buf.getvalue()

        if target is None:
            return text
        if isinstance(target, (str, Path)):
            Path(target).write_text(text, encoding='utf-8')
            logger.info(f"轨迹已写出: {target} ({len(self)} 行)")
        else:
            target.write(text)
        return None

    @classmethod
    def from_csv(cls, source: Union[str, Path, io.TextIOBase]) -> 'Trajectory':
        if isinstance(source, Path) or (isinstance(source, str) and '\n' not in source):
            text = Path(source).read_text(encoding='utf-8')
        elif isinstance(source, str):
            text = source
        else:
            text = source.read()

        data_lines, events = [], []
        for line in text.splitlines():
            if line.startswith('#'):
                parts = line[1:].strip().split(',')
                if len(parts) == 3 and parts[0] == 'event':
                    events.append(Event(float(parts[1]), EventKind(parts[2])))
                continue
            data_lines.append(line)

        df = pd.read_csv(io.StringIO('\n'.join(data_lines)))
        state_cols = sorted(
            (c for c in df.columns if _STATE_COLUMN.match(c)),
            key=lambda c: int(_STATE_COLUMN.match(c).group(1)),
        )
        return cls(df['t'].to_numpy(), df[state_cols].to_numpy(), tuple(events))
