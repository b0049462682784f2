"""
单例基类

每个子类各自持有一个实例；构造参数只在第一次创建时生效。
"""

import threading
from typing import Any, Dict, Type, TypeVar

T = TypeVar('T', bound='SingletonBase')


class SingletonBase:
    """线程安全的单例基类，子类重写 _initialize"""

    _instances: Dict[type, 'SingletonBase'] = {}
    _lock = threading.RLock()

    def __new__(cls: Type[T], *args: Any, **kwargs: Any) -> T:
        instance = SingletonBase._instances.get(cls)
        if instance is None:
            with SingletonBase._lock:
                # 双重检查锁定
                instance = SingletonBase._instances.get(cls)
                if instance is None:
                    instance = super().__new__(cls)
                    instance._initialized = False
                    SingletonBase._instances[cls] = instance
        return instance

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        if self._initialized:
            return
        with SingletonBase._lock:
            if self._initialized:
                return
            try:
                self._initialize(*args, **kwargs)
            except Exception:
                # 初始化失败不留下半成品实例
                SingletonBase._instances.pop(type(self), None)
                raise
            self._initialized = True

    def _initialize(self, *args: Any, **kwargs: Any) -> None:
        pass

    @classmethod
    def get_instance(cls: Type[T]) -> T:
        """获取实例，不存在时用默认参数创建"""
        instance = SingletonBase._instances.get(cls)
        if instance is None or not instance._initialized:
            instance = cls()
        return instance

    @classmethod
    def reset_instance(cls) -> None:
        """丢弃当前实例（测试或重新加载时使用）"""
        with SingletonBase._lock:
            SingletonBase._instances.pop(cls, None)
