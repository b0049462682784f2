"""
Core base module
"""

from .singleton import SingletonBase

__all__ = ['SingletonBase']