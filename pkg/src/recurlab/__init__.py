"""Numerical and exact-arithmetic experiments on recurrence in linear dynamics."""
from recurlab.kernels import BACKEND
from recurlab.mobius import MobiusMap, ParabolicParam

__version__ = "0.1.0"

__all__ = ["BACKEND", "MobiusMap", "ParabolicParam", "__version__"]
