"""Exact computation with bound quiver algebras over prime fields."""

from .fields import FpMatrix, PrimeField

__all__ = ["PrimeField", "FpMatrix"]
__version__ = "0.1.0"
