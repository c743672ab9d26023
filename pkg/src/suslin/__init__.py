"""Elementary factorization of determinant-one polynomial matrices."""

from .linalg import ElemFactor, Factorization, PolyMatrix, verify
from .ring import GF, QQ, Field, Poly, Ring

__version__ = "0.1.0"

__all__ = ["Ring", "Poly", "Field", "QQ", "GF", "PolyMatrix", "ElemFactor", "Factorization", "verify"]
