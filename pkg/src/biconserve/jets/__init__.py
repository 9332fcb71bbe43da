from .jet import Jet, cos, cosh, exp, powr, sin, sinh, sqrt
from .kernel import backend_name
from .space import MAX_ORDER, JetSpace

__all__ = [
    "Jet",
    "JetSpace",
    "MAX_ORDER",
    "backend_name",
    "sin",
    "cos",
    "sinh",
    "cosh",
    "exp",
    "sqrt",
    "powr",
]
