"""Exact Hermite-Pade (multiple orthogonal) polynomials for semiclassical weights,
their electrostatic partners, and high-precision equilibrium checks."""

from __future__ import annotations

__version__ = "0.1.0"

from .exactpoly import *  # noqa: F401,F403
from .weights import *  # noqa: F401,F403
from .mop import *  # noqa: F401,F403
from .partner import *  # noqa: F401,F403
from .zeros import *  # noqa: F401,F403
from .electro import *  # noqa: F401,F403
from . import exactpoly, weights, mop, partner, zeros, electro

__all__ = (
    ["__version__"]
    + exactpoly.__all__
    + weights.__all__
    + mop.__all__
    + partner.__all__
    + zeros.__all__
    + electro.__all__
)
