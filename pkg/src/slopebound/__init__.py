"""Certified counts of short primitive lattice vectors and related slope bounds."""
from .counting import CountSpec, RadiusMode, count_at, n_gd
from .errors import SlopeboundError
from .lattice import LatticeBasis, NormalizedBasis, normalize, reduce

__all__ = ["CountSpec", "RadiusMode", "count_at", "n_gd", "SlopeboundError",
           "LatticeBasis", "NormalizedBasis", "normalize", "reduce"]
__version__ = "0.1.0"
