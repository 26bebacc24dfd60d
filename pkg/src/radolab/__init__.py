"""radolab: random geometric graphs on countable dense sets, at desk scale.

Exact rational arithmetic everywhere a predicate is decided; floating point
only in reporting and in the one solver that is intrinsically numeric (the
renormed-gauge evaluation).
"""

from radolab.vectors import FiniteSupportVector, basis, fsv, zero_vector
from radolab.norms import (
    L1,
    L2,
    LINF,
    NormSpec,
    distance_le,
    distance_lt,
    floor_distance,
    lp,
    norm_approx,
)

__all__ = [
    "FiniteSupportVector",
    "NormSpec",
    "L1",
    "L2",
    "LINF",
    "lp",
    "basis",
    "fsv",
    "zero_vector",
    "distance_lt",
    "distance_le",
    "floor_distance",
    "norm_approx",
]

__version__ = "0.1.0"
