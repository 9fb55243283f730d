"""Exact hyperspace dynamics for step fuzzy sets.

Finite compacta with the Hausdorff metric, step fuzzy sets with the
level-wise, Skorokhod and sendograph metrics, Zadeh extensions of exactly
computable maps, and constructive transitivity witnesses for the tent map.
All arithmetic is exact (:class:`fractions.Fraction`).
"""

from .rational import Q, as_fraction, fmt, parse
from .ground import *  # noqa: F401,F403
from .compacta import *  # noqa: F401,F403
from .fuzzy import *  # noqa: F401,F403
from .dynamics import *  # noqa: F401,F403
from ._accel import BACKEND

__version__ = "0.1.0"
