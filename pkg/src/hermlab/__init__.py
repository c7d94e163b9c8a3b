"""Curvature and torsion of Hermitian metrics at a point.

Submodules: :mod:`expr` (metric-entry expressions), :mod:`tensors`,
:mod:`geometry` (Chern/Bismut/Levi-Civita/Gauduchon curvature),
:mod:`analysis`, :mod:`catalog` (models and model files), :mod:`families`
(random models) and :mod:`cli`.
"""

__version__ = "0.1.0"

from . import expr, tensors, catalog, geometry, analysis, families  # noqa: E402,F401
from .catalog import build, load_model, save_model  # noqa: E402,F401
from .geometry import curvature_package  # noqa: E402,F401
