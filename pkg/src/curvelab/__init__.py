"""Rectifiability diagnostics for finite metric spaces and sampled curves.

Nets and multiresolution ball families, triple excess and Menger curvature,
Jones beta numbers, curvature functionals with their reference lengths, and a
net-graph tour that parameterizes connected samples.
"""

__version__ = "0.1.0"

from .curves import Arc, Curve, Sample  # noqa: E402
from .errors import (CurvelabError, DisconnectedError, DomainError, UnsupportedOperation,  # noqa: E402
                     UsageError, ValidationError)
from .metric import Ball, EuclideanCloud, ExplicitMetric, PowerTransform  # noqa: E402

__all__ = ["Arc", "Ball", "Curve", "CurvelabError", "DisconnectedError", "DomainError",
           "EuclideanCloud", "ExplicitMetric", "PowerTransform", "Sample", "UnsupportedOperation",
           "UsageError", "ValidationError", "__version__"]
