"""Numerical verification of curvature identities for index-2 hypersurface
charts in flat five-dimensional space, with a catalog of explicit families."""

__version__ = "0.1.0"
