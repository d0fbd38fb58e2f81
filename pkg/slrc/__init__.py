"""
slrc - structured low-rank completion of Hankel and quasi-Hankel matrices.
"""

# Keep imports minimal; subpackages are imported on demand.

__version__ = "0.1.0"
