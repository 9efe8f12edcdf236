"""speclim: finite-dimensional quantizations and spectral-hull convergence checks.

Builds commuting families of symmetric matrices (sphere quantizations,
products, radially reduced Schrodinger pairs), computes their joint spectra
two independent ways, and measures Hausdorff convergence of spectral hulls
toward classical regions.
"""

from ._kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
