"""Numerical checks for double vector bundles and the canonical maps around them.

Modules:

* ``jets``: order-(1,1) jets, smooth maps on charts, tangent maps.
* ``bundles``: ``TE`` for a trivial bundle ``E`` with its two linear structures.
* ``dvb``: abstract double vector bundles in coordinates, duals and their pairing.
* ``canonical``: the involution ``J``, Tulczyjew's ``Theta`` and the map ``R``.
* ``poisson``: Poisson bivectors, the Koszul bracket and the anchor check.
* ``suites`` and ``cli``: randomized property suites behind ``dvbcheck run``.
"""

from .errors import DimensionError, UndefinedOperation

__version__ = "0.1.0"
__all__ = ["DimensionError", "UndefinedOperation", "__version__"]
