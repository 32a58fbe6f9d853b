"""Chromatic numbers of hyperbolic surfaces: bounds, constructions, experiments.

Submodules
----------
kernel        hyperboloid-model geometry (distances, exponential map, development)
formulas      closed-form hyperbolic trigonometry used everywhere else
bounds        bound calculators in d and genus, and the BoundsReport
nets          separated nets, distance graphs, colorings, validation
surfaces      glued polygon surfaces and clique certificates
rotations     rotation systems, face tracing, genus, embedding search
collars       thin-cylinder sectioning and coloring
svg           Poincare-disk rendering
cli           the hypchroma command-line tool
"""

__version__ = "0.1.0"

from ._kernels import active_backend, use_backend

__all__ = ["active_backend", "use_backend", "__version__"]
