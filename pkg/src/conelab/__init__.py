"""Numerical laboratory for harmonic functions of polynomial growth on cones and warped models.

Submodules
----------
profiles
    Warping profiles, model metrics, curvature and volume growth.
cone
    Metric cones with conic measures, degree spectra and closed-form J, I, D.
three_circles
    The weighted three-circles inequality, J/I predicates and the dyadic cascade.
frequency
    Green's-function distance b and the frequency functionals.
dirichlet
    Radial harmonic modes and the Dirichlet exhaustion pipeline.
cli
    The ``conelab`` scenario runner.
"""

__version__ = "0.1.0"

from . import cone, dirichlet, frequency, profiles, three_circles  # noqa: E402,F401
