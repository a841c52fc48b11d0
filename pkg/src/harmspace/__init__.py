"""Numerical toolkit for weighted harmonic function spaces on the upper
half-space and the unit ball: layered Whitney geometry, Poisson and
weighted Bergman kernels, weighted norms, Carleson-type measure checks,
trace and extension operators, spherical-harmonic multipliers, and a
deterministic verification harness over all of it."""

__version__ = "0.1.0"
