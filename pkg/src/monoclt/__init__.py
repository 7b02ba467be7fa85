"""Monochromatic edge counts under uniform random vertex coloring.

Exact laws, Monte Carlo simulation, distances to the normal and Poisson
limits, and the closed-form error bounds they are checked against.
"""
import os

# numba otherwise probes an outdated TBB and warns; the layer does not affect results
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

__version__ = "0.1.0"
