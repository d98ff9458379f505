"""Guidance and control pipeline for a thrust-vectored underactuated AUV.

Subpackages cover the hydrodynamic vehicle model, a direct-transcription
trajectory optimizer over an augmented-Lagrangian NLP solver, time-varying
LQR gain synthesis along the optimized reference, and a closed-loop
simulator with disturbance injection.  The ``auvpilot`` console script
drives the full optimize -> gains -> simulate pipeline for the built-in
maneuvers.
"""

__version__ = "0.1.0"

from . import quatmath, vehicle, nlp, trajopt, tvlqr, sim, scenarios  # noqa: F401
