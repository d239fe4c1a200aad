"""Services module for the secrecy outage bounds toolkit.

This module exports the service modules that hold the numerical core:
marginals and the transformed pair, copulas and achieving couplings, the
generic bound engine, Rayleigh closed forms, Monte Carlo verification,
rate inversion and curve sweeps.
"""

from src.services import bounds_core, copulas, marginals, montecarlo, rates, rayleigh, sweep

__all__ = ["bounds_core", "copulas", "marginals", "montecarlo", "rates", "rayleigh", "sweep"]
