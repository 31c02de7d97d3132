"""Bosonic Josephson junction in a double well with a tunable central dip.

Pipeline: single-particle spectrum (``schrodinger``) of the trap in
``potential`` -> two-mode parameters (``twomode``) -> semiclassical junction
dynamics and fixed-point stability (``bjj``).
"""
from .bjj import BJJState, JunctionParams, QuenchSchedule, fixed_points, integrate
from .potential import PhysicalParams, PotentialParams, nondimensionalize, lab_defaults
from .schrodinger import EigenPair, Grid, Parity
from .twomode import TwoModeParams, sweep_tunneling

__version__ = "0.1.0"
