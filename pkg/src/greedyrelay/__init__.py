"""Achievable-rate engine and coverage simulator for greedy omnidirectional
relaying in all-source all-cast networks."""
from .kernels import BACKEND
from .model import (AwgnNetwork, DmcNetwork, GuardExceeded, InputDistributions, ModelError,
                    NodeSet, Schedule, validate)
from .region import (FeasibilityCertificate, boundary_sample, check_feasible, max_symmetric_rate,
                     optimize_hd_schedule)
from .simulator import DecodeOracle, measure_delays, run

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AwgnNetwork", "DmcNetwork", "GuardExceeded", "InputDistributions", "ModelError",
    "NodeSet", "Schedule", "validate", "FeasibilityCertificate", "boundary_sample",
    "check_feasible", "max_symmetric_rate", "optimize_hd_schedule", "DecodeOracle",
    "measure_delays", "run",
]
