from .fir import FirProblem
from .pid import PidProblem
from .sphere import SphereProblem
from .tsp import TspProblem, generate_tsp, tour_length
from .wireless import (
    SINR_THRESHOLDS_DB,
    WirelessProblem,
    generate_wireless,
)

__all__ = [
    "FirProblem",
    "PidProblem",
    "SphereProblem",
    "TspProblem",
    "WirelessProblem",
    "SINR_THRESHOLDS_DB",
    "generate_tsp",
    "generate_wireless",
    "tour_length",
]
