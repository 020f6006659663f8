"""Guessing games with mutually unbiased bases in prime dimension."""

from .errors import BudgetExceeded, ContractError, ConvergenceError
from .game import (
    CoinKind,
    Strategy,
    classical_map_value,
    classical_upper_bound,
    controlled_unitary,
    guessing_probability,
    perfect_probe,
    perfect_strategy,
)
from .mub import MubSet, basis_pool, dpp_set, dpp_unitary, relabel, standard_set, verify_mub_set, wf_unitary
from .optimize import SeesawConfig, SeesawResult, seesaw
from .search import ScanMode, ScanReport, classical_exhaustive, perturb_set, scan

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CoinKind",
    "ContractError",
    "ConvergenceError",
    "MubSet",
    "ScanMode",
    "ScanReport",
    "SeesawConfig",
    "SeesawResult",
    "Strategy",
    "basis_pool",
    "classical_exhaustive",
    "classical_map_value",
    "classical_upper_bound",
    "controlled_unitary",
    "dpp_set",
    "dpp_unitary",
    "guessing_probability",
    "perfect_probe",
    "perfect_strategy",
    "perturb_set",
    "relabel",
    "scan",
    "seesaw",
    "standard_set",
    "verify_mub_set",
    "wf_unitary",
]
