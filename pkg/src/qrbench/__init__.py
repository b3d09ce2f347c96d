"""Bounds on two-way assisted capacities of quantum channels."""
from .linops import DensityMatrix, relative_entropy, von_neumann_entropy
from .dv_channels import KrausChannel, choi, make_channel
from .dv_bounds import bound_report
from .gaussian_core import GaussianCM, gaussian_entropy, gaussian_relative_entropy, tmsv_cm
from .gaussian_bounds import CanonicalForm, compose, flux_upper, gaussian_bound_report, lower_bound
from .reports import BoundReport

__all__ = [
    "BoundReport",
    "CanonicalForm",
    "DensityMatrix",
    "GaussianCM",
    "KrausChannel",
    "bound_report",
    "choi",
    "compose",
    "flux_upper",
    "gaussian_bound_report",
    "gaussian_entropy",
    "gaussian_relative_entropy",
    "lower_bound",
    "make_channel",
    "relative_entropy",
    "tmsv_cm",
    "von_neumann_entropy",
]
__version__ = "0.1.0"
