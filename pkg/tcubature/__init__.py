"""Robust Student's t stochastic cubature rules and filters."""
from importlib.metadata import PackageNotFoundError, version

try:
    from ._version import version as __version__
except ImportError:  # pragma: nocover
    try:
        __version__ = version("tcubature")
    except PackageNotFoundError:
        __version__ = "0.1-dev0"


from .filters import FilterBank, StateEstimate
from .filters.gaussian import SIF
from .filters.student_t import RSTCF, RSTMCF, RSTSCF
from .rules import StudentTDensity, registry

__all__ = [
    "FilterBank",
    "RSTCF",
    "RSTMCF",
    "RSTSCF",
    "SIF",
    "StateEstimate",
    "StudentTDensity",
    "registry",
]
