"""Small exact-simulation toolkit for entangled-qubit binary classifiers."""

from . import arch, data, qsim, train

__all__ = ["arch", "data", "qsim", "train"]
__version__ = "0.1.0"
