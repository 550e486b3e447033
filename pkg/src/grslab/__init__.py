"""grslab: finite-scan experiments on GRS weights and the spaces they define."""
from .kernels import BACKEND
from .weightlab import ConditionReport, Weight, parse_weight

__version__ = "0.1.0"
__all__ = ["BACKEND", "ConditionReport", "Weight", "parse_weight", "__version__"]
