"""Wave-energy-converter farm power evaluation and layout optimization."""

__version__ = "0.1.0"

from . import climate, farm, hydro, simplex
from .hydro import PowerEvaluator, active_backend

__all__ = ["climate", "farm", "hydro", "simplex", "PowerEvaluator",
           "active_backend", "__version__"]

# harness and optimize import the package root, so they load lazily here
from . import optimize, harness  # noqa: E402

__all__ += ["optimize", "harness"]
