"""htwl: a numerical laboratory for heavy-tailed lattice random walks.

Builds lattice step laws with exact regularly varying tails (emphasis on
the alpha = 1 Cauchy case), computes their exact finite-n distributions,
ladder-epoch tails and Green functions, and verifies the corresponding
large-deviation, Fuk-Nagaev, ladder and renewal asymptotics at desk scale.
"""

__version__ = "0.1.0"

from .slowvary import SlowVaryFn, const, logpow, loglogpow, explogpow, ell, ell_star
from .steplaw import StepLaw, BoundedLaw, build_step_law
from .scaling import ScalingTable, btilde
from . import laws

__all__ = [
    "SlowVaryFn", "const", "logpow", "loglogpow", "explogpow", "ell", "ell_star",
    "StepLaw", "BoundedLaw", "build_step_law", "ScalingTable", "btilde", "laws",
    "__version__",
]
