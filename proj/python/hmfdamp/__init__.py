"""HMF weighted-particle Vlasov simulator and algebraic damping analysis."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
