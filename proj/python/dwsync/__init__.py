"""Double-well synchronization toolkit.

Quadrature of the invariant-measure integrals behind the top Lyapunov
exponent, Monte Carlo exponent estimators, and common-noise ensemble
diagnostics for the degenerate-noise double-well SDE.
"""

from ._dwsync import *  # noqa: F401,F403
from ._dwsync import __version__  # noqa: F401
