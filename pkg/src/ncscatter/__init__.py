"""Numerical dilations, scattering data and transfer functions for
coisometric liftings of row contractions.

Import submodules explicitly (``from ncscatter import lifting``).
Nothing numerical loads at package import time, so the command line
front end can pin BLAS thread counts into the environment before the
numerics stack comes up.
"""

__version__ = "0.1.0"
