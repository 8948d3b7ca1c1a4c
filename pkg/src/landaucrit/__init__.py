"""Ground states and critical magnetic fields of a relativistic hydrogenic atom
restricted to its lowest Landau level.

The package computes the effective one-dimensional theory of a Dirac-Coulomb
electron in a strong constant magnetic field: the Landau-averaged potentials,
the nonlinear Rayleigh fixed point for the lowest level lambda_1(nu, B), the
critical field B_L(nu) at which that level reaches the lower continuum edge,
rigorous analytic brackets for the three-dimensional critical field, and the
conversions to Tesla.
"""

from .errors import BracketError, CoefficientError, QuadratureError, TruncationError
from .potentials import (
    PotentialEvaluation,
    PotentialSpec,
    VariableMap,
    a_ell,
    a_ell_direct,
    a_ell_grid,
    mu_bound_constant,
    scaling_check,
    y_of_z,
    z_of_y,
)

__version__ = "0.1.0"
