"""Exact verification toolkit for the Laguerre matrices behind the sharpened
radial Strichartz inequality in two dimensions."""

from .exactnum import RatPoly, factorial, central_binomial, exp_moment_integrate
from .laguerre import laguerre_half, connection_coefficients
from .qcore import QMatrix, build_q_matrix, q_coefficient
from .kernelk import build_connection, build_kappa, kappa_binomial, kappa_integral
from .spectra import char_poly, conjectured_eigenvalue, verify_eig_conjecture
from .functional import CoeffSeq, evaluate
from .hatcheck import ClubPartition, signed_count

__version__ = "0.1.0"
