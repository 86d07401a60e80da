"""Exact arithmetic for norm equations c(t^2 - a) = N_{K/Q}(z) and their torsors."""

from .errors import BudgetError, DomainError, NormTorsorError, UnsupportedCase
from .numfield import NumberField, absolute_norm, norm_form, sqrt_in_field
from .poly import MultiPoly, UniPoly
from .quadform import QuadraticForm, solve_conic
from .torsor import NormEquationProblem, XSolution, solve_by_enumeration, solve_quartic_split

__version__ = "0.1.0"
