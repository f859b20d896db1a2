"""Sum-of-Gaussians approximations of P(t), the normal probability on [-t, t]."""

from .analysis import ErrorReport, convergence_table, deviation_at, max_deviation
from .approx import ParameterSet, envelope_range, p_approx, p_leading, shenton_bounds
from .errors import ContractError, DomainError, NoSolution
from .fit import FitConfig, fit_nodes, fit_random, upper_boundary_params
from .geometry import BoundTable, Scheme, bounds, validate
from .oracle import p_exact

__version__ = "0.1.0"
