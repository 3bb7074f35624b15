"""Multi-precision three-point root finding with convergence diagnostics.

Public surface:

* :mod:`mproots.numerics` -- precision contexts and BigReal arithmetic
* :mod:`mproots.problems` -- benchmark equations and synthetic polynomials
* :mod:`mproots.weights` -- weight functions and their validation
* :mod:`mproots.methods` -- iteration steps, the catalog, and the run driver
* :mod:`mproots.series` -- exact truncated-series oracle for the order proof
* :mod:`mproots.analysis` -- ACOC, efficiency index, table assembly
"""

from .analysis import acoc, asymptotic_constant, build_table, efficiency_index
from .methods import catalog, get_method, run
from .numerics import BigReal, PrecisionContext, compare_error, to_sci_string
from .problems import builtin_problems, get_problem, make_polynomial_problem
from .series import derive_family_error, derive_newton_error, resolve_r8
from .weights import builtin_weights, get_weight, validate_weight

__all__ = [
    "BigReal",
    "PrecisionContext",
    "acoc",
    "asymptotic_constant",
    "build_table",
    "builtin_problems",
    "builtin_weights",
    "catalog",
    "compare_error",
    "derive_family_error",
    "derive_newton_error",
    "efficiency_index",
    "get_method",
    "get_problem",
    "get_weight",
    "make_polynomial_problem",
    "resolve_r8",
    "run",
    "to_sci_string",
    "validate_weight",
]

__version__ = "0.1.0"
