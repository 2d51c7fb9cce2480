"""sievecalc: numerical engine for weighted-sieve bound constants."""

__version__ = "0.1.0"

from .functions import (  # noqa: F401
    DomainError,
    FunctionTable,
    StepTable,
    build_function_table,
    eval_sieve_function,
    eval_step_lower,
    load_step_tables,
)
from .levels import (  # noqa: F401
    ConfigError,
    ExponentVector,
    LevelProvider,
    well_factorable_exponents,
)
from .quadrature import QuadratureError  # noqa: F401
from .runner import RunConfig, run_terms  # noqa: F401
from .terms.base import assemble, eval_term, make_context  # noqa: F401
