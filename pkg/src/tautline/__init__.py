"""1D total-variation (ROF) denoising via the taut string."""

from .errors import (
    ConfigurationError,
    ConvergenceError,
    CsvParseError,
    DomainError,
    GridError,
    IllConditionedError,
    InconsistencyError,
    InvalidIntegrandError,
    MonotonicityError,
    SignalFileError,
    SignalIOError,
    SizeError,
    TautlineError,
    ValidationError,
)
from .signal import (
    CumulativePath,
    JumpReport,
    PiecewiseConstantSignal,
    approximate_limits,
    cumulative,
    generate,
    jump_set_of,
    read_csv,
    write_csv,
)
from .taut import (
    ContactSets,
    TautSolution,
    Tube,
    alpha_max,
    contact_sets,
    denoise,
    derivative,
    solve,
)
from .rof_oracle import RofProblem, energy, minimize_convex_integrand, solve_bruteforce, solve_dual
from .analysis import Verdict, run_suite, verify_corpus

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
