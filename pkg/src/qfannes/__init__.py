"""Tsallis entropy of finite-dimensional quantum states and its continuity bound."""

from ._kernels import BACKEND
from .axioms import BlockState, run_axiom_suite
from .entropy import (
    EntropyValue,
    max_entropy,
    tsallis_entropy,
    tsallis_entropy_classical,
    tsallis_relative_entropy,
)
from .fannes import BoundReport, Mode, TightnessTable, check_fannes, fannes_bound, sorted_eigen_gaps, sweep
from .linalg import (
    DensityOperator,
    EigenNonConvergence,
    HermitianMatrix,
    InvalidDensityError,
    ProbVector,
    Spectrum,
    hermitian_eigen,
    sample_density,
    sample_simplex,
    trace_norm,
    validate_density,
)
from .qfunc import QParam, Regime, eta, fannes_radius, q_log

__version__ = "0.1.0"
