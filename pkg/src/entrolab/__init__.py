"""entrolab: entropy-vector LP bounds for networks with correlated sources."""

__version__ = "0.1.0"

from ._rational import INF, rational
from .core import (
    DomainError,
    EntropyVector,
    GroundSet,
    JointDistribution,
    LinearFunctional,
    binary_entropy,
    binary_entropy_inverse,
    elemental_count,
    elemental_inequalities,
    entropy_of,
    entropy_vector_of,
    eval_conditional,
    eval_mutual,
    is_polymatroid,
    uniform_bits,
)
from .lp import (
    Feasible,
    Infeasible,
    LinearConstraint,
    LinearSystem,
    Optimal,
    Unbounded,
    minimize,
    solve_feasibility,
    verify_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
