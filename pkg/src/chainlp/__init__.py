"""Solvers for the chain-ordered budget LP and the reward schedules built on it.

Quick start::

    from chainlp import validate, solve
    inst = validate([1, 2, 4], [2, 0.75, 0.25], 2)
    solve(inst).x          # array([0.        , 1.33333333, 4.        ])
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceeded,
    ChainLPError,
    DidNotConverge,
    DimensionMismatch,
    EmptyInstance,
    IndexOutOfRange,
    InvalidInstance,
    NegativeBudget,
    NoCandidate,
    NonFiniteValue,
    NonMonotoneProfile,
    NonPositiveBound,
    NonPositiveWeight,
    NotInterior,
    TooLarge,
    UnsortedBounds,
)
from .fast import BlockerTable, RangeAddArray, compute_blockers, solve_fast
from .greedy import GreedyState, GreedyTrace, select_next, solve_greedy
from .model import DEFAULT_TOL, LpInstance, PrefixSums, Solution, Tolerances, validate
from .oracle import ExactSolution, RationalInstance, enumerate_candidates, solve_exact
from .proportional import (
    EquilibriumProfile,
    best_response_dynamics,
    efficiency_ratio,
    equilibrium,
    equilibrium_2agent,
    equilibrium_interior,
)
from .reduction import (
    MechanismInstance,
    RewardSchedule,
    budget_lhs,
    build_reward,
    design,
    sort_types,
    to_lp,
    verify_incentives,
)
from .solvers import ALGORITHMS, solve
