"""Exact solvers for multi-weighted energy and mean-payoff games.

Games are finite directed multigraphs with integer weight vectors on
edges and states split between two players. The central questions: can
Player 1, given some nonnegative initial credit vector, keep every
component of the running sum nonnegative forever (unknown initial
credit), and can a finite-memory strategy secure a mean-payoff threshold
in every dimension. All arithmetic is exact (integers and fractions).
"""

from .errors import (
    DimensionError,
    InvalidGameError,
    LpError,
    MwgError,
    ParseError,
    StrategyError,
    WalkError,
)
from .graphs import (
    Circuit,
    GraphEdge,
    MultiGraph,
    bounded_circulation_oracle,
    circuit_weight,
    dominance,
    eulerian_circuit_from_circulation,
    min_mean_cycle,
    negative_cycle_in_dimension,
    nonnegative_circuit,
    reachable_subgraph,
    sccs,
    validate_circuit,
    with_unit_drain_loops,
    zero_circuit,
)
from .model import (
    Edge,
    GameStructure,
    Lasso,
    MemorylessStrategy,
    MooreStrategy,
    ProductGraph,
    State,
    Violation,
    as_moore,
    check_strategy,
    energy_level,
    mean_payoff_of_lasso,
    product_with_strategy,
    scale_weights,
    shift_weights,
    strategies_equal,
    validate_game,
    vector_add,
    vector_sub,
)
from .reductions import (
    CnfFormula,
    DecodedAssignment,
    KnapsackInstance,
    decode_3sat_spoiler,
    decode_knapsack_strategy,
    decode_memoryless_assignment,
    encode_3sat_memoryless,
    encode_3sat_two_player,
    encode_knapsack,
)
from .formats import (
    games_equal,
    parse_certificate,
    parse_dimacs,
    parse_game,
    parse_knapsack,
    parse_threshold,
    write_certificate,
    write_game,
)
from .solvers import (
    CertificateCheck,
    MemorylessVerdict,
    Verdict,
    as_multigraph,
    clamped_fixed_credit_oracle,
    enumerate_p2_memoryless,
    product_multigraph,
    search_finite_memory_strategy,
    solve_meanpayoff_threshold,
    solve_memoryless_p1_energy,
    solve_memoryless_p1_meanpayoff,
    solve_one_player_energy,
    solve_unknown_credit,
    sufficient_credit,
    threshold_shifted,
    verify_p1_certificate,
    verify_p2_spoiler,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
