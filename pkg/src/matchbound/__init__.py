"""Exact counts and entropy-method upper bounds for A-perfect matchings in
bipartite hypergraphs, Latin-square transversals and proper edge-colorings."""

from .bounds import (
    BoundParameters,
    BoundReport,
    coloring_bound_ln,
    finite_matching_bound,
    integral_log_poly,
    integral_log_poly_closed_k2,
    lemma41_deviation,
    lemma42_check,
    reference_envelope_ln,
    transversal_bound_ln,
)
from .constructions import (
    LatinSquare,
    UniformHypergraph,
    cayley_cyclic,
    incidence_hypergraph,
    kdd_union,
    ls_to_hypergraph,
    pruned_hypergraph,
    transversal_free_entries,
)
from .enumeration import (
    CountReport,
    count_a_perfect_matchings,
    count_proper_colorings,
    count_transversals,
    enumerate_matchings,
    per_entry_transversal_counts,
    sample_matching_uniform,
)
from .errors import BudgetExhausted, Infeasible, InstanceTooLarge, MatchboundError, ParseError
from .hypercore import (
    BipartiteHypergraph,
    Matching,
    bad_edge_sets,
    degree_stats,
    incidence_exponent,
    validate_hypergraph,
)

__version__ = "0.1.0"
