"""Extremal signed k-term sums of unit vectors: exact solvers, heuristics, bounds and minimax search."""

from .bounds import BoundReport, applicable_bounds, best_exact_lower, lambert_phi
from .exact import (
    BudgetExceeded,
    SignedSelection,
    SolveResult,
    max_over_selections,
    max_over_selections_planar,
    max_signed_sum,
)
from .generators import GeneratorSpec, generate
from .heuristics import bang_ascent, cap_greedy_selection
from .minimax import MinimaxEstimate, SearchSettings, estimate_c
from .sphere import Cap, Configuration, GeometryError

__all__ = [
    "BoundReport", "BudgetExceeded", "Cap", "Configuration", "GeneratorSpec", "GeometryError",
    "MinimaxEstimate", "SearchSettings", "SignedSelection", "SolveResult", "applicable_bounds",
    "bang_ascent", "best_exact_lower", "cap_greedy_selection", "estimate_c", "generate",
    "lambert_phi", "max_over_selections", "max_over_selections_planar", "max_signed_sum",
]
