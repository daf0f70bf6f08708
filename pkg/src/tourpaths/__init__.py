"""Directed k-edge paths in tournaments: exact counts, bounds, kernels, census."""

from ._backend import BACKEND
from .census import CensusRecord, HamiltonRecord, census, census_all, enumerate_labeled, hamilton_census
from .kernel import (
    StepKernel,
    chain_trace,
    g_recursion,
    maximize_density,
    path_density,
    regularity_gap,
    stability_check,
    tournament_to_kernel,
    validate_kernel,
    with_diagonal,
)
from .paths import (
    bounds,
    check_theorem1,
    count_all_paths,
    count_paths,
    count_paths_dfs,
    count_paths_subset_dp,
    count_walks,
    hamilton_path_count,
)
from .tournament import (
    Tournament,
    degree_stats,
    paley,
    parse,
    random_tournament,
    rotational,
    serialize,
    transitive,
    validate,
)

__version__ = "0.1.0"
