"""Spectral profiles, Faber-Krahn quantities and uniform mixing times of weighted graphs."""

from .construction import (
    build_gk_dense,
    construction_sizes,
    lumped_chain,
    rho_lower_bound,
    simulate_walk,
    tau_construction,
    three_coin_probs,
)
from .errors import SpecProfileError
from .graph import (
    WeightedGraph,
    build_graph,
    dirichlet_form_and_norms,
    dirichlet_operator,
    laplacian,
    load_graph,
    transition_kernel,
)
from .mixing import heat_kernel, linf_deviation, tau_inf, tau_inf_from
from .profile import rayleigh_sets, rho, spectral_profile
from .rough_isometry import binary_tree, check_rough_isometry, path_metric
from .spectral import conductance, lambda0, lambda_fk, log_sobolev, spectral_gap

__version__ = "0.1.0"
