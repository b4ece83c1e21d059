"""Signed structure recovery for binary Ising Markov random fields.

The estimator regresses each spin on all the others with an l1 penalty
and reads the signed neighborhood off the support of the fit; the rest of
the package provides exact and Gibbs samplers, Fisher-matrix condition
checks, recovery thresholds, a Chow-Liu baseline, and a reproducible
sweep harness for the phase-transition experiments.
"""

from .baselines import chow_liu_forest, empirical_mutual_information, mutual_information_matrix
from .fisher import (
    AssumptionReport,
    FisherMatrix,
    TheoremThresholds,
    check_assumptions,
    concentration_probe,
    eta,
    population_fisher,
    sample_fisher,
    theorem_thresholds,
)
from .graphs import (
    IsingModel,
    SignedEdgeSet,
    Topology,
    assign_couplings,
    load_model,
    make_grid4,
    make_grid8,
    make_star,
    neighbor_positions,
    save_model,
    signed_edges,
)
from .harness import ExperimentConfig, TrialResult, parse_config, run_sweep, run_trial
from .logreg import (
    NodeRegressionProblem,
    RegressionSolution,
    SolverOptions,
    fit_all_nodes,
    fit_l1_logistic,
    grad_nll,
    hessian_nll,
    nll,
    witness_check,
)
from .sampling import (
    DistributionTable,
    EnumerationCapExceeded,
    SampleMatrix,
    conditional_prob,
    enumerate_distribution,
    gibbs_sample,
    load_samples,
    sample_exact_enum,
    sample_exact_star,
    save_samples,
)
from .selection import (
    GraphEstimate,
    SignedNeighborhood,
    edge_disagreements,
    estimate_graph,
    signed_neighborhood,
    success,
    unsigned_disagreements,
)

__version__ = "0.1.0"
