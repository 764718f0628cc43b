"""Adversarial classification risk, bottleneck transport and game
certificates on finite metric spaces, with exact rational arithmetic and
built-in cross-verification."""

from .errors import (
    AdvRiskError,
    EmptySpace,
    MalformedNetwork,
    MassOrder,
    NonMetric,
    NotMidpointComplete,
    NotProbability,
    PriorNotEqual,
    SpaceMismatch,
    TooLarge,
    UnknownCheck,
    UnknownHypothesis,
    ZeroMass,
)
from .metric import (
    DecisionRegion,
    FiniteMetricSpace,
    MidpointReport,
    build_space,
    contract,
    expand,
    grid_1d,
    grid_2d,
    is_midpoint_complete,
    midpoint,
    space_from_matrix,
    space_from_points,
)
from .measure import DiscreteMeasure, dominates, measure_of, min_overlap, total_variation
from .flow import UNBOUNDED, FlowNetwork, FlowResult, max_flow, min_cut
from .transport import (
    Coupling,
    TransportResult,
    ball_sup_expectation,
    ball_sup_measure,
    eroded_excess_bruteforce,
    excess_bruteforce,
    in_winf_ball,
    threshold_cost,
    unbalanced_cost,
    w_infinity,
)
from .risk import (
    GameInstance,
    LossProblem,
    MarkovKernelSet,
    risk_expansion,
    risk_general,
    risk_standard,
    risk_transport_maps,
    risk_winf_ball,
    worst_case_loss,
)
from .optimal import OptimalRiskReport, optimal_risk, optimal_risk_bruteforce
from .game import (
    LayeredBallReport,
    NashCertificate,
    adversary_best_response,
    classifier_best_response,
    infsup_value,
    layered_ball_check,
    nash_construct,
    nash_midpoint_construct,
    payoff,
    supinf_value,
)
from .checks import CheckReport, GapRecord, InstanceGenerator, check, probe_midpoint_gap, run_suite

__version__ = "0.1.0"
