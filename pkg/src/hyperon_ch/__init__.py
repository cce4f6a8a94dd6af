"""Clauser-Horne tests with entangled hyperon pairs.

Quantum predictions for the decay chain eta_c -> Lambda anti-Lambda ->
(p pi-)(pbar pi+), a generalized CH inequality for bounded-probability
measurements, local hidden variable reference models, and a Monte Carlo
event generator that estimates the CH statistic from simulated decays.
"""

__version__ = "0.1.0"

from .ch_inequality import (
    Bounds,
    CHSettings,
    ProbabilityTable,
    ch_functional,
    coplanar_lhs,
    maximize_violation,
    quantum_table,
    scalar_ch,
    violation_region,
)
from .event_generator import (
    CHEstimate,
    EventRecord,
    EventSample,
    GeneratorConfig,
    UnderPoweredError,
    analyze_events,
    estimate_joint,
    estimate_marginal,
    export_events,
    generate_events,
    read_events_csv,
    run_experiment,
    sample_pair,
    write_events_csv,
)
from .lhv_models import LhvModel, bundled_model, lhv_joint, lhv_marginal, verify_ch
from .quantum_model import (
    ALPHA_DEFAULT,
    BipartiteSpinState,
    DecayParams,
    effect_minus,
    effect_plus,
    joint_probability,
    marginal_probability,
    singlet_state,
)
from .spacelike import (
    BETA_DEFAULT,
    beta_from_masses,
    critical_beta,
    is_spacelike,
    mixed_bound,
    spacelike_fraction_analytic,
    spacelike_fraction_mc,
    timelike_max,
)

__all__ = [
    "ALPHA_DEFAULT",
    "BETA_DEFAULT",
    "BipartiteSpinState",
    "Bounds",
    "CHEstimate",
    "CHSettings",
    "DecayParams",
    "EventRecord",
    "EventSample",
    "GeneratorConfig",
    "LhvModel",
    "ProbabilityTable",
    "UnderPoweredError",
    "analyze_events",
    "beta_from_masses",
    "bundled_model",
    "ch_functional",
    "coplanar_lhs",
    "critical_beta",
    "effect_minus",
    "effect_plus",
    "estimate_joint",
    "estimate_marginal",
    "export_events",
    "generate_events",
    "is_spacelike",
    "joint_probability",
    "lhv_joint",
    "lhv_marginal",
    "marginal_probability",
    "maximize_violation",
    "mixed_bound",
    "quantum_table",
    "read_events_csv",
    "run_experiment",
    "sample_pair",
    "scalar_ch",
    "singlet_state",
    "spacelike_fraction_analytic",
    "spacelike_fraction_mc",
    "timelike_max",
    "verify_ch",
    "violation_region",
    "write_events_csv",
]
