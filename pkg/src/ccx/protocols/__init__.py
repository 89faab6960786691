from .classical import (
    DetTotalProtocol,
    PIProtocol,
    SetIncPlan,
    SetIncProtocol,
    TesterConfig,
    WeightExchangeProtocol,
    amplified_fraction_tester,
    combinadic_rank,
    combinadic_unrank,
    find_first_difference_pure,
    fraction_tester,
    resolve_setinc_plan,
    uniform_sample_pure,
)
from .quantum import (
    AEConfig,
    QCostModel,
    QSetIncProtocol,
    ae_estimate,
    ae_outcome_distribution,
    ae_statevector_oracle,
    choose_t,
    grover_angle,
)

__all__ = [
    "DetTotalProtocol",
    "PIProtocol",
    "SetIncPlan",
    "SetIncProtocol",
    "TesterConfig",
    "WeightExchangeProtocol",
    "amplified_fraction_tester",
    "combinadic_rank",
    "combinadic_unrank",
    "find_first_difference_pure",
    "fraction_tester",
    "resolve_setinc_plan",
    "uniform_sample_pure",
    "AEConfig",
    "QCostModel",
    "QSetIncProtocol",
    "ae_estimate",
    "ae_outcome_distribution",
    "ae_statevector_oracle",
    "choose_t",
    "grover_angle",
]
