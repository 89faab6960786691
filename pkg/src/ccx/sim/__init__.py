from .channel import (
    CostLedger,
    Message,
    NoteSample,
    PartyIO,
    Protocol,
    Recv,
    RunResult,
    Send,
    replay,
    run_protocol,
)
from .harness import EstimateResult, estimate_success, wilson_interval

__all__ = [
    "CostLedger",
    "Message",
    "NoteSample",
    "PartyIO",
    "Protocol",
    "Recv",
    "RunResult",
    "Send",
    "replay",
    "run_protocol",
    "EstimateResult",
    "estimate_success",
    "wilson_interval",
]
