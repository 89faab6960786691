"""Monte Carlo success estimation with reproducible per-trial seeds.

Trial i of a run with master seed s uses the protocol seed
derive_seed(s, i, TAG_TRIAL) and the instance-generator stream
derive_seed(s, i, TAG_INSTANCE), so aggregation is order-independent and
any single trial can be replayed in isolation.  Protocols exposing a
``run_trials`` batch method (the kernel-backed fast path) are used when
available; the slow path runs the full two-party machinery per trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ParameterError
from ..rng import TAG_INSTANCE, TAG_TRIAL, Stream, derive_seed
from .channel import run_protocol


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ParameterError("trials must be >= 1")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class EstimateResult:
    trials: int
    successes: int
    rate: float
    wilson_lo: float
    wilson_hi: float
    mean_bits: float
    max_bits: int
    mean_bits_idealized: float
    mean_qubits: float
    max_qubits: int

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "rate": self.rate,
            "wilson_lo": self.wilson_lo,
            "wilson_hi": self.wilson_hi,
            "mean_bits": self.mean_bits,
            "max_bits": self.max_bits,
            "mean_bits_idealized": self.mean_bits_idealized,
            "mean_qubits": self.mean_qubits,
            "max_qubits": self.max_qubits,
        }


def estimate_success(
    proto,
    instance_generator,
    trials: int,
    master_seed: int,
    fast: bool = True,
) -> EstimateResult:
    """Empirical success rate of `proto` over seeded random instances.

    instance_generator(stream) must return (x, y, expected_output).
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    xs, ys, truth = [], [], []
    for i in range(trials):
        gen_stream = Stream(derive_seed(master_seed, i, TAG_INSTANCE))
        x, y, want = instance_generator(gen_stream)
        xs.append(x)
        ys.append(y)
        truth.append(want)
    seeds = [derive_seed(master_seed, i, TAG_TRIAL) for i in range(trials)]

    if fast and hasattr(proto, "run_trials"):
        outputs, costs = _run_fast(proto, xs, ys, seeds)
        bits = costs["bits"]
        bits_ideal = costs["bits_idealized"]
        qubits = costs["qubits"]
        successes = sum(1 for o, w in zip(outputs, truth) if int(o) == w)
        lo, hi = wilson_interval(successes, trials)
        return EstimateResult(
            trials=trials,
            successes=successes,
            rate=successes / trials,
            wilson_lo=lo,
            wilson_hi=hi,
            mean_bits=float(sum(bits)) / trials,
            max_bits=int(max(bits)),
            mean_bits_idealized=float(sum(bits_ideal)) / trials,
            mean_qubits=float(sum(qubits)) / trials,
            max_qubits=int(max(qubits)),
        )

    successes = 0
    tb, ti, tq = 0, 0, 0
    mb, mq = 0, 0
    for i in range(trials):
        rr = run_protocol(proto, xs[i], ys[i], seeds[i])
        if rr.output == truth[i]:
            successes += 1
        led = rr.ledger
        tb += led.bits_sent
        ti += led.bits_idealized
        tq += led.qubits_sent
        mb = max(mb, led.bits_sent)
        mq = max(mq, led.qubits_sent)
    lo, hi = wilson_interval(successes, trials)
    return EstimateResult(
        trials=trials,
        successes=successes,
        rate=successes / trials,
        wilson_lo=lo,
        wilson_hi=hi,
        mean_bits=tb / trials,
        max_bits=mb,
        mean_bits_idealized=ti / trials,
        mean_qubits=tq / trials,
        max_qubits=mq,
    )


def _run_fast(proto, xs, ys, seeds):
    out = proto.run_trials(xs, ys, seeds)
    outputs, rest = out[0], out[1:]
    if len(rest) == 2:  # classical: (bits_measured, bits_idealized)
        bits, bits_ideal = rest
        qubits = [0] * len(seeds)
    else:  # quantum: (qubits,)
        (qubits,) = rest
        per = proto.classical_bits_per_run()
        bits = [per] * len(seeds)
        bits_ideal = bits
    return outputs, {"bits": bits, "bits_idealized": bits_ideal, "qubits": qubits}
