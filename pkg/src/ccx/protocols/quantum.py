"""Desk-scale simulation of the quantum SetInc protocol.

Amplitude estimation is simulated on the invariant two-dimensional subspace
of the Grover operator: with p = <psi|Pi|psi> and theta = asin(sqrt(p)),
the operator restricted to span{psi, psi_perp} is the rotation R(2*theta),
whose canonical phase-estimation outcome distribution over y in [0, 2^t) is
the half/half mixture of Fejer kernels centered at +-theta/pi.  Estimates
are p~ = sin^2(pi*y/2^t).  A dense statevector construction of the same
circuit (ae_statevector_oracle) serves as an independent check.

Qubit accounting follows the cost model: each Grover reflection costs one
round trip of ceil(log2 n) qubits in the support-sampling cases; in the
agreement case each reflection round costs ceil(log2 N) + ceil(log2 n) with
a ceil(log2 N) register setup per repetition, where N = ceil(C_N*n1*n2/g^2)
is the simulated sample-register size.  The final verdict returns as one
classical bit, itemized separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..bits import popcount
from ..errors import ParameterError, PromiseViolation
from ..pif import SetIncParams, smallest_two
from ..rng import TAG_SAMPLE, Stream, derive_seed
from ..sim.channel import Protocol, Recv, Send
from .classical import (
    _orient,
    _resolved_inputs,
    resolve_setinc_plan,
    weight_width,
    width_for,
)

T_CAP = 14

# Register-size constant for the simulated agreement-case sampler register.
DEFAULT_REGISTER_CONSTANT = 32

# Median-of-reps boost; calibrated together with the classical constants.
DEFAULT_AE_REPS = 5


def grover_angle(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"probability {p} outside [0, 1]")
    return math.asin(math.sqrt(p))


@lru_cache(maxsize=4096)
def _outcome_dist_cached(p: float, t: int) -> np.ndarray:
    M = 1 << t
    theta = grover_angle(p)
    phi = theta / math.pi  # eigenphase fraction, in [0, 1/2]
    y = np.arange(M)
    probs = 0.5 * _fejer(phi - y / M, M) + 0.5 * _fejer(-phi - y / M, M)
    probs.setflags(write=False)
    return probs


def _fejer(delta: np.ndarray, M: int) -> np.ndarray:
    d = np.mod(np.asarray(delta, dtype=float), 1.0)
    s = np.sin(np.pi * d)
    num = np.sin(np.pi * M * d)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (num / (M * s)) ** 2
    return np.where(np.abs(s) < 1e-14, 1.0, vals)


def ae_outcome_distribution(p: float, t: int) -> np.ndarray:
    """Probability of each phase-estimation outcome y in [0, 2^t)."""
    if not 1 <= t <= T_CAP:
        raise ParameterError(f"t must lie in 1..{T_CAP}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"probability {p} outside [0, 1]")
    return _outcome_dist_cached(float(p), int(t))


def estimate_from_outcome(y: int, t: int) -> float:
    return math.sin(math.pi * y / (1 << t)) ** 2


def draw_outcome(p: float, t: int, u: float) -> int:
    cdf = np.cumsum(ae_outcome_distribution(p, t))
    y = int(np.searchsorted(cdf, u, side="right"))
    return min(y, (1 << t) - 1)


@dataclass(frozen=True)
class AEConfig:
    """Phase-estimation precision and confidence boosting."""

    t: int
    reps: int = DEFAULT_AE_REPS

    def __post_init__(self):
        if not 1 <= self.t <= T_CAP:
            raise ParameterError(f"t must lie in 1..{T_CAP}")
        if self.reps < 1 or self.reps % 2 == 0:
            raise ParameterError("reps must be odd and positive")

    @property
    def grover_iterations(self) -> int:
        return (1 << self.t) - 1


def ae_estimate(p_true: float, cfg: AEConfig, rng: Stream) -> float:
    """One amplitude estimate: sample an outcome, map through sin^2."""
    return estimate_from_outcome(draw_outcome(p_true, cfg.t, rng.float53()), cfg.t)


def ae_median_estimate(p_true: float, cfg: AEConfig, rng: Stream) -> float:
    vals = sorted(ae_estimate(p_true, cfg, rng) for _ in range(cfg.reps))
    return vals[cfg.reps // 2]


def choose_t(p_lo: Fraction, p_hi: Fraction, beta: Fraction) -> int:
    """Smallest t with one phase-estimation bin inside the decision margin."""
    lo, hi = sorted((float(p_lo), float(p_hi)))
    tb = grover_angle(float(beta))
    sep = min(tb - grover_angle(lo), grover_angle(hi) - tb)
    if sep <= 0:
        raise ParameterError("degenerate thresholds: no decision margin")
    t = max(1, math.ceil(math.log2(math.pi / sep)))
    return min(t, T_CAP)


# ---------------------------------------------------------------------------
# Dense statevector oracle (verification only)


def ae_statevector_oracle(p: float, t: int) -> np.ndarray:
    """Outcome distribution from a dense simulation of the QPE circuit.

    Registers: t counting qubits tensor the 2-dim rotation subspace.  The
    circuit is H^t, the controlled Grover powers G^(2^j), and the inverse
    QFT; measurement marginalizes the system qubit.
    """
    if not 1 <= t <= 8:
        raise ParameterError("statevector oracle capped at t <= 8")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"probability {p} outside [0, 1]")
    M = 1 << t
    theta = grover_angle(p)
    G = np.array(
        [
            [math.cos(2 * theta), -math.sin(2 * theta)],
            [math.sin(2 * theta), math.cos(2 * theta)],
        ]
    )
    psi = np.array([math.cos(theta), math.sin(theta)])

    state = np.kron(np.full(M, 1.0 / math.sqrt(M)), psi).astype(complex)
    for j in range(t):
        gate = np.zeros((2 * M, 2 * M), dtype=complex)
        Gpow = np.linalg.matrix_power(G, 1 << j)
        for k in range(M):
            blk = Gpow if (k >> j) & 1 else np.eye(2)
            gate[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = blk
        state = gate @ state
    omega = np.exp(-2j * np.pi / M)
    qft_inv = np.array([[omega ** (yk * k) for k in range(M)] for yk in range(M)]) / math.sqrt(M)
    state = np.kron(qft_inv, np.eye(2)) @ state
    amp = state.reshape(M, 2)
    return np.abs(amp) ** 2 @ np.ones(2)


# ---------------------------------------------------------------------------
# The quantum SetInc protocol


@dataclass(frozen=True)
class QCostModel:
    n_run: int
    case: int
    register_N: int  # 0 outside the agreement case

    @property
    def reflection_qubits(self) -> int:
        wq = width_for(self.n_run)
        if self.case == 3:
            return width_for(self.register_N) + wq
        return 2 * wq

    @property
    def setup_qubits(self) -> int:
        return width_for(self.register_N) if self.case == 3 else 0

    def qubits_per_run(self, cfg: AEConfig) -> int:
        return cfg.reps * (self.setup_qubits + cfg.grover_iterations * self.reflection_qubits)


class QSetIncProtocol(Protocol):
    """Amplitude-estimation protocol for SetInc; analytic 2-D simulation."""

    name = "qsetinc"
    quantum = True

    def __init__(
        self,
        params: SetIncParams,
        t: int | None = None,
        reps: int = DEFAULT_AE_REPS,
        register_constant: int = DEFAULT_REGISTER_CONSTANT,
    ):
        if params.variant in ("ghd", "eghd"):
            from ..pif import setinc_ghd_convert

            params = setinc_ghd_convert(params)
        self.params = params
        self.plan = resolve_setinc_plan(params.n, params.a, params.b, params.c2, params.g2)
        self.sign = _orient(params.variant, params.bar)
        tt = t if t is not None else choose_t(self.plan.p_lo, self.plan.p_hi, self.plan.beta)
        self.cfg = AEConfig(t=tt, reps=reps)
        if self.plan.case == 3:
            q = smallest_two(params.n, params.a, params.b, params.c2)
            ratio = Fraction(q.n1_2 * q.n2_2, params.g2 * params.g2)
            self.register_N = max(1, math.ceil(register_constant * ratio))
        else:
            self.register_N = 0
        self.cost = QCostModel(self.plan.n_run, self.plan.case, self.register_N)
        self._joint: tuple[int, int] | None = None

    @property
    def n(self) -> int:
        return self.params.n

    def descriptor(self) -> str:
        p = self.params
        return (
            f"qsetinc(n={p.n},a={p.a},b={p.b},c2={p.c2},g2={p.g2},"
            f"variant={p.variant},bar={int(p.bar)},t={self.cfg.t},reps={self.cfg.reps})"
        )

    def validate_local(self, side: str, inp: int) -> None:
        w = popcount(inp)
        want = self.params.a if side == "A" else self.params.b
        if w != want:
            raise PromiseViolation(f"party {side} weight {w} != {want}")

    def validate_pair(self, x: int, y: int) -> None:
        self.validate_local("A", x)
        self.validate_local("B", y)

    def prepare_joint(self, x: int, y: int) -> None:
        """Record the exact amplitude numerator/denominator for the run."""
        plan = self.plan
        xr = _resolved_inputs(plan, "A", x)
        yr = _resolved_inputs(plan, "B", y)
        inter = popcount(xr & yr)
        if plan.case == 1:
            self._joint = (inter, plan.ra)
        elif plan.case == 2:
            self._joint = (inter, plan.rb)
        else:
            agree = plan.n_run - popcount((xr ^ yr) & ((1 << plan.n_run) - 1))
            self._joint = (inter, agree)

    def _verdict(self, rand: Stream) -> tuple[int, float]:
        """Shared verdict computation (both parties draw identically)."""
        if self._joint is None:
            raise PromiseViolation("joint amplitude not prepared")
        num, den = self._joint
        plan, cfg = self.plan, self.cfg
        estimates = []
        for rep in range(cfg.reps):
            sub = Stream(derive_seed(rand.seed, rep, TAG_SAMPLE))
            if plan.case == 3:
                hits = sum(1 for _ in range(self.register_N) if sub.below(den) < num)
                p_run = hits / self.register_N
            else:
                p_run = num / den
            estimates.append(ae_estimate(p_run, cfg, sub))
        estimates.sort()
        med = estimates[cfg.reps // 2]
        high = med >= float(plan.beta)
        label = plan.high_to_setinc(high)
        return self.sign * label, med

    def _party(self, side: str, io, v: int):
        p = self.params
        plan, cfg = self.plan, self.cfg
        ww = weight_width(p.n)
        my_w = popcount(v)
        want_mine = p.a if side == "A" else p.b
        want_peer = p.b if side == "A" else p.a
        if side == "A":
            yield Send(my_w, ww)
            peer_w = yield Recv(ww)
        else:
            peer_w = yield Recv(ww)
            yield Send(my_w, ww)
        if my_w != want_mine or peer_w != want_peer:
            raise PromiseViolation(
                f"weights ({my_w},{peer_w}) do not match ({want_mine},{want_peer})"
            )
        runner = "A" if plan.case in (1, 3) else "B"
        refl_w = cfg.grover_iterations * self.cost.reflection_qubits
        for rep in range(cfg.reps):
            if plan.case == 3:
                if side == "A":
                    yield Send(None, self.cost.setup_qubits, "qubits")
                    yield Send(None, refl_w, "qubits")
                else:
                    yield Recv(self.cost.setup_qubits)
                    yield Recv(refl_w)
            else:
                half = cfg.grover_iterations * width_for(plan.n_run)
                if side == runner:
                    yield Send(None, half, "qubits")
                    yield Recv(half)
                else:
                    yield Recv(half)
                    yield Send(None, half, "qubits")
        label, _ = self._verdict(io.rand)
        bit = 1 if label == 1 else 0
        if side == runner:
            yield Send(bit, 1, "answer")
        else:
            got = yield Recv(1)
            label = 1 if got else -1
        return label

    def alice(self, io, x: int):
        return self._party("A", io, x)

    def bob(self, io, y: int):
        return self._party("B", io, y)

    # -- fast Monte Carlo path ----------------------------------------------

    def qubits_per_run(self) -> int:
        return self.cost.qubits_per_run(self.cfg)

    def classical_bits_per_run(self) -> int:
        return 2 * weight_width(self.params.n) + 1

    def run_trials(self, xs, ys, seeds):
        outputs = np.empty(len(seeds), dtype=np.int64)
        for i, (x, y, s) in enumerate(zip(xs, ys, seeds)):
            self.prepare_joint(x, y)
            label, _ = self._verdict(Stream(int(s)))
            outputs[i] = label
        qubits = np.full(len(seeds), self.qubits_per_run(), dtype=np.int64)
        return outputs, qubits
