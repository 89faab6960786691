"""Two-party protocol execution with exact cost accounting.

Protocols are written as a pair of generator programs (one per party) that
yield Send/Recv operations; a `yield Send(...)` transmits, a `v = yield
Recv(width)` blocks until the peer's next message and evaluates to its
value.  The same generators run in-process (this module) or split across a
TCP connection (ccx.sim.net), which is what makes the ledger
transport-independent.

Accounting rules: bits_sent is the sum of classical payload widths (framing
is never counted); qubits_sent sums quantum register widths.  Messages of
kind "answer" are the convention bit returning the output to the
non-deciding party and are also tallied separately.  Sampler machinery
messages carry kind "sample"; a NoteSample marker (no transmission) records
the idealized per-sample charge so ledgers expose both accounting modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InternalInvariantError, PromiseViolation
from ..rng import RNG_ALGO, Stream

CLASSICAL_KINDS = ("bits", "answer", "sample")
QUANTUM_KIND = "qubits"


@dataclass(frozen=True)
class Send:
    value: int | None
    width: int
    kind: str = "bits"

    def __post_init__(self):
        if self.width < 0 or self.width > 0xFFFF:
            raise InternalInvariantError(f"message width {self.width} out of range")
        if self.kind in CLASSICAL_KINDS:
            if self.value is None or not 0 <= self.value < (1 << self.width):
                raise InternalInvariantError("classical value must fit its width")
        elif self.kind != QUANTUM_KIND:
            raise InternalInvariantError(f"unknown message kind {self.kind!r}")


@dataclass(frozen=True)
class Recv:
    width: int


@dataclass(frozen=True)
class NoteSample:
    """Marks completion of one uniform sample; carries the idealized charge."""

    ideal_width: int


@dataclass(frozen=True)
class Message:
    sender: str  # "A" or "B"
    kind: str
    width: int
    value: int | None


@dataclass
class CostLedger:
    bits_sent: int = 0
    qubits_sent: int = 0
    rounds: int = 0
    answer_bits: int = 0
    sample_bits: int = 0  # measured bits of sampler-tagged messages
    sample_count: int = 0
    sample_ideal_bits: int = 0
    messages: list = field(default_factory=list)

    def record(self, msg: Message) -> None:
        if self.messages and self.messages[-1].sender == msg.sender:
            pass
        else:
            self.rounds += 1
        self.messages.append(msg)
        if msg.kind == QUANTUM_KIND:
            self.qubits_sent += msg.width
        else:
            self.bits_sent += msg.width
            if msg.kind == "answer":
                self.answer_bits += msg.width
            elif msg.kind == "sample":
                self.sample_bits += msg.width

    def note_sample(self, ideal_width: int) -> None:
        self.sample_count += 1
        self.sample_ideal_bits += ideal_width

    @property
    def bits_idealized(self) -> int:
        """Classical bits with sampler traffic recharged at the ideal rate."""
        return self.bits_sent - self.sample_bits + self.sample_ideal_bits

    def summary(self) -> dict:
        return {
            "bits_sent": self.bits_sent,
            "bits_idealized": self.bits_idealized,
            "qubits_sent": self.qubits_sent,
            "rounds": self.rounds,
            "messages": len(self.messages),
            "answer_bits": self.answer_bits,
            "sample_count": self.sample_count,
        }


@dataclass(frozen=True)
class RunResult:
    output: int
    ledger: CostLedger
    transcript: tuple
    seed: int
    rng_algo: str = RNG_ALGO
    protocol: str = ""

    def as_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "output": self.output,
            "seed": self.seed,
            "rng_algo": self.rng_algo,
            "ledger": self.ledger.summary(),
            "transcript_digest": transcript_digest(self.transcript),
        }


def transcript_digest(transcript) -> str:
    import hashlib

    h = hashlib.sha256()
    for m in transcript:
        h.update(f"{m.sender}|{m.kind}|{m.width}|{m.value}\n".encode())
    return h.hexdigest()[:16]


class Protocol:
    """Base class: subclasses provide the two party programs and validation."""

    name = "protocol"

    def descriptor(self) -> str:
        raise NotImplementedError

    def protocol_id(self) -> int:
        return crc16(self.descriptor().encode())

    @property
    def n(self) -> int:
        raise NotImplementedError

    quantum = False

    def validate_pair(self, x: int, y: int) -> None:
        """Joint promise check; raises PromiseViolation. In-process only."""

    def validate_local(self, side: str, inp: int) -> None:
        """Single-sided check available to a remote party."""

    def prepare_joint(self, x: int, y: int) -> None:
        """Hook for simulation-only protocols needing the joint view."""

    def alice(self, io, x: int):
        raise NotImplementedError

    def bob(self, io, y: int):
        raise NotImplementedError


class PartyIO:
    """Per-party environment: the shared public-coin stream."""

    def __init__(self, rand: Stream):
        self.rand = rand


def crc16(data: bytes) -> int:
    """CRC-16/CCITT-FALSE; stable protocol identifier for the handshake."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021 if crc & 0x8000 else crc << 1) & 0xFFFF
    return crc


def _advance(gen, value):
    """Step a generator; returns ("op", op) or ("done", result)."""
    try:
        op = gen.send(value)
    except StopIteration as stop:
        return "done", stop.value
    return "op", op


def run_protocol(proto: Protocol, x: int, y: int, seed: int) -> RunResult:
    """Execute both parties in-process; deterministic in (proto, x, y, seed)."""
    proto.validate_pair(x, y)
    proto.prepare_joint(x, y)
    ledger = CostLedger()
    ga = proto.alice(PartyIO(Stream(seed)), x)
    gb = proto.bob(PartyIO(Stream(seed)), y)
    gens = {"A": ga, "B": gb}
    inbox: dict[str, list] = {"A": [], "B": []}
    state: dict[str, tuple] = {}
    done: dict[str, int | None] = {}

    for side in ("A", "B"):
        state[side] = _advance(gens[side], None)

    while len(done) < 2:
        progressed = False
        for side, peer in (("A", "B"), ("B", "A")):
            if side in done:
                continue
            kind, op = state[side]
            if kind == "done":
                done[side] = op
                progressed = True
                continue
            if isinstance(op, Send):
                msg = Message(side, op.kind, op.width, op.value if op.kind != QUANTUM_KIND else None)
                ledger.record(msg)
                inbox[peer].append((msg.value, op.width))
                state[side] = _advance(gens[side], None)
                progressed = True
            elif isinstance(op, NoteSample):
                if side == "A":  # one logical note per sample
                    ledger.note_sample(op.ideal_width)
                state[side] = _advance(gens[side], None)
                progressed = True
            elif isinstance(op, Recv):
                if inbox[side]:
                    value, width = inbox[side].pop(0)
                    if width != op.width:
                        raise InternalInvariantError(
                            f"recv width {op.width} != sent width {width}"
                        )
                    state[side] = _advance(gens[side], value)
                    progressed = True
            else:
                raise InternalInvariantError(f"bad protocol op {op!r}")
        if not progressed:
            raise InternalInvariantError("protocol deadlock: both parties blocked on recv")

    out_a, out_b = done["A"], done["B"]
    if out_a is None:
        out_a = out_b
    if out_b is not None and out_a != out_b:
        raise InternalInvariantError("parties disagree on the output")
    return RunResult(
        output=out_a,
        ledger=ledger,
        transcript=tuple(ledger.messages),
        seed=seed,
        protocol=proto.descriptor(),
    )


def replay(proto: Protocol, x: int, y: int, seed: int, transcript) -> int:
    """Re-execute and check every message against a recorded transcript.

    Pure in its arguments; raises InternalInvariantError on any divergence
    and returns the replayed output.
    """
    rr = run_protocol(proto, x, y, seed)
    if tuple(rr.transcript) != tuple(transcript):
        raise InternalInvariantError("transcript divergence during replay")
    return rr.output


def require(cond: bool, msg: str) -> None:
    if not cond:
        raise PromiseViolation(msg)
