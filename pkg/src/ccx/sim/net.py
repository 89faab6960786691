"""TCP transport: the same party generators over a framed socket.

Wire format:
  handshake  = magic "CCX1" | protocol id (u16 BE) | seed (u64 BE) | n (u32 BE)
  data frame = payload length (u32 BE) | kind (1 byte) | bit count (u16 BE)
             | payload bits packed MSB-first, zero-padded to a byte boundary

Kind codes: 0x01 classical bits, 0x02 sampler machinery, 0x03 answer bit.
The ledger counts the bit-count field only; framing bytes are free.  Quantum
register messages are refused (TransportError) before anything is written.
"""

from __future__ import annotations

import socket
import struct

from ..errors import HandshakeError, TransportError
from ..rng import Stream
from .channel import Message, NoteSample, PartyIO, Recv, RunResult, Send

MAGIC = b"CCX1"

_KIND_CODE = {"bits": 0x01, "sample": 0x02, "answer": 0x03}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}


def pack_payload(value: int, width: int) -> bytes:
    nbytes = (width + 7) // 8
    out = bytearray(nbytes)
    for i in range(width):
        bit = (value >> (width - 1 - i)) & 1  # MSB first on the wire
        if bit:
            out[i // 8] |= 0x80 >> (i % 8)
    return bytes(out)


def unpack_payload(data: bytes, width: int) -> int:
    value = 0
    for i in range(width):
        bit = (data[i // 8] >> (7 - (i % 8))) & 1
        value = (value << 1) | bit
    return value


def _send_frame(sock: socket.socket, kind: str, value: int, width: int) -> None:
    payload = pack_payload(value, width)
    body = struct.pack(">BH", _KIND_CODE[kind], width) + payload
    sock.sendall(struct.pack(">I", len(body)) + body)


def _recv_exact(sock: socket.socket, count: int) -> bytes:
    buf = b""
    while len(buf) < count:
        chunk = sock.recv(count - len(buf))
        if not chunk:
            raise TransportError("connection closed mid-frame")
        buf += chunk
    return buf


def _recv_frame(sock: socket.socket):
    (length,) = struct.unpack(">I", _recv_exact(sock, 4))
    body = _recv_exact(sock, length)
    code, width = struct.unpack(">BH", body[:3])
    if code not in _CODE_KIND:
        raise TransportError(f"unknown frame kind 0x{code:02x}")
    value = unpack_payload(body[3:], width)
    return _CODE_KIND[code], value, width


def _handshake(sock: socket.socket, proto, seed: int) -> None:
    mine = struct.pack(">4sHQI", MAGIC, proto.protocol_id(), seed, proto.n)
    sock.sendall(mine)
    theirs = _recv_exact(sock, len(mine))
    magic, pid, pseed, pn = struct.unpack(">4sHQI", theirs)
    if magic != MAGIC:
        raise HandshakeError("bad magic")
    if pid != proto.protocol_id():
        raise HandshakeError(f"protocol id mismatch: {pid} != {proto.protocol_id()}")
    if pseed != seed:
        raise HandshakeError("seed mismatch")
    if pn != proto.n:
        raise HandshakeError(f"input length mismatch: {pn} != {proto.n}")


def _drive_remote(sock: socket.socket, proto, side: str, inp: int, seed: int) -> RunResult:
    from .channel import CostLedger

    if proto.quantum:
        raise TransportError("quantum protocols cannot run over the TCP transport")
    proto.validate_local(side, inp)
    ledger = CostLedger()
    peer = "B" if side == "A" else "A"
    gen = proto.alice(PartyIO(Stream(seed)), inp) if side == "A" else proto.bob(
        PartyIO(Stream(seed)), inp
    )
    value = None
    try:
        while True:
            op = gen.send(value)
            value = None
            if isinstance(op, Send):
                if op.kind == "qubits":
                    raise TransportError("quantum registers cannot traverse the TCP transport")
                ledger.record(Message(side, op.kind, op.width, op.value))
                _send_frame(sock, op.kind, op.value, op.width)
            elif isinstance(op, Recv):
                kind, got, width = _recv_frame(sock)
                if width != op.width:
                    raise TransportError(f"peer sent width {width}, expected {op.width}")
                ledger.record(Message(peer, kind, width, got))
                value = got
            elif isinstance(op, NoteSample):
                ledger.note_sample(op.ideal_width)
    except StopIteration as stop:
        output = stop.value
    return RunResult(
        output=output,
        ledger=ledger,
        transcript=tuple(ledger.messages),
        seed=seed,
        protocol=proto.descriptor(),
    )


def run_remote(
    role: str,
    host: str,
    port: int,
    proto,
    local_input: int,
    seed: int,
    timeout: float = 30.0,
    on_listen=None,
) -> RunResult:
    """Run one party over TCP; `listen` plays Alice, `connect` plays Bob.

    With port 0 the listener binds an ephemeral port and reports it through
    on_listen(port) before accepting.
    """
    if role not in ("listen", "connect"):
        raise TransportError(f"role must be listen or connect, not {role!r}")
    if proto.quantum:
        raise TransportError("quantum protocols cannot run over the TCP transport")
    try:
        if role == "listen":
            with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as srv:
                srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
                srv.bind((host, port))
                srv.listen(1)
                srv.settimeout(timeout)
                if on_listen is not None:
                    on_listen(srv.getsockname()[1])
                conn, _ = srv.accept()
                with conn:
                    conn.settimeout(timeout)
                    _handshake(conn, proto, seed)
                    return _drive_remote(conn, proto, "A", local_input, seed)
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
            sock.settimeout(timeout)
            sock.connect((host, port))
            _handshake(sock, proto, seed)
            return _drive_remote(sock, proto, "B", local_input, seed)
    except (OSError, socket.timeout) as exc:
        raise TransportError(f"transport failure: {exc}") from exc
