"""TCP transport: framing, handshake, and in-process equivalence."""

import threading

import pytest

from ccx.bits import plant_pair
from ccx.errors import HandshakeError, TransportError
from ccx.pif import SetIncParams, disj_table
from ccx.protocols.classical import DetTotalProtocol, SetIncProtocol, WeightExchangeProtocol
from ccx.protocols.quantum import QSetIncProtocol
from ccx.rng import Stream
from ccx.sim.channel import run_protocol
from ccx.sim.net import pack_payload, run_remote, unpack_payload


def remote_pair(proto_a, proto_b, x, y, seed):
    box, res = [], []
    err = []

    def serve():
        try:
            res.append(run_remote("listen", "127.0.0.1", 0, proto_a, x, seed, on_listen=box.append))
        except Exception as exc:  # surfaced by the caller
            err.append(exc)

    th = threading.Thread(target=serve)
    th.start()
    while not box and th.is_alive():
        pass
    try:
        rb = run_remote("connect", "127.0.0.1", box[0], proto_b, y, seed)
    finally:
        th.join()
    if err:
        raise err[0]
    return res[0], rb


def test_payload_roundtrip_msb_first():
    assert pack_payload(0b1011, 4) == bytes([0b10110000])
    for width in (1, 5, 8, 13, 16):
        for v in (0, 1, (1 << width) - 1, (1 << width) // 3):
            assert unpack_payload(pack_payload(v, width), width) == v


def test_weightx_loopback_matches_inprocess():
    w = WeightExchangeProtocol(8)
    x, y = 0b10110000, 0b00000111
    local = run_protocol(w, x, y, 5)
    ra, rb = remote_pair(WeightExchangeProtocol(8), WeightExchangeProtocol(8), x, y, 5)
    assert ra.output == rb.output == local.output
    assert ra.ledger.bits_sent == local.ledger.bits_sent == 8
    assert tuple(ra.transcript) == tuple(local.transcript) == tuple(rb.transcript)


def test_setinc_loopback_matches_inprocess():
    p = SetIncParams(16, 6, 8, 6, 2)
    x, y = plant_pair(16, 6, 8, 4, Stream(2))
    local = run_protocol(SetIncProtocol(p), x, y, 42)
    ra, rb = remote_pair(SetIncProtocol(p), SetIncProtocol(p), x, y, 42)
    assert ra.output == rb.output == local.output
    assert ra.ledger.bits_sent == rb.ledger.bits_sent == local.ledger.bits_sent
    assert ra.ledger.bits_idealized == local.ledger.bits_idealized
    assert tuple(ra.transcript) == tuple(local.transcript)


def test_det_total_loopback():
    f = disj_table(6)
    local = run_protocol(DetTotalProtocol(f), 0b000011, 0b001100, 7)
    ra, rb = remote_pair(DetTotalProtocol(f), DetTotalProtocol(f), 0b000011, 0b001100, 7)
    assert ra.output == local.output and rb.output == local.output
    assert ra.ledger.bits_sent == local.ledger.bits_sent


def test_handshake_rejects_mismatched_protocols():
    p1 = SetIncParams(16, 6, 8, 6, 2)
    p2 = SetIncParams(16, 6, 8, 6, 4)
    x, y = plant_pair(16, 6, 8, 4, Stream(2))
    with pytest.raises(HandshakeError):
        remote_pair(SetIncProtocol(p1), SetIncProtocol(p2), x, y, 1)


def test_handshake_rejects_mismatched_seeds():
    box, err = [], []
    w = WeightExchangeProtocol(4)

    def serve():
        try:
            run_remote("listen", "127.0.0.1", 0, w, 0b0011, 1, on_listen=box.append)
        except HandshakeError as exc:
            err.append(exc)

    th = threading.Thread(target=serve)
    th.start()
    while not box:
        pass
    with pytest.raises(HandshakeError):
        run_remote("connect", "127.0.0.1", box[0], WeightExchangeProtocol(4), 0b0001, 2)
    th.join()
    assert err


def test_quantum_protocol_refused_on_tcp():
    q = QSetIncProtocol(SetIncParams(16, 8, 8, 8, 2))
    with pytest.raises(TransportError):
        run_remote("listen", "127.0.0.1", 0, q, 0b11110000, 1, on_listen=lambda p: None)


def test_bad_role_rejected():
    with pytest.raises(TransportError):
        run_remote("speak", "127.0.0.1", 1, WeightExchangeProtocol(4), 0, 0)
