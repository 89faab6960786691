"""Command-line surface.

Subcommands: eval, measure, protocol, bounds, rank, pattern-matrix, sweep,
net.  Half-integral quantities are passed doubled (c2, g2).  Exit codes:
0 success, 2 promise/parameter violation, 3 I/O or transport failure,
4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import bounds as bnd
from . import pif
from .bits import parse_bits, plant_pair
from .errors import (
    CcxError,
    HandshakeError,
    InternalInvariantError,
    ParameterError,
    PromiseViolation,
    TransportError,
)
from .pif import SetIncParams, _setinc_value, table_from_dict
from .protocols.classical import (
    DetTotalProtocol,
    PIProtocol,
    SetIncProtocol,
    WeightExchangeProtocol,
)
from .protocols.quantum import QSetIncProtocol
from .rng import TAG_CELL, Stream, derive_seed
from .sim.channel import run_protocol
from .sim.harness import estimate_success
from .sim.net import run_remote

SWEEP_SCHEMA = "ccx-sweep-v1"
SWEEP_COLUMNS = [
    "protocol",
    "n",
    "a",
    "b",
    "c2",
    "g2",
    "status",
    "case",
    "n1_2",
    "n2_2",
    "trials",
    "successes",
    "rate",
    "wilson_lo",
    "wilson_hi",
    "mean_bits",
    "mean_bits_idealized",
    "max_bits",
    "mean_qubits",
    "bound_classical",
    "bound_quantum",
    "ratio_classical",
    "ratio_quantum",
]


def default_seed() -> int:
    env = os.environ.get("CCX_SEED")
    return int(env, 0) if env else 0xCC5EED


def resolve_table(spec: str) -> pif.PIFunctionTable:
    """A function file path, or an inline builtin like 'disj:n=12'."""
    if os.path.exists(spec):
        return pif.load_table(spec)
    if ":" in spec:
        name, _, rest = spec.partition(":")
        params: dict = {}
        for item in filter(None, rest.split(",")):
            k, _, v = item.partition("=")
            params[k.strip()] = v.strip()
        doc = {"n": params.get("n", 0), "builtin": {"name": name, "params": params}}
        return table_from_dict(doc)
    raise ParameterError(f"no such function file or builtin spec: {spec!r}")


def _emit(obj, as_json: bool) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, default=str))
    else:
        for k, v in obj.items():
            print(f"{k}: {v}")


def _parse_xy(args, n: int) -> tuple[int, int]:
    x, nx = parse_bits(args.x)
    y, ny = parse_bits(args.y)
    if nx != n or ny != n:
        raise ParameterError(f"inputs must be length {n} (got {nx}, {ny})")
    return x, y


# ---------------------------------------------------------------------------
# Subcommands


def cmd_eval(args) -> int:
    table = resolve_table(args.fn)
    x, y = _parse_xy(args, table.n)
    v = table.eval(x, y, table.n, table.n)
    _emit({"value": v if v != 0 else "*"}, args.json)
    return 0


def cmd_measure(args) -> int:
    table = resolve_table(args.fn)
    res = pif.measure_m(table)
    print(json.dumps(res.as_dict(), indent=2))
    return 0


def _protocol_from_args(args):
    kind = args.kind
    if kind == "weightx":
        return WeightExchangeProtocol(args.n)
    if kind in ("setinc", "esetinc", "ghd", "eghd"):
        params = SetIncParams(args.n, args.a, args.b, args.c2, args.g2, variant=kind, bar=args.bar)
        return SetIncProtocol(params, reps=args.reps, accounting=args.mode)
    if kind == "qsetinc":
        params = SetIncParams(args.n, args.a, args.b, args.c2, args.g2, variant=args.variant, bar=args.bar)
        return QSetIncProtocol(params, t=args.t, reps=args.qreps)
    if kind == "pi":
        return PIProtocol(resolve_table(args.fn))
    if kind == "det-total":
        return DetTotalProtocol(resolve_table(args.fn))
    raise ParameterError(f"unknown protocol {kind!r}")


def cmd_protocol(args) -> int:
    proto = _protocol_from_args(args)
    x, y = _parse_xy(args, proto.n)
    rr = run_protocol(proto, x, y, args.seed)
    doc = rr.as_dict()
    if args.transcript:
        doc["transcript"] = [
            {"sender": m.sender, "kind": m.kind, "width": m.width, "value": m.value}
            for m in rr.transcript
        ]
    _emit(doc, args.json)
    return 0


def cmd_bounds(args) -> int:
    table = resolve_table(args.fn)
    rep = bnd.report_bounds(
        table,
        measured_trials=args.trials,
        master_seed=args.seed,
        include_measured=not args.no_measured,
    )
    print(json.dumps(rep, indent=2, default=str))
    return 0


def cmd_rank(args) -> int:
    table = resolve_table(args.fn)
    if args.slice:
        a, b = args.slice
        m = bnd.weight_slice_matrix(table, a, b, args.encoding)
    else:
        m = bnd.pif_matrix(table, args.encoding)
    _emit(
        {"rows": m.rows, "cols": m.cols, "p": m.p, "rank_mod_p": m.rank(), "note": "rank over F_p lower-bounds the rational rank"},
        args.json,
    )
    return 0


def cmd_pattern_matrix(args) -> int:
    if args.fkl:
        k, l2 = args.fkl
        P = bnd.pattern_matrix(2 * k, k, bnd.fkl_vector(k, l2))
        doc = {"rows": P.shape[0], "cols": P.shape[1], "defined": int((P != 0).sum())}
        if args.check:
            doc["submatrix_check"] = bnd.check_pattern_submatrix(k, l2)
        _emit(doc, args.json)
        return 0
    vec = [(-1 if s == "-1" else 1 if s == "1" else 0) for s in args.pred.split(",")]
    t = int(math.log2(len(vec)))
    if 1 << t != len(vec):
        raise ParameterError("predicate vector length must be a power of two")
    P = bnd.pattern_matrix(args.n, t, vec)
    _emit({"rows": P.shape[0], "cols": P.shape[1], "defined": int((P != 0).sum())}, args.json)
    return 0


def plant_setinc_instance(params: SetIncParams, stream: Stream):
    """Random promise instance with the planted side drawn from the stream."""
    base = pif.setinc_ghd_convert(params) if params.variant in ("ghd", "eghd") else params
    side = stream.bit()
    inter = base.lo if side == 0 else base.hi
    x, y = plant_pair(params.n, params.a, params.b, inter, stream)
    return x, y, _setinc_value(params, inter)


def _bounds_for_cell(p: SetIncParams) -> tuple[float, float, int, int]:
    q = pif.smallest_two(p.n, p.a, p.b, p.c2)
    log_n = math.log2(p.n)
    loglog_n = math.log2(max(2.0, log_n))
    nn = (q.n1_2 * q.n2_2) / 4
    g = p.g2 / 2
    return (nn / g**2) * log_n * loglog_n, (math.sqrt(nn) / g) * log_n * loglog_n, q.n1_2, q.n2_2


def run_sweep(config: dict, out_stream) -> None:
    grid = config["grid"]
    trials = int(config.get("trials", 200))
    master = int(config.get("master_seed", default_seed()))
    proto_kind = config.get("protocol", "setinc")
    keys = ["n", "a", "b", "c2", "g2"]
    lists = [grid.get(k, []) for k in keys]
    cells = [[]]
    for vals in lists:
        cells = [c + [v] for c in cells for v in vals]
    out_stream.write(f"# {SWEEP_SCHEMA} protocol={proto_kind} trials={trials} master_seed={master}\n")
    writer = csv.DictWriter(out_stream, fieldnames=SWEEP_COLUMNS)
    writer.writeheader()
    for idx, cell in enumerate(cells):
        n, a, b, c2, g2 = cell
        row = {k: v for k, v in zip(keys, cell)}
        row["protocol"] = proto_kind
        try:
            params = SetIncParams(n, a, b, c2, g2, variant=config.get("variant", "setinc"))
        except ParameterError:
            row["status"] = "skipped"
            writer.writerow(row)
            continue
        if proto_kind == "setinc":
            proto = SetIncProtocol(params, reps=config.get("reps"))
        elif proto_kind == "qsetinc":
            proto = QSetIncProtocol(params)
        else:
            raise ParameterError(f"sweep protocol must be setinc or qsetinc, not {proto_kind!r}")
        cell_seed = derive_seed(master, idx, TAG_CELL)
        est = estimate_success(
            proto, lambda s: plant_setinc_instance(params, s), trials, cell_seed
        )
        bc, bq, n1_2, n2_2 = _bounds_for_cell(params)
        row.update(
            status="ok",
            case=proto.plan.case,
            n1_2=n1_2,
            n2_2=n2_2,
            trials=est.trials,
            successes=est.successes,
            rate=f"{est.rate:.6f}",
            wilson_lo=f"{est.wilson_lo:.6f}",
            wilson_hi=f"{est.wilson_hi:.6f}",
            mean_bits=f"{est.mean_bits:.3f}",
            mean_bits_idealized=f"{est.mean_bits_idealized:.3f}",
            max_bits=est.max_bits,
            mean_qubits=f"{est.mean_qubits:.3f}",
            bound_classical=f"{bc:.3f}",
            bound_quantum=f"{bq:.3f}",
            ratio_classical=f"{est.mean_bits_idealized / bc:.4f}",
            ratio_quantum=f"{est.mean_qubits / bq:.4f}" if est.mean_qubits else "",
        )
        writer.writerow(row)


def cmd_sweep(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    out_path = args.out or config.get("out")
    buf = io.StringIO()
    run_sweep(config, buf)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_net(args) -> int:
    proto = _protocol_from_args(args)
    value, nlen = parse_bits(args.input)
    if nlen != proto.n:
        raise ParameterError(f"input must be length {proto.n}")
    role = "listen" if args.netcmd == "serve" else "connect"
    rr = run_remote(role, args.host, args.port, proto, value, args.seed)
    _emit(rr.as_dict(), args.json)
    return 0


# ---------------------------------------------------------------------------


def _add_protocol_args(sp, net: bool = False) -> None:
    sp.add_argument("kind", choices=["weightx", "setinc", "esetinc", "ghd", "eghd", "qsetinc", "pi", "det-total"])
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--a", type=int, default=0)
    sp.add_argument("--b", type=int, default=0)
    sp.add_argument("--c2", type=int, default=0)
    sp.add_argument("--g2", type=int, default=0)
    sp.add_argument("--bar", action="store_true")
    sp.add_argument("--variant", default="setinc")
    sp.add_argument("--mode", choices=["measured", "idealized"], default="measured")
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--t", type=int, default=None)
    sp.add_argument("--qreps", type=int, default=5)
    sp.add_argument("--fn", default="")
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=default_seed())
    sp.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ccx", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("eval", help="evaluate a PI function at (x, y)")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn_cmd=cmd_eval)

    sp = sub.add_parser("measure", help="the measure m(f) with its witness")
    sp.add_argument("--fn", required=True)
    sp.set_defaults(fn_cmd=cmd_measure)

    sp = sub.add_parser("protocol", help="run a protocol on one input pair")
    _add_protocol_args(sp)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--transcript", action="store_true")
    sp.set_defaults(fn_cmd=cmd_protocol)

    sp = sub.add_parser("bounds", help="assembled bound report for a function")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=default_seed())
    sp.add_argument("--no-measured", action="store_true")
    sp.set_defaults(fn_cmd=cmd_bounds)

    sp = sub.add_parser("rank", help="rank of the input matrix over F_p")
    sp.add_argument("--fn", required=True)
    sp.add_argument("--encoding", choices=["pm1", "zero_one"], default="pm1")
    sp.add_argument("--slice", type=int, nargs=2, metavar=("A", "B"))
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn_cmd=cmd_rank)

    sp = sub.add_parser("pattern-matrix", help="build a pattern matrix")
    sp.add_argument("--fkl", type=int, nargs=2, metavar=("K", "L2"))
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--pred", default="")
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn_cmd=cmd_pattern_matrix)

    sp = sub.add_parser("sweep", help="parameter sweep to CSV")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default="")
    sp.set_defaults(fn_cmd=cmd_sweep)

    sp = sub.add_parser("net", help="run one party over TCP")
    sp.add_argument("netcmd", choices=["serve", "run"])
    _add_protocol_args(sp, net=True)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, required=True)
    sp.add_argument("--input", required=True)
    sp.set_defaults(fn_cmd=cmd_net)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn_cmd(args)
    except (ParameterError, PromiseViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TransportError, HandshakeError, OSError) as exc:
        print(f"transport/io error: {exc}", file=sys.stderr)
        return 3
    except InternalInvariantError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 4
    except CcxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
