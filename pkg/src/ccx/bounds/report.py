"""Assembled bound reports: the measure, certificates, degree and rank
witnesses, and measured protocol costs side by side.

All asymptotic quantities are reported as bare values (no hidden
constants); comparisons against measured costs are left to the caller,
which should use declared ratio thresholds rather than equalities.
"""

from __future__ import annotations

import math

from ..errors import NoBound, ParameterError
from ..pif import PIFunctionTable, SetIncParams, measure_m
from ..rng import TAG_INSTANCE, Stream, derive_seed
from .fieldmatrix import FULL_MATRIX_CAP, pif_matrix
from .logrank import logrank_embedding_bound
from .paturi import fkl_predicate, paturi_gamma
from .reduction import esetinc_lower_certificate


def _asymptotic_terms(n: int) -> tuple[float, float]:
    log_n = math.log2(max(2, n))
    return log_n, math.log2(max(2.0, log_n))


def report_bounds(
    f: PIFunctionTable,
    measured_trials: int = 25,
    master_seed: int = 0xC0FFEE,
    include_rank: bool = True,
    include_measured: bool = True,
) -> dict:
    """Structured report of every bound this package can compute for f."""
    n = f.n
    res = measure_m(f)
    log_n, loglog_n = _asymptotic_terms(n)
    report: dict = {
        "n": n,
        "name": f.name,
        "measure": res.as_dict(),
        "bound_models": {
            "quantum_lower_Omega": res.value,
            "quantum_upper_model": res.value * log_n * log_n * loglog_n + log_n,
            "randomized_upper_model": res.value**2 * log_n * log_n * loglog_n + log_n,
            "log_arank_lower_Omega": res.value,
        },
    }

    if res.witness is not None:
        a, b, c2, g2 = res.witness
        params = SetIncParams(n, a, b, c2, g2, variant="esetinc")
        cert = esetinc_lower_certificate(params)
        report["certificate_chain"] = cert.as_dict()
        term = cert.terminal
        if term.a == 2 * term.b:  # terminal in the 4K/2K/K shape
            k_t, l2_t = term.b, term.c2
            gamma, adeg = paturi_gamma(fkl_predicate(k_t, l2_t))
            report["paturi"] = {
                "k": k_t,
                "l2": l2_t,
                "gamma": gamma,
                "adeg_value": adeg,
            }
            report["pattern_matrix_bound"] = 0.25 * adeg * math.log2(2 * k_t / k_t)
    else:
        report["certificate_chain"] = None

    if include_rank and f.is_total() and n <= FULL_MATRIX_CAP:
        rank_info: dict = {"rank_mod_p": pif_matrix(f, "pm1").rank()}
        try:
            lb = logrank_embedding_bound(f)
            rank_info["embedding_bound"] = lb.as_dict()["rank_lower_bound"]
            rank_info["embedding_witness"] = lb.best.describe()
        except NoBound:
            rank_info["embedding_bound"] = None
        report["rank_bounds"] = rank_info

    if include_measured:
        report["measured_costs"] = _measured_costs(f, res, measured_trials, master_seed)
    return report


def _measured_costs(f: PIFunctionTable, res, trials: int, master_seed: int) -> dict:
    from ..protocols.classical import DetTotalProtocol, PIProtocol
    from ..protocols.quantum import QSetIncProtocol
    from ..sim.channel import run_protocol

    out: dict = {}
    defined = sorted(f.entries)
    if not defined:
        return out

    from ..bits import plant_pair

    def sample_defined(stream: Stream):
        a, b, c = defined[stream.below(len(defined))]
        x, y = plant_pair(f.n, a, b, c, stream)
        return x, y

    pi = PIProtocol(f)
    bits = []
    ideal = []
    for i in range(trials):
        stream = Stream(derive_seed(master_seed, i, TAG_INSTANCE))
        x, y = sample_defined(stream)
        rr = run_protocol(pi, x, y, derive_seed(master_seed, i))
        bits.append(rr.ledger.bits_sent)
        ideal.append(rr.ledger.bits_idealized)
    out["pi_protocol"] = {
        "trials": trials,
        "mean_bits": sum(bits) / trials,
        "mean_bits_idealized": sum(ideal) / trials,
    }

    if res.witness is not None:
        a, b, c2, g2 = res.witness
        try:
            q = QSetIncProtocol(SetIncParams(f.n, a, b, c2, g2, variant="esetinc"))
            out["quantum_setinc_at_witness"] = {
                "qubits_per_run": q.qubits_per_run(),
                "t": q.cfg.t,
                "reps": q.cfg.reps,
            }
        except ParameterError:
            pass

    if f.is_total():
        det = DetTotalProtocol(f)
        out["deterministic"] = {"worst_case_bits": det.worst_case_bits()}
    return out
