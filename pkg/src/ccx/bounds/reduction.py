"""Lower-bound reduction certificates for ESetInc instances.

A certificate witnesses the chain

    ESetInc^n_{a,b,c,g}
      -> (complements)  instance with the c-role holding n1
      -> (normalize)    ESetInc^{n1+3n2}_{n1+n2, n1+n2, n1, g}
      -> (halve)        ESetInc^{m1+3m2}_{m1+m2, m1+m2, m1, 1/2}
      -> (case split)   terminal ESetInc^{4K}_{2K, K, l, 1/2}

where n1 <= n2 are the two smallest of {[a-c, c, b-c, n-a-b+c]} and
m_i is the largest half-integer at most n_i/(2g).  Every step is an exact
input embedding: given inputs of the *smaller* (dst) instance, apply_inputs
produces inputs of the larger (src) instance whose value matches up to the
complement-step sign flip.  All side conditions are verified in doubled
integers before a step is emitted; a failure raises InternalInvariantError
because valid parameters can never trigger one.

Reported quantities carry no hidden constants: reported_bound is
sqrt(n1*n2)/g and terminal_value is sqrt(K*l) (with squared values exact).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..bits import complement
from ..errors import InternalInvariantError, ParameterError
from ..pif import SetIncParams, smallest_two


@dataclass(frozen=True)
class SideCondition:
    name: str
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class ReductionStep:
    kind: str
    src: SetIncParams
    dst: SetIncParams
    detail: dict
    side_conditions: tuple
    value_flip: bool

    def apply_inputs(self, x: int, y: int) -> tuple[int, int]:
        """Embed dst-instance inputs into the src instance."""
        k = self.kind
        if k == "complement_bob":
            return x, complement(y, self.src.n)
        if k == "complement_alice":
            return complement(x, self.src.n), y
        if k in ("pad", "normalize_n1n2", "case2", "case3"):
            d = self.detail
            return _pad_inputs(x, y, self.dst.n, d["l1"], d["l2"], d["l3"], d["l"])
        if k == "halve_to_half_integer":
            d = self.detail
            xr, yr = _repeat_inputs(x, y, self.dst.n, d["k"])
            return _pad_inputs(xr, yr, self.dst.n * d["k"], d["l1"], d["l2"], d["l3"], d["l"])
        if k == "repeat":
            return _repeat_inputs(x, y, self.dst.n, self.detail["k"])
        raise ParameterError(f"unknown step kind {k!r}")

    def ok(self) -> bool:
        return all(sc.holds for sc in self.side_conditions)


def _pad_inputs(x: int, y: int, n: int, l1: int, l2: int, l3: int, l: int) -> tuple[int, int]:
    # Alice appends 1^l1 0^l2 1^l3 0^(l-l1-l2-l3); Bob appends 0^l1 1^l2 1^l3 0^...
    ones = lambda k: (1 << k) - 1
    xa = x | (ones(l1) << n) | (ones(l3) << (n + l1 + l2))
    yb = y | (ones(l2) << (n + l1)) | (ones(l3) << (n + l1 + l2))
    return xa, yb


def _repeat_inputs(x: int, y: int, n: int, k: int) -> tuple[int, int]:
    xr = yr = 0
    for i in range(k):
        xr |= x << (i * n)
        yr |= y << (i * n)
    return xr, yr


def _esetinc(n, a, b, c2, g2) -> SetIncParams:
    return SetIncParams(n, a, b, c2, g2, variant="esetinc")


def _cond(name, holds, detail="") -> SideCondition:
    return SideCondition(name, bool(holds), detail)


def _pad_step(kind: str, src: SetIncParams, dst: SetIncParams, l1, l2, l3, l, extra=()):
    conds = [
        _cond("l1 >= 0", l1 >= 0, f"l1={l1}"),
        _cond("l2 >= 0", l2 >= 0, f"l2={l2}"),
        _cond("l3 >= 0", l3 >= 0, f"l3={l3}"),
        _cond("l1+l2+l3 <= l", l1 + l2 + l3 <= l, f"sum={l1 + l2 + l3}, l={l}"),
        _cond("n matches", src.n == dst.n + l),
        _cond("a matches", src.a == dst.a + l1 + l3),
        _cond("b matches", src.b == dst.b + l2 + l3),
        _cond("c matches", src.c2 == dst.c2 + 2 * l3),
        _cond("g matches", src.g2 == dst.g2),
    ]
    conds.extend(extra)
    return ReductionStep(
        kind,
        src,
        dst,
        {"l1": l1, "l2": l2, "l3": l3, "l": l},
        tuple(conds),
        value_flip=False,
    )


def reduction_transform(kind: str, p: SetIncParams, inputs=None, **detail):
    """One transform applied in the growing direction (small -> large).

    Returns (params_out, step); when `inputs` is given the returned step's
    apply_inputs maps them, and step.value_flip says whether the embedded
    value is negated (complement transforms flip the ESetInc orientation).
    """
    if kind == "pad":
        l1, l2, l3, l = detail["l1"], detail["l2"], detail["l3"], detail["l"]
        out = _esetinc(p.n + l, p.a + l1 + l3, p.b + l2 + l3, p.c2 + 2 * l3, p.g2)
        step = _pad_step("pad", out, p, l1, l2, l3, l)
    elif kind == "complement_bob":
        out = _esetinc(p.n, p.a, p.n - p.b, 2 * p.a - p.c2, p.g2)
        step = ReductionStep("complement_bob", out, p, {}, (), value_flip=True)
    elif kind == "complement_alice":
        out = _esetinc(p.n, p.n - p.a, p.b, 2 * p.b - p.c2, p.g2)
        step = ReductionStep("complement_alice", out, p, {}, (), value_flip=True)
    elif kind == "repeat":
        k = detail["k"]
        if k < 1:
            raise ParameterError("repeat factor must be >= 1")
        out = _esetinc(k * p.n, k * p.a, k * p.b, k * p.c2, k * p.g2)
        step = ReductionStep("repeat", out, p, {"k": k}, (), value_flip=False)
    else:
        raise ParameterError(f"unknown transform {kind!r}")
    if not step.ok():
        raise ParameterError(f"transform side conditions failed: {step.side_conditions}")
    if inputs is None:
        return out, step
    return out, step, step.apply_inputs(*inputs)


@dataclass(frozen=True)
class Certificate:
    params: SetIncParams
    steps: tuple
    case: int
    terminal: SetIncParams
    terminal_sq: Fraction  # K*l of the terminal instance, exact
    bound_sq: Fraction  # n1*n2/g^2 of the input instance, exact

    @property
    def terminal_value(self) -> float:
        return math.sqrt(self.terminal_sq)

    @property
    def reported_bound(self) -> float:
        return math.sqrt(self.bound_sq)

    def ok(self) -> bool:
        return all(step.ok() for step in self.steps)

    def as_dict(self) -> dict:
        return {
            "instance": self.params.label(),
            "case": self.case,
            "steps": [
                {
                    "kind": s.kind,
                    "from": s.src.label(),
                    "to": s.dst.label(),
                    "detail": s.detail,
                    "flips_value": s.value_flip,
                    "side_conditions": [
                        {"name": c.name, "holds": c.holds, "detail": c.detail}
                        for c in s.side_conditions
                    ],
                }
                for s in self.steps
            ],
            "terminal": self.terminal.label(),
            "terminal_value": self.terminal_value,
            "reported_bound": self.reported_bound,
        }


def _largest_odd_leq(num: int, den: int) -> int:
    """Largest odd integer q with q <= num/den."""
    q = num // den
    return q if q % 2 == 1 else q - 1


def esetinc_lower_certificate(p: SetIncParams) -> Certificate:
    """Build the full reduction chain for an ESetInc instance."""
    if p.variant not in ("setinc", "esetinc"):
        raise ParameterError("certificates are built for SetInc-form parameters")
    q = smallest_two(p.n, p.a, p.b, p.c2)
    n1_2, n2_2 = q.n1_2, q.n2_2
    if n1_2 < p.g2:
        raise InternalInvariantError("achievable instance must have n1 >= g")
    bound_sq = Fraction(n1_2 * n2_2, p.g2 * p.g2)

    steps = []
    cur = _esetinc(p.n, p.a, p.b, p.c2, p.g2)

    # 1. complements until the c-role holds n1 (prefer fewer flips)
    role_order = [
        ("none", cur.c2),
        ("complement_bob", 2 * cur.a - cur.c2),
        ("complement_alice", 2 * cur.b - cur.c2),
        ("both", 2 * (cur.n - cur.a - cur.b) + cur.c2),
    ]
    choice = next(name for name, val in role_order if val == n1_2)
    if choice in ("complement_bob", "both"):
        nxt = _esetinc(cur.n, cur.a, cur.n - cur.b, 2 * cur.a - cur.c2, cur.g2)
        steps.append(ReductionStep("complement_bob", cur, nxt, {}, (), value_flip=True))
        cur = nxt
    if choice in ("complement_alice", "both"):
        nxt = _esetinc(cur.n, cur.n - cur.a, cur.b, 2 * cur.b - cur.c2, cur.g2)
        steps.append(ReductionStep("complement_alice", cur, nxt, {}, (), value_flip=True))
        cur = nxt
    if cur.c2 != n1_2:
        raise InternalInvariantError("complement normalization failed to place n1 at c")

    # 2. normalize to ESetInc^{n1+3n2}_{n1+n2, n1+n2, n1, g}
    if (n1_2 + 3 * n2_2) % 2 or (n1_2 + n2_2) % 2:
        raise InternalInvariantError("n1+3n2 must be integral")
    norm = _esetinc(
        (n1_2 + 3 * n2_2) // 2, (n1_2 + n2_2) // 2, (n1_2 + n2_2) // 2, n1_2, p.g2
    )
    l1 = cur.a - norm.a
    l2 = cur.b - norm.b
    l = cur.n - norm.n
    steps.append(_pad_step("normalize_n1n2", cur, norm, l1, l2, 0, l))
    cur = norm

    # 3. halve: repeat by 2g then embed, reaching g = 1/2
    g2 = p.g2
    m1_2 = _largest_odd_leq(n1_2, g2)
    m2_2 = _largest_odd_leq(n2_2, g2)
    if m1_2 < 1 or m2_2 < 1:
        raise InternalInvariantError("m1, m2 must be at least 1/2")
    half = _esetinc((m1_2 + 3 * m2_2) // 2, (m1_2 + m2_2) // 2, (m1_2 + m2_2) // 2, m1_2, 1)
    rep_k = g2
    e1_2 = n1_2 - g2 * m1_2  # doubled slack at the c coordinate
    e2_2 = n2_2 - g2 * m2_2
    if e1_2 % 2 or e2_2 % 2:
        raise InternalInvariantError("halving slacks must be integral")
    hl3 = e1_2 // 2
    hl1 = hl2 = e2_2 // 2
    hl = cur.n - rep_k * half.n
    conds = (
        _cond("m1 <= n1/(2g)", g2 * m1_2 <= n1_2, f"m1_2={m1_2}"),
        _cond("m2 <= n2/(2g)", g2 * m2_2 <= n2_2, f"m2_2={m2_2}"),
        _cond("m1 <= m2", m1_2 <= m2_2),
        _cond("pad fits", hl1 + hl2 + hl3 <= hl, f"sum={hl1 + hl2 + hl3}, l={hl}"),
        _cond(
            "repeat+pad reaches source",
            cur.a == rep_k * half.a + hl1 + hl3 and cur.c2 == rep_k * half.c2 + 2 * hl3,
        ),
    )
    steps.append(
        ReductionStep(
            "halve_to_half_integer",
            cur,
            half,
            {"k": rep_k, "l1": hl1, "l2": hl2, "l3": hl3, "l": hl},
            conds,
            value_flip=False,
        )
    )
    cur = half

    # 4. case split on (m1, m2)
    if m1_2 == 1 and m2_2 == 1:
        case = 1
        terminal = cur  # ESetInc^2_{1,1,1/2,1/2}
    elif m1_2 == 1:
        case = 2
        m2p = (m1_2 + m2_2) // 4  # floor((m1+m2)/2), an integer
        cl1 = (m1_2 + m2_2) // 2 - 2 * m2p
        cl2 = (m1_2 + m2_2) // 2 - m2p
        cl = (m1_2 + 3 * m2_2) // 2 - 4 * m2p
        terminal = _esetinc(4 * m2p, 2 * m2p, m2p, 1, 1)
        extra = (
            _cond(
                "l - (l1+l2) = m2 - m1 - m2' >= 0",
                cl - (cl1 + cl2) == (m2_2 - m1_2) // 2 - m2p and cl - (cl1 + cl2) >= 0,
                f"lhs={cl - (cl1 + cl2)}",
            ),
            _cond("terminal l in (0, k/2]", 0 < 1 <= m2p),
        )
        steps.append(_pad_step("case2", cur, terminal, cl1, cl2, 0, cl, extra))
        cur = terminal
    else:
        case = 3
        m = (m1_2 + 3 * m2_2) // 12  # floor(m1/6 + m2/2)
        k2 = 2 * ((m1_2 + 3) // 6) - 1  # doubled largest half-integer < m1/3 + 1/2
        l3 = (m1_2 - k2) // 2
        msum = (m1_2 + m2_2) // 2
        cl1 = (msum - 2 * m) - l3
        cl2 = (msum - m) - l3
        cl = (m1_2 + 3 * m2_2) // 2 - 4 * m
        terminal = _esetinc(4 * m, 2 * m, m, k2, 1)
        extra = (
            _cond("eq:m1m k <= m/2", k2 <= m, f"k2={k2}, m={m}"),
            _cond(
                "eq:ll_com identity l-(l1+l2+l3) = m2-k-m",
                2 * (cl - (cl1 + cl2 + l3)) == (m2_2 - k2) - 2 * m,
                f"l-(l1+l2+l3)={cl - (cl1 + cl2 + l3)}",
            ),
            _cond("eq:ll_com nonneg", cl - (cl1 + cl2 + l3) >= 0),
            _cond("terminal l half-integer in (0, k/2]", k2 % 2 == 1 and 0 < k2 <= m),
        )
        steps.append(_pad_step("case3", cur, terminal, cl1, cl2, l3, cl, extra))
        cur = terminal

    terminal_sq = Fraction(terminal.b * terminal.c2, 2)
    cert = Certificate(
        params=p,
        steps=tuple(steps),
        case=case,
        terminal=terminal,
        terminal_sq=terminal_sq,
        bound_sq=bound_sq,
    )
    if not cert.ok():
        bad = [
            (s.kind, c.name, c.detail)
            for s in cert.steps
            for c in s.side_conditions
            if not c.holds
        ]
        raise InternalInvariantError(f"certificate side conditions failed: {bad}")
    return cert
