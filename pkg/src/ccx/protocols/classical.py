"""Classical two-party protocols.

Implements, as executable party pairs with exact bit accounting:

  * prefix-weight binary search for a differing index (deterministic);
  * the public-coin uniform sampler over the differing set, made exactly
    uniform by composing a shared random permutation with a shared random
    complement mask and retrying when the masked weights balance;
  * the sampling fraction tester (threshold at betan, ceil(Cs*beta/eps^2)
    samples, majority amplification);
  * the four-case SetInc decision protocol: depending on which two elements
    of {[a-c, c, b-c, n-a-b+c]} are smallest, the tested fraction is
    |x&y|/a, |x&y|/b, or |x&y|/|~x xor y| (with a one-zero pad when a+b=n,
    and Bob-side complementation that folds the fourth case into the third);
  * the jump binary-search protocol for general PI functions;
  * the exact deterministic protocol for total PI functions (weights, then
    the lighter-class input as a combinadic rank).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..bits import complement, popcount, support
from ..errors import ParameterError, PromiseViolation
from ..pif import PIFunctionTable, SetIncParams, derive_slice, intervals, jumps
from ..rng import TAG_SAMPLE, Stream, derive_seed
from ..sim.channel import NoteSample, Protocol, Recv, Send

# Calibrated tester defaults.  The sample-budget constant and the odd
# majority count below were fixed by the binomial calibration sweep in
# tools/calibrate.py so that every acceptance cell meets its success floor
# while the idealized cost stays inside the sweep-wide fit constant.
DEFAULT_SAMPLE_BUDGET = Fraction(3)


def width_for(values: int) -> int:
    """Bits needed to carry 0..values-1."""
    return max(0, (values - 1).bit_length())


def weight_width(n: int) -> int:
    return width_for(n + 1)  # weights 0..n


def auto_reps(n: int) -> int:
    """Default amplification count: odd, about 3*ln(6*log2(n))."""
    r = max(1, math.ceil(3 * math.log(6 * max(2.0, math.log2(max(2, n))))))
    return r if r % 2 else r + 1


# ---------------------------------------------------------------------------
# Combinadic ranking of fixed-weight strings (colexicographic)


def table_digest(table: PIFunctionTable) -> str:
    import hashlib

    h = hashlib.sha256()
    h.update(str(table.n).encode())
    for key, v in sorted(table.entries.items()):
        h.update(f"{key}:{v};".encode())
    return h.hexdigest()[:12]


def combinadic_rank(x: int, n: int) -> int:
    sup = support(x, n)
    return sum(math.comb(s, j + 1) for j, s in enumerate(sup))


def combinadic_unrank(r: int, n: int, a: int) -> int:
    if not 0 <= r < math.comb(n, a):
        raise ParameterError(f"rank {r} out of range for C({n},{a})")
    x = 0
    for j in range(a, 0, -1):
        s = j - 1
        while math.comb(s + 1, j) <= r:
            s += 1
        x |= 1 << s
        r -= math.comb(s, j)
    return x


# ---------------------------------------------------------------------------
# First-difference search (deterministic, prefix-weight segment recursion)


def find_first_difference_pure(x: int, y: int, n: int) -> tuple[int, int]:
    """Reference result of the two-party search: (index, bits exchanged)."""
    if popcount(x) == popcount(y):
        raise PromiseViolation("first-difference search requires |x| != |y|")
    lo, hi = 0, n
    bits = 0
    while hi - lo > 1:
        left = (hi - lo) // 2
        mid = lo + left
        wl_x = popcount(x & _segmask(lo, mid))
        wl_y = popcount(y & _segmask(lo, mid))
        bits += width_for(left + 1) + 1
        if wl_x != wl_y:
            hi = mid
        else:
            lo = mid
    return lo, bits


def _segmask(lo: int, hi: int) -> int:
    return ((1 << (hi - lo)) - 1) << lo


def _ffd_alice(x: int, n: int):
    lo, hi = 0, n
    while hi - lo > 1:
        left = (hi - lo) // 2
        mid = lo + left
        wl = popcount(x & _segmask(lo, mid))
        yield Send(wl, width_for(left + 1), "sample")
        differ = yield Recv(1)
        lo, hi = (lo, mid) if differ else (mid, hi)
    return lo


def _ffd_bob(y: int, n: int):
    lo, hi = 0, n
    while hi - lo > 1:
        left = (hi - lo) // 2
        mid = lo + left
        wl_a = yield Recv(width_for(left + 1))
        differ = 1 if wl_a != popcount(y & _segmask(lo, mid)) else 0
        yield Send(differ, 1, "sample")
        lo, hi = (lo, mid) if differ else (mid, hi)
    return lo


# ---------------------------------------------------------------------------
# Uniform difference sampling (permutation + complement mask + retry)


def _sampler_gen(side: str, v: int, n: int, sub: Stream):
    """One uniform sample, party `side` holding bit-vector v; returns index."""
    wfull = weight_width(n)
    while True:
        perm = sub.permutation(n)
        words = sub.mask_words(n)
        bits = [((v >> perm[i]) & 1) ^ ((words[i >> 6] >> (i & 63)) & 1) for i in range(n)]
        packed = sum(b << i for i, b in enumerate(bits))
        if side == "A":
            yield Send(popcount(packed), wfull, "sample")
            equal = yield Recv(1)
        else:
            wa = yield Recv(wfull)
            equal = 1 if wa == popcount(packed) else 0
            yield Send(equal, 1, "sample")
        if equal:
            continue
        if side == "A":
            slot = yield from _ffd_alice(packed, n)
        else:
            slot = yield from _ffd_bob(packed, n)
        yield NoteSample(2 * width_for(n))
        return perm[slot]


def uniform_sample_pure(x: int, y: int, n: int, sample_seed: int) -> tuple[int, int]:
    """Reference (index, measured bits) of one uniform difference sample."""
    import numpy as np

    from .. import backend

    xb = np.array([(x >> i) & 1 for i in range(n)], dtype=np.uint8)
    yb = np.array([(y >> i) & 1 for i in range(n)], dtype=np.uint8)
    i, b, _ = backend.py_impl.sample_one_difference(xb, yb, sample_seed)
    return i, b


# ---------------------------------------------------------------------------
# Fraction tester


@dataclass(frozen=True)
class TesterConfig:
    """Threshold tester configuration.

    beta/eps are exact rationals; the effective eps is clamped into
    (0, min(beta, 1-beta)] so the sample count stays defined even for jump
    instances where the stated eps formula exceeds beta (c = g jumps).
    """

    __test__ = False  # pytest: not a test class

    beta: Fraction
    eps: Fraction
    sample_budget: Fraction = DEFAULT_SAMPLE_BUDGET
    reps: int = 1

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ParameterError("beta must lie in (0,1)")
        if self.eps <= 0:
            raise ParameterError("eps must be positive")
        if self.sample_budget <= 0:
            raise ParameterError("sample budget constant must be positive")
        if self.reps < 1:
            raise ParameterError("reps must be >= 1")

    @property
    def eps_eff(self) -> Fraction:
        return min(self.eps, self.beta, 1 - self.beta)

    @property
    def m_samples(self) -> int:
        m = self.sample_budget * self.beta / (self.eps_eff * self.eps_eff)
        return max(1, math.ceil(m))


def fraction_tester(sample_source, cfg: TesterConfig, rng: Stream | None = None) -> str:
    """Single tester run: LOW iff the empirical fraction is below beta."""
    m = cfg.m_samples
    hits = sum(1 for _ in range(m) if sample_source(rng))
    return "HIGH" if hits * cfg.beta.denominator >= cfg.beta.numerator * m else "LOW"


def amplified_fraction_tester(sample_source, cfg: TesterConfig, rng: Stream | None = None) -> str:
    highs = sum(1 for _ in range(cfg.reps) if fraction_tester(sample_source, cfg, rng) == "HIGH")
    return "HIGH" if highs > cfg.reps // 2 else "LOW"


# ---------------------------------------------------------------------------
# SetInc plan resolution (the four-case analysis, exact arithmetic)


@dataclass(frozen=True)
class SetIncPlan:
    case: int  # 1: sample x's support, 2: y's support, 3: agreement dance
    n: int  # original instance length
    n_run: int  # resolved instance length (after the a+b=n pad)
    comp_bob: bool  # Bob's input complemented before running (flips the label)
    pad: int
    ra: int
    rb: int
    rc2: int
    rg2: int
    beta: Fraction
    eps_raw: Fraction
    eps_eff: Fraction
    p_lo: Fraction
    p_hi: Fraction
    increasing: bool
    m_samples: int
    reps: int

    @property
    def flip(self) -> bool:
        return self.comp_bob

    def high_to_setinc(self, high: bool) -> int:
        """Map the tester verdict to the SetInc label of the ORIGINAL instance."""
        resolved = 1 if high == self.increasing else -1
        return -resolved if self.flip else resolved


def _branch(n: int, a: int, b: int, c2: int) -> str:
    vals = (2 * a - c2, c2, 2 * b - c2, 2 * (n - a - b) + c2)

    def ok(i, j):
        rest = [vals[k] for k in range(4) if k != i and k != j]
        return max(vals[i], vals[j]) <= min(rest)

    for name, (i, j) in (("A", (1, 0)), ("B", (1, 2)), ("C", (1, 3)), ("D", (0, 2))):
        if ok(i, j):
            return name
    raise ParameterError("no case branch applicable (invalid parameters)")


def resolve_setinc_plan(
    n: int,
    a: int,
    b: int,
    c2: int,
    g2: int,
    sample_budget: Fraction = DEFAULT_SAMPLE_BUDGET,
    reps: int | None = None,
) -> SetIncPlan:
    orig_n = n
    comp_bob = False
    branch = _branch(n, a, b, c2)
    if branch == "D":
        comp_bob = True
        a, b, c2 = a, n - b, 2 * a - c2
        branch = _branch(n, a, b, c2)
        if branch == "D":
            raise ParameterError("case selection failed to terminate")

    pad = 0
    if branch == "A":
        case = 1
        n_run = n
        beta = Fraction(c2, 2 * a)
        eps_raw = Fraction(g2, 2 * a)
        p_lo = Fraction(c2 - g2, 2 * a)
        p_hi = Fraction(c2 + g2, 2 * a)
        increasing = True
    elif branch == "B":
        case = 2
        n_run = n
        beta = Fraction(c2, 2 * b)
        eps_raw = Fraction(g2, 2 * b)
        p_lo = Fraction(c2 - g2, 2 * b)
        p_hi = Fraction(c2 + g2, 2 * b)
        increasing = True
    else:
        case = 3
        pad = 1 if a + b == n else 0
        n_run = n + pad
        m = (n_run - a - b) + c2  # |~x xor y| at |x&y| = c, an integer
        den = m * m - g2 * g2
        beta = Fraction(c2 * m - g2 * g2, 2 * den)
        eps_raw = Fraction(g2 * m, 2 * den)
        p_lo = Fraction(c2 - g2, 2 * (m - g2))
        p_hi = Fraction(c2 + g2, 2 * (m + g2))
        increasing = a + b < n_run

    eps_eff = min(eps_raw, beta, 1 - beta)
    m_samples = max(1, math.ceil(sample_budget * beta / (eps_eff * eps_eff)))
    reps_eff = reps if reps is not None else auto_reps(orig_n)
    return SetIncPlan(
        case=case,
        n=orig_n,
        n_run=n_run,
        comp_bob=comp_bob,
        pad=pad,
        ra=a,
        rb=b,
        rc2=c2,
        rg2=g2,
        beta=beta,
        eps_raw=eps_raw,
        eps_eff=eps_eff,
        p_lo=p_lo,
        p_hi=p_hi,
        increasing=increasing,
        m_samples=m_samples,
        reps=reps_eff,
    )


# ---------------------------------------------------------------------------
# The SetInc core as a pair of generators


class _Counter:
    __slots__ = ("value",)

    def __init__(self):
        self.value = 0

    def take(self) -> int:
        v = self.value
        self.value += 1
        return v


def _resolved_inputs(plan: SetIncPlan, side: str, v: int) -> int:
    """Apply the plan's complement/pad to one party's input."""
    if side == "B" and plan.comp_bob:
        v = complement(v, plan.n)
    return v  # pad appends zero bits: the integer is unchanged


def _setinc_core(side: str, v: int, plan: SetIncPlan, run_seed: int, counter: _Counter):
    """Yield the core messages; returns the SetInc label of the original instance.

    Both parties run this with their own `side`; the sub-verdict is shared
    (an "answer" bit) in cases 1-2 and computed locally by both in case 3.
    """
    rv = _resolved_inputs(plan, side, v)
    n_run = plan.n_run
    beta = plan.beta
    m_s, reps = plan.m_samples, plan.reps
    threshold = beta.numerator * m_s
    den = beta.denominator

    if plan.case in (1, 2):
        # The drawing party samples its own support; the peer reports its
        # bit there, so both parties see every hit and both can decide.
        sampler_side = "A" if plan.case == 1 else "B"
        count = plan.ra if plan.case == 1 else plan.rb
        idx_w = width_for(n_run)
        sup = support(rv, n_run) if side == sampler_side else None
        good = 0
        for rep in range(reps):
            hits = 0
            for _ in range(m_s):
                sub = Stream(derive_seed(run_seed, counter.take(), TAG_SAMPLE))
                u = sub.below(count)
                if side == sampler_side:
                    idx = sup[u]
                    yield Send(idx, idx_w)
                    hit = yield Recv(1)
                else:
                    idx = yield Recv(idx_w)
                    hit = (rv >> idx) & 1
                    yield Send(hit, 1)
                hits += hit
            if hits * den >= threshold:
                good += 1
        high = good > reps // 2
        return plan.high_to_setinc(high)

    # case 3: sample the differing set of (complement(x_run), y_run)
    sval = complement(rv, n_run) if side == "A" else rv
    good = 0
    for rep in range(reps):
        hits = 0
        for _ in range(m_s):
            sub = Stream(derive_seed(run_seed, counter.take(), TAG_SAMPLE))
            idx = yield from _sampler_gen(side, sval, n_run, sub)
            if side == "A":
                hits += (rv >> idx) & 1  # x bit; equals y's bit at agreement spots
            else:
                hits += (rv >> idx) & 1
        if hits * den >= threshold:
            good += 1
    high = good > reps // 2
    return plan.high_to_setinc(high)


def _orient(variant: str, bar: bool) -> int:
    s = -1 if variant in ("esetinc", "eghd") else 1
    return -s if bar else s


class SetIncProtocol(Protocol):
    """Randomized protocol for SetInc/ESetInc (and GHD via the conversion)."""

    name = "setinc"

    def __init__(
        self,
        params: SetIncParams,
        sample_budget: Fraction = DEFAULT_SAMPLE_BUDGET,
        reps: int | None = None,
        accounting: str = "measured",
    ):
        if params.variant in ("ghd", "eghd"):
            from ..pif import setinc_ghd_convert

            params = setinc_ghd_convert(params)
        self.params = params
        self.accounting = accounting
        self.plan = resolve_setinc_plan(
            params.n, params.a, params.b, params.c2, params.g2, sample_budget, reps
        )
        self.sign = _orient(params.variant, params.bar)

    @property
    def n(self) -> int:
        return self.params.n

    def descriptor(self) -> str:
        p = self.params
        return (
            f"setinc(n={p.n},a={p.a},b={p.b},c2={p.c2},g2={p.g2},"
            f"variant={p.variant},bar={int(p.bar)},m={self.plan.m_samples},"
            f"r={self.plan.reps},mode={self.accounting})"
        )

    def validate_local(self, side: str, inp: int) -> None:
        w = popcount(inp)
        want = self.params.a if side == "A" else self.params.b
        if w != want:
            raise PromiseViolation(f"party {side} weight {w} != {want}")

    def validate_pair(self, x: int, y: int) -> None:
        self.validate_local("A", x)
        self.validate_local("B", y)
        # gap intersections are allowed by the promise: output is arbitrary

    def _party(self, side: str, io, v: int):
        p = self.params
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
        label = yield from _setinc_core(side, v, self.plan, io.rand.seed, _Counter())
        return self.sign * label

    def alice(self, io, x: int):
        return self._party("A", io, x)

    def bob(self, io, y: int):
        return self._party("B", io, y)

    # -- fast Monte Carlo path (kernel-backed) ------------------------------

    def fixed_bits(self) -> tuple[int, int]:
        """(measured, idealized) bits excluding the case-3 sampler traffic."""
        plan, p = self.plan, self.params
        base = 2 * weight_width(p.n)
        if plan.case in (1, 2):
            per = plan.reps * plan.m_samples * (width_for(plan.n_run) + 1)
            return base + per, base + per
        ideal = base + plan.reps * plan.m_samples * 2 * width_for(plan.n_run)
        return base, ideal

    def run_trials(self, xs, ys, seeds):
        """Batched seeded trials; returns (outputs, bits_measured, bits_idealized)."""
        import numpy as np

        from .. import backend
        from .._kernel_py import pack_bits

        plan = self.plan
        trials = len(seeds)
        words = (plan.n_run + 63) // 64
        xa = np.zeros((trials, words), dtype=np.uint64)
        ya = np.zeros((trials, words), dtype=np.uint64)
        for t in range(trials):
            xr = _resolved_inputs(plan, "A", xs[t])
            yr = _resolved_inputs(plan, "B", ys[t])
            if plan.case == 3:
                xr = complement(xr, plan.n_run)
            xa[t] = pack_bits(xr, plan.n_run)
            ya[t] = pack_bits(yr, plan.n_run)
        high, sbits = backend.setinc_trial_batch(
            plan.case,
            plan.n_run,
            plan.beta.numerator,
            plan.beta.denominator,
            plan.m_samples,
            plan.reps,
            xa,
            ya,
            np.asarray(seeds, dtype=np.uint64),
        )
        fm, fi = self.fixed_bits()
        outputs = np.where(
            np.array([plan.high_to_setinc(bool(h)) for h in high]) * self.sign > 0, 1, -1
        )
        bits_measured = fm + sbits
        bits_idealized = np.full(trials, fi, dtype=np.int64)
        return outputs, bits_measured, bits_idealized


# ---------------------------------------------------------------------------
# Binary search over jumps: the general PI-function protocol


class PIProtocol(Protocol):
    """Randomized protocol for an arbitrary (partial) PI function."""

    name = "pi"

    def __init__(
        self,
        table: PIFunctionTable,
        sample_budget: Fraction = DEFAULT_SAMPLE_BUDGET,
        reps: int | None = None,
    ):
        self.table = table
        self.sample_budget = sample_budget
        self.reps = reps

    @property
    def n(self) -> int:
        return self.table.n

    def descriptor(self) -> str:
        return f"pi(n={self.table.n},h={table_digest(self.table)})"

    def validate_pair(self, x: int, y: int) -> None:
        if self.table.eval(x, y, self.n, self.n) == 0:
            raise PromiseViolation("f(x,y) is undefined: inputs violate the promise")

    def _party(self, side: str, io, v: int):
        n = self.n
        ww = weight_width(n)
        my_w = popcount(v)
        if side == "A":
            yield Send(my_w, ww)
            peer_w = yield Recv(ww)
            a, b = my_w, peer_w
        else:
            peer_w = yield Recv(ww)
            yield Send(my_w, ww)
            a, b = peer_w, my_w
        sl = derive_slice(self.table, a, b)
        js = jumps(sl)
        if not js:
            vals = {u for u in sl.values if u != 0}
            if not vals:
                raise PromiseViolation(f"slice ({a},{b}) is everywhere undefined")
            return vals.pop()
        ivs = intervals(js, sl.lo, sl.hi)
        counter = _Counter()
        lo, hi = 0, len(js)
        while lo < hi:
            j = (lo + hi + 1) // 2
            jp = js[j - 1]
            plan = resolve_setinc_plan(n, a, b, jp.c2, jp.g2, self.sample_budget, self.reps)
            label = yield from _setinc_core(side, v, plan, io.rand.seed, counter)
            if label == -1:  # |x&y| <= c_j - g_j
                hi = j - 1
            else:
                lo = j
        ilo, ihi = ivs[lo]
        for c in range(ilo, ihi + 1):
            val = sl.value(c)
            if val != 0:
                return val
        raise PromiseViolation("selected interval holds no defined value")

    def alice(self, io, x: int):
        return self._party("A", io, x)

    def bob(self, io, y: int):
        return self._party("B", io, y)


# ---------------------------------------------------------------------------
# Deterministic protocol for total PI functions


class DetTotalProtocol(Protocol):
    """Exact protocol: weights, then the lighter-side input as a combinadic rank."""

    name = "det-total"

    def __init__(self, table: PIFunctionTable):
        if not table.is_total():
            raise ParameterError("deterministic protocol requires a total function")
        self.table = table

    @property
    def n(self) -> int:
        return self.table.n

    def descriptor(self) -> str:
        return f"det-total(n={self.table.n},h={table_digest(self.table)})"

    def cost_formula(self, a: int, b: int) -> int:
        """Exact bits for the weight pair (a, b), echo bit included."""
        n = self.n
        sl = derive_slice(self.table, a, b)
        base = 2 * weight_width(n)
        if not sl.non_trivial:
            return base
        return base + min(
            width_for(math.comb(n, a)), width_for(math.comb(n, b))
        ) + 1

    def worst_case_bits(self) -> int:
        n = self.n
        return max(self.cost_formula(a, b) for a in range(n + 1) for b in range(n + 1))

    def _party(self, side: str, io, v: int):
        n = self.n
        ww = weight_width(n)
        my_w = popcount(v)
        if side == "A":
            yield Send(my_w, ww)
            peer_w = yield Recv(ww)
            a, b = my_w, peer_w
        else:
            peer_w = yield Recv(ww)
            yield Send(my_w, ww)
            a, b = peer_w, my_w
        sl = derive_slice(self.table, a, b)
        if not sl.non_trivial:
            return sl.value(sl.lo)
        alice_sends = math.comb(n, a) <= math.comb(n, b)
        i_send = (side == "A") == alice_sends
        rank_w = width_for(math.comb(n, a if alice_sends else b))
        if i_send:
            yield Send(combinadic_rank(v, n), rank_w)
            got = yield Recv(1)
            return 1 if got else -1
        rank = yield Recv(rank_w)
        peer_v = combinadic_unrank(rank, n, a if alice_sends else b)
        out = self.table.eval(peer_v, v, n, n) if side == "B" else self.table.eval(v, peer_v, n, n)
        yield Send(1 if out == 1 else 0, 1, "answer")
        return out

    def alice(self, io, x: int):
        return self._party("A", io, x)

    def bob(self, io, y: int):
        return self._party("B", io, y)


# ---------------------------------------------------------------------------
# Weight-exchange demo protocol (also the TCP smoke-test protocol)


class WeightExchangeProtocol(Protocol):
    """Both parties learn both weights; output +1 iff they are equal."""

    name = "weightx"

    def __init__(self, n: int):
        self._n = n

    @property
    def n(self) -> int:
        return self._n

    def descriptor(self) -> str:
        return f"weightx(n={self._n})"

    def alice(self, io, x: int):
        ww = weight_width(self._n)
        yield Send(popcount(x), ww)
        wb = yield Recv(ww)
        return 1 if wb == popcount(x) else -1

    def bob(self, io, y: int):
        ww = weight_width(self._n)
        wa = yield Recv(ww)
        yield Send(popcount(y), ww)
        return 1 if wa == popcount(y) else -1
