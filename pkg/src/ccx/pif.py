"""Permutation-invariant Boolean functions stored by joint type.

A permutation-invariant f(x, y) on {0,1}^n x {0,1}^n depends only on the
joint type (|x|, |y|, |x & y|), so a (possibly partial) function is a sparse
map from achievable joint types to {-1, +1}; absent types are undefined.

Everything half-integral (jump centers/gaps, the multiset entries feeding
the measure, reduction-chain parameters) is carried as a doubled integer so
comparisons and tie cases stay exact.  Values use +1/-1 and 0 for undefined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

from .bits import popcount
from .errors import ParameterError

UNDEF = 0

SETINC_VARIANTS = ("setinc", "esetinc", "ghd", "eghd")


def achievable_c(n: int, a: int, b: int) -> range:
    """Achievable values of |x & y| given |x| = a, |y| = b."""
    return range(max(0, a + b - n), min(a, b) + 1)


def joint_type_ok(n: int, a: int, b: int, c: int) -> bool:
    return 0 <= a <= n and 0 <= b <= n and max(0, a + b - n) <= c <= min(a, b)


@dataclass(frozen=True)
class PIFunctionTable:
    """Sparse joint-type table; immutable after construction."""

    n: int
    entries: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.n <= 0:
            raise ParameterError("n must be positive")
        for (a, b, c), v in self.entries.items():
            if not joint_type_ok(self.n, a, b, c):
                raise ParameterError(f"joint type {(a, b, c)} unachievable at n={self.n}")
            if v not in (-1, 1):
                raise ParameterError(f"table value must be +-1, got {v!r}")

    def value_at(self, a: int, b: int, c: int) -> int:
        return self.entries.get((a, b, c), UNDEF)

    def eval(self, x: int, y: int, nx: int, ny: int) -> int:
        if nx != self.n or ny != self.n:
            raise ParameterError(f"input length {nx}/{ny} != n={self.n}")
        return self.value_at(popcount(x), popcount(y), popcount(x & y))

    def is_total(self) -> bool:
        n = self.n
        return all(
            (a, b, c) in self.entries
            for a in range(n + 1)
            for b in range(n + 1)
            for c in achievable_c(n, a, b)
        )

    def non_trivial(self) -> bool:
        """True when some slice is non-constant on its defined points."""
        return any(
            derive_slice(self, a, b).non_trivial
            for a in range(self.n + 1)
            for b in range(self.n + 1)
        )


def eval_pif(f: PIFunctionTable, x: int, y: int, n: int) -> int:
    return f.eval(x, y, n, n)


# ---------------------------------------------------------------------------
# Builders


def constant_table(n: int, v: int, name: str = "") -> PIFunctionTable:
    if v not in (-1, 1):
        raise ParameterError("constant value must be +-1")
    ent = {
        (a, b, c): v
        for a in range(n + 1)
        for b in range(n + 1)
        for c in achievable_c(n, a, b)
    }
    return PIFunctionTable(n, ent, name or f"const{v:+d}_{n}")


def disj_table(n: int) -> PIFunctionTable:
    """Set-Disjointness: -1 iff the supports are disjoint."""
    ent = {
        (a, b, c): (-1 if c == 0 else 1)
        for a in range(n + 1)
        for b in range(n + 1)
        for c in achievable_c(n, a, b)
    }
    return PIFunctionTable(n, ent, f"disj_{n}")


def eq_table(n: int) -> PIFunctionTable:
    """Equality as a PI function: x == y iff |x| = |y| = |x & y|."""
    ent = {
        (a, b, c): (-1 if a == b == c else 1)
        for a in range(n + 1)
        for b in range(n + 1)
        for c in achievable_c(n, a, b)
    }
    return PIFunctionTable(n, ent, f"eq_{n}")


@dataclass(frozen=True)
class SetIncParams:
    """Doubled-integer parameters of a SetInc / ESetInc / GHD / EGHD instance."""

    n: int
    a: int
    b: int
    c2: int
    g2: int
    variant: str = "setinc"
    bar: bool = False

    def __post_init__(self):
        if self.variant not in SETINC_VARIANTS:
            raise ParameterError(f"unknown variant {self.variant!r}")
        if self.g2 <= 0:
            raise ParameterError("g2 must be positive")
        if (self.c2 - self.g2) % 2 != 0:
            raise ParameterError("c2 and g2 must have equal parity (c-g integral)")
        if not (1 <= self.a <= self.n - 1 and 1 <= self.b <= self.n - 1):
            raise ParameterError("a, b must lie in {1..n-1}")
        lo, hi = self.lo, self.hi
        if self.variant in ("setinc", "esetinc"):
            cs = achievable_c(self.n, self.a, self.b)
            if lo not in cs or hi not in cs:
                raise ParameterError(
                    f"intersections {lo}, {hi} unachievable for n={self.n}, a={self.a}, b={self.b}"
                )
        else:
            if not (self.dist_ok(lo) and self.dist_ok(hi)):
                raise ParameterError(
                    f"distances {lo}, {hi} unachievable for n={self.n}, a={self.a}, b={self.b}"
                )

    @property
    def lo(self) -> int:
        return (self.c2 - self.g2) // 2

    @property
    def hi(self) -> int:
        return (self.c2 + self.g2) // 2

    @property
    def c(self) -> Fraction:
        return Fraction(self.c2, 2)

    @property
    def g(self) -> Fraction:
        return Fraction(self.g2, 2)

    def dist_ok(self, d: int) -> bool:
        n, a, b = self.n, self.a, self.b
        if (d - (a + b)) % 2 != 0:
            return False
        return abs(a - b) <= d <= min(a + b, 2 * n - a - b)

    def label(self) -> str:
        bar = "~" if self.bar else ""
        return f"{bar}{self.variant}^{self.n}_({self.a},{self.b},c2={self.c2},g2={self.g2})"


def setinc_ghd_convert(p: SetIncParams) -> SetIncParams:
    """SetInc(n,a,b,c,g) <-> GHD(n,a,b,a+b-2c,2g) via Delta = |x|+|y|-2|x&y|."""
    if p.variant in ("setinc", "esetinc"):
        c2 = 2 * (p.a + p.b) - 2 * p.c2
        g2 = 2 * p.g2
        variant = "ghd" if p.variant == "setinc" else "eghd"
    else:
        if p.c2 % 2 or p.g2 % 2:
            raise ParameterError("GHD center/gap must be integral to convert to SetInc")
        c2 = (p.a + p.b) - p.c2 // 2
        g2 = p.g2 // 2
        variant = "setinc" if p.variant == "ghd" else "esetinc"
    return SetIncParams(p.n, p.a, p.b, c2, g2, variant, p.bar)


def _setinc_value(p: SetIncParams, inter: int) -> int:
    lo, hi = p.lo, p.hi
    if p.variant == "setinc":
        v = -1 if inter <= lo else (1 if inter >= hi else UNDEF)
    elif p.variant == "esetinc":
        v = 1 if inter == lo else (-1 if inter == hi else UNDEF)
    elif p.variant == "ghd":
        d = p.a + p.b - 2 * inter
        v = -1 if d >= hi else (1 if d <= lo else UNDEF)
    else:  # eghd
        d = p.a + p.b - 2 * inter
        v = -1 if d == lo else (1 if d == hi else UNDEF)
    if p.bar and v != UNDEF:
        v = -v
    return v


def make_setinc(p: SetIncParams) -> PIFunctionTable:
    ent = {}
    for c in achievable_c(p.n, p.a, p.b):
        v = _setinc_value(p, c)
        if v != UNDEF:
            ent[(p.a, p.b, c)] = v
    return PIFunctionTable(p.n, ent, p.label())


# ---------------------------------------------------------------------------
# Slices, jumps, intervals


@dataclass(frozen=True)
class SliceFunction:
    """Restriction f_{a,b} of a PI function to fixed weights, as a function of |x & y|."""

    a: int
    b: int
    lo: int
    hi: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo + 1:
            raise ParameterError("slice values length mismatch")

    def value(self, c: int) -> int:
        if not self.lo <= c <= self.hi:
            raise ParameterError(f"{c} outside slice domain [{self.lo}, {self.hi}]")
        return self.values[c - self.lo]

    @property
    def defined_points(self) -> list[int]:
        return [self.lo + i for i, v in enumerate(self.values) if v != UNDEF]

    @property
    def non_trivial(self) -> bool:
        vals = {v for v in self.values if v != UNDEF}
        return len(vals) > 1


def derive_slice(f: PIFunctionTable, a: int, b: int) -> SliceFunction:
    lo = max(0, a + b - f.n)
    hi = min(a, b)
    vals = tuple(f.value_at(a, b, c) for c in range(lo, hi + 1))
    return SliceFunction(a, b, lo, hi, vals)


@dataclass(frozen=True, order=True)
class Jump:
    """A jump (c, g): defined differing values at c-g, c+g, undefined between."""

    c2: int
    g2: int

    def __post_init__(self):
        if self.g2 <= 0 or (self.c2 - self.g2) % 2 != 0:
            raise ParameterError("jump endpoints must be integers with g > 0")

    @property
    def lo(self) -> int:
        return (self.c2 - self.g2) // 2

    @property
    def hi(self) -> int:
        return (self.c2 + self.g2) // 2

    @property
    def c(self) -> Fraction:
        return Fraction(self.c2, 2)

    @property
    def g(self) -> Fraction:
        return Fraction(self.g2, 2)


def jumps(sl: SliceFunction) -> list[Jump]:
    """Jumps of a slice: consecutive defined points with differing values."""
    out = []
    pts = sl.defined_points
    for u, v in zip(pts, pts[1:]):
        if sl.value(u) != sl.value(v):
            out.append(Jump(c2=u + v, g2=v - u))
    return out


def intervals(jump_list: list[Jump], lo: int, hi: int) -> list[tuple[int, int]]:
    """The k+1 inclusive intervals cut out of [lo, hi] by the jump gaps."""
    out = []
    cur = lo
    for j in sorted(jump_list):
        out.append((cur, j.lo))
        cur = j.hi
    out.append((cur, hi))
    return out


# ---------------------------------------------------------------------------
# The measure


@dataclass(frozen=True)
class MultisetQuad:
    """The multiset {[a-c, c, b-c, n-a-b+c]} in doubled integers, with its two minima."""

    quad2: tuple
    n1_2: int
    n2_2: int

    @property
    def n1(self) -> Fraction:
        return Fraction(self.n1_2, 2)

    @property
    def n2(self) -> Fraction:
        return Fraction(self.n2_2, 2)


def smallest_two(n: int, a: int, b: int, c2: int) -> MultisetQuad:
    quad2 = (2 * a - c2, c2, 2 * b - c2, 2 * (n - a - b) + c2)
    s = sorted(quad2)
    return MultisetQuad(quad2, s[0], s[1])


@dataclass(frozen=True)
class MeasureResult:
    value: float
    m2_squared: Fraction  # exact value of m(f)^2
    witness: tuple | None  # (a, b, c2, g2) or None when m(f) = 0

    def as_dict(self) -> dict:
        d = {"m": self.value, "m_squared": [self.m2_squared.numerator, self.m2_squared.denominator]}
        if self.witness:
            a, b, c2, g2 = self.witness
            d["witness"] = {"a": a, "b": b, "c2": c2, "g2": g2}
        else:
            d["witness"] = None
        return d


def measure_m(f: PIFunctionTable) -> MeasureResult:
    """max over slices (a, b in 1..n-1) and jumps of sqrt(n1*n2)/g; 0 if none.

    Ties broken toward the lexicographically smallest (a, b, c2, g2) witness.
    Comparison is exact: candidates are ranked by m^2 = n1_2*n2_2/g2^2 as a
    Fraction of doubled integers.
    """
    best: Fraction = Fraction(0)
    wit = None
    n = f.n
    for a in range(1, n):
        for b in range(1, n):
            sl = derive_slice(f, a, b)
            for j in jumps(sl):
                q = smallest_two(n, a, b, j.c2)
                cand = Fraction(q.n1_2 * q.n2_2, j.g2 * j.g2)
                key = (a, b, j.c2, j.g2)
                if cand > best or (cand == best and wit is not None and key < wit):
                    best = cand
                    wit = key
    return MeasureResult(sqrt(best), best, wit)


# ---------------------------------------------------------------------------
# Function-file JSON format

_BUILTINS = {}


def _register(name):
    def deco(fn):
        _BUILTINS[name] = fn
        return fn

    return deco


@_register("disj")
def _b_disj(params):
    return disj_table(int(params["n"]))


@_register("eq")
def _b_eq(params):
    return eq_table(int(params["n"]))


@_register("constant")
def _b_const(params):
    return constant_table(int(params["n"]), int(params.get("v", 1)))


def _setinc_builtin(variant):
    def build(params):
        p = SetIncParams(
            n=int(params["n"]),
            a=int(params["a"]),
            b=int(params["b"]),
            c2=int(params["c2"]),
            g2=int(params["g2"]),
            variant=variant,
            bar=bool(params.get("bar", False)),
        )
        return make_setinc(p)

    return build


for _v in SETINC_VARIANTS:
    _BUILTINS[_v] = _setinc_builtin(_v)


def table_from_dict(doc: dict) -> PIFunctionTable:
    if "n" not in doc:
        raise ParameterError('function file is missing the "n" field')
    n = int(doc["n"])
    builtin = doc.get("builtin")
    if builtin is not None:
        if isinstance(builtin, str):
            name, params = builtin, {"n": n}
        else:
            name = builtin.get("name")
            params = dict(builtin.get("params", {}))
            params.setdefault("n", n)
        if name not in _BUILTINS:
            raise ParameterError(f"unknown builtin {name!r}")
        t = _BUILTINS[name](params)
        if t.n != n:
            raise ParameterError("builtin n disagrees with file n")
        return t
    entries = {}
    for i, e in enumerate(doc.get("entries", [])):
        try:
            key = (int(e["a"]), int(e["b"]), int(e["c"]))
            v = int(e["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"entries[{i}]: malformed ({exc})") from exc
        entries[key] = v
    return PIFunctionTable(n, entries, doc.get("name", ""))


def table_to_dict(f: PIFunctionTable) -> dict:
    return {
        "n": f.n,
        "name": f.name,
        "default": "*",
        "entries": [
            {"a": a, "b": b, "c": c, "v": v} for (a, b, c), v in sorted(f.entries.items())
        ],
    }


def load_table(path: str) -> PIFunctionTable:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParameterError(f"{path}: expected a JSON object")
    return table_from_dict(doc)


def save_table(f: PIFunctionTable, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(table_to_dict(f), fh, indent=2)
        fh.write("\n")
