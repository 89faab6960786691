"""Exact rank lower bounds for total PI functions via submatrix embeddings.

For every non-constant slice (normalized by input complements and a
transpose so that a <= b <= n/2) three explicit paddings embed a
Disjointness or Equality block into the input matrix:

  * disj1: weight-1 strings in n' = n-(a+b-c-2) bits around any transition c;
  * disj : weight-(l-c) strings, l = floor(3a/5), when the slice is constant
           on (c, l] for the largest transition c below 4a/7;
  * eq   : weight-(c+1) strings in n-a-b+2(c+1) bits at the smallest
           transition c (the slice is constant on [0, c] by minimality).

Each embedded block is exactly a +-Disjointness/Equality matrix, whose rank
is at least C(m, w) - 1; complements and transposes permute rows/columns of
the input matrix, so the bound applies to rank(f) itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from ..bits import complement
from ..errors import NoBound, ParameterError
from ..pif import PIFunctionTable, derive_slice


def _tcx(f: PIFunctionTable) -> PIFunctionTable:
    n = f.n
    ent = {(n - a, b, b - c): v for (a, b, c), v in f.entries.items()}
    return PIFunctionTable(n, ent, f.name + "|cx")


def _tcy(f: PIFunctionTable) -> PIFunctionTable:
    n = f.n
    ent = {(a, n - b, a - c): v for (a, b, c), v in f.entries.items()}
    return PIFunctionTable(n, ent, f.name + "|cy")


def _tswap(f: PIFunctionTable) -> PIFunctionTable:
    ent = {(b, a, c): v for (a, b, c), v in f.entries.items()}
    return PIFunctionTable(f.n, ent, f.name + "|swap")


@dataclass(frozen=True)
class View:
    cx: bool
    cy: bool
    swap: bool
    table: PIFunctionTable

    def to_original(self, x: int, y: int) -> tuple[int, int]:
        n = self.table.n
        u, v = (y, x) if self.swap else (x, y)
        return (complement(u, n) if self.cx else u), (complement(v, n) if self.cy else v)


def all_views(f: PIFunctionTable) -> list[View]:
    out = []
    for cx in (False, True):
        for cy in (False, True):
            for swap in (False, True):
                t = f
                if cx:
                    t = _tcx(t)
                if cy:
                    t = _tcy(t)
                if swap:
                    t = _tswap(t)
                out.append(View(cx, cy, swap, t))
    return out


@dataclass(frozen=True)
class Embedding:
    kind: str  # disj1 | disj | eq
    view: View
    a: int
    b: int
    c: int  # transition used (slice values differ at c, c+1)
    m: int
    w: int
    x_suffix: int
    y_suffix: int
    suffix_len: int
    v_base: int  # value on the disjoint / unequal side
    v_other: int  # value on the intersecting / equal side

    @property
    def bound(self) -> int:
        return math.comb(self.m, self.w) - 1

    def lift(self, xs: int, ys: int) -> tuple[int, int]:
        """Map embedded-instance inputs to inputs of the view's function."""
        return xs | (self.x_suffix << self.m), ys | (self.y_suffix << self.m)

    def expected(self, xs: int, ys: int) -> int:
        if self.kind in ("disj1", "disj"):
            return self.v_base if (xs & ys) == 0 else self.v_other
        return self.v_other if xs == ys else self.v_base

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "view": {"cx": self.view.cx, "cy": self.view.cy, "swap": self.view.swap},
            "slice": [self.a, self.b],
            "transition": self.c,
            "instance": f"{self.kind}^{self.w}_{self.m}",
            "bound": self.bound,
        }


def _ones(k: int) -> int:
    return (1 << k) - 1


def _slice_embeddings(view: View, a: int, b: int) -> list[Embedding]:
    n = view.table.n
    sl = derive_slice(view.table, a, b)
    trans = [c for c in range(sl.lo, sl.hi) if sl.value(c) != sl.value(c + 1)]
    if not trans:
        return []
    out = []

    # disj1 at the smallest transition
    c = trans[0]
    m = n - (a + b - c - 2)
    out.append(
        Embedding(
            kind="disj1",
            view=view,
            a=a,
            b=b,
            c=c,
            m=m,
            w=1,
            x_suffix=_ones(a - 1),
            y_suffix=_ones(c) | (_ones(b - c - 1) << (a - 1)),
            suffix_len=a + b - c - 2,
            v_base=sl.value(c),
            v_other=sl.value(c + 1),
        )
    )

    # disj at the largest transition below 4a/7, if the slice is then flat
    low = [c for c in trans if 7 * c < 4 * a]
    if low:
        c = low[-1]
        l = (3 * a) // 5
        lp = a - l  # == ceil(2a/5)
        w = l - c
        m = n - (c + b - a + 2 * lp)
        flat = all(sl.value(z) == sl.value(c + 1) for z in range(c + 1, l + 1))
        if w >= 1 and m >= 2 * w and flat:
            out.append(
                Embedding(
                    kind="disj",
                    view=view,
                    a=a,
                    b=b,
                    c=c,
                    m=m,
                    w=w,
                    x_suffix=_ones(c) | (_ones(lp) << (c + (b - a) + lp)),
                    y_suffix=_ones(c + (b - a) + lp),
                    suffix_len=c + (b - a) + 2 * lp,
                    v_base=sl.value(c),
                    v_other=sl.value(c + 1),
                )
            )

    # eq at the smallest transition (constant below by minimality)
    c = trans[0]
    w = c + 1
    m = n - a - b + 2 * w
    out.append(
        Embedding(
            kind="eq",
            view=view,
            a=a,
            b=b,
            c=c,
            m=m,
            w=w,
            x_suffix=_ones(a - w),
            y_suffix=_ones(b - w) << (a - w),
            suffix_len=a + b - 2 * w,
            v_base=sl.value(c),
            v_other=sl.value(c + 1),
        )
    )
    return out


@dataclass(frozen=True)
class LogRankBound:
    value: int
    best: Embedding
    witnesses: tuple

    def as_dict(self) -> dict:
        return {
            "rank_lower_bound": self.value,
            "best": self.best.describe(),
            "witnesses": [e.describe() for e in self.witnesses],
        }


def logrank_embedding_bound(f: PIFunctionTable) -> LogRankBound:
    if not f.is_total():
        raise ParameterError("embedding bounds require a total function")
    n = f.n
    found: list[Embedding] = []
    for view in all_views(f):
        for a in range(1, n // 2 + 1):
            for b in range(a, n // 2 + 1):
                found.extend(_slice_embeddings(view, a, b))
    if not found:
        raise NoBound("function is trivial: no non-constant slice")
    best = max(found, key=lambda e: e.bound)
    return LogRankBound(best.bound, best, tuple(found))


def verify_embedding(f: PIFunctionTable, emb: Embedding, cap_entries: int = 1 << 16) -> dict:
    """Pointwise check that the embedded block sits inside f's matrix."""
    side = math.comb(emb.m, emb.w)
    if side * side > cap_entries:
        return {"skipped": True, "entries": side * side}
    pts = []
    for sup in combinations(range(emb.m), emb.w):
        v = 0
        for i in sup:
            v |= 1 << i
        pts.append(v)
    n = f.n
    mism = 0
    for xs in pts:
        for ys in pts:
            xv, yv = emb.lift(xs, ys)
            x0, y0 = emb.view.to_original(xv, yv)
            want = emb.expected(xs, ys)
            if emb.view.table.eval(xv, yv, n, n) != want or f.eval(x0, y0, n, n) != want:
                mism += 1
    return {"skipped": False, "entries": side * side, "mismatched": mism}
