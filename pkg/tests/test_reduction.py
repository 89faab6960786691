"""Reduction certificates: spec examples, side conditions, value preservation."""

from fractions import Fraction
from itertools import combinations

import pytest

from ccx.errors import ParameterError
from ccx.pif import SetIncParams, make_setinc
from ccx.bounds.reduction import esetinc_lower_certificate, reduction_transform


def all_valid_params(n_max, n_min=2):
    for n in range(n_min, n_max + 1):
        for a in range(1, n):
            for b in range(1, n):
                lo_min = max(0, a + b - n)
                hi_max = min(a, b)
                for u in range(lo_min, hi_max + 1):
                    for v in range(u + 1, hi_max + 1):
                        yield SetIncParams(n, a, b, u + v, v - u, variant="esetinc")


def weight_strings(n, w):
    for sup in combinations(range(n), w):
        val = 0
        for i in sup:
            val |= 1 << i
        yield val


def test_certificate_example_16_8_8_4_1():
    cert = esetinc_lower_certificate(SetIncParams(16, 8, 8, 8, 2, variant="esetinc"))
    assert cert.case == 3
    t = cert.terminal
    assert (t.n, t.a, t.b, t.c2, t.g2) == (4, 2, 1, 1, 1)
    assert cert.terminal_sq == Fraction(1, 2)
    assert cert.reported_bound == 4.0
    assert cert.steps[-1].detail == {"l1": 0, "l2": 1, "l3": 1, "l": 2}
    assert cert.ok()


def test_certificate_example_case1():
    cert = esetinc_lower_certificate(SetIncParams(4, 2, 2, 2, 2, variant="esetinc"))
    assert cert.case == 1
    assert cert.reported_bound == 1.0
    assert (cert.terminal.n, cert.terminal.a, cert.terminal.b) == (2, 1, 1)


def test_side_conditions_hold_small_exhaustive():
    count = 0
    for p in all_valid_params(16):
        cert = esetinc_lower_certificate(p)  # raises on violated conditions
        assert cert.ok()
        count += 1
    assert count > 1000


def test_terminal_constraints():
    for p in all_valid_params(12):
        cert = esetinc_lower_certificate(p)
        t = cert.terminal
        assert t.g2 == 1
        if cert.case in (2, 3):
            assert t.a == 2 * t.b  # the 4K/2K/K shape
            assert t.c2 % 2 == 1  # l is a half-integer
            assert 0 < t.c2 <= t.b  # 0 < l <= K/2


def test_value_preservation_steps_small():
    for p in all_valid_params(6):
        cert = esetinc_lower_certificate(p)
        for step in cert.steps:
            src_t = make_setinc(step.src)
            dst_t = make_setinc(step.dst)
            sign = -1 if step.value_flip else 1
            for x in weight_strings(step.dst.n, step.dst.a):
                for y in weight_strings(step.dst.n, step.dst.b):
                    dv = dst_t.eval(x, y, step.dst.n, step.dst.n)
                    if dv == 0:
                        continue
                    xs, ys = step.apply_inputs(x, y)
                    assert src_t.eval(xs, ys, step.src.n, step.src.n) == sign * dv


def test_transform_pad_example():
    p = SetIncParams(4, 2, 2, 2, 2, variant="esetinc")
    out, step = reduction_transform("pad", p, l1=1, l2=1, l3=0, l=2)
    assert (out.n, out.a, out.b, out.c2, out.g2) == (6, 3, 3, 2, 2)
    table_small = make_setinc(p)
    table_big = make_setinc(out)
    for x in weight_strings(4, 2):
        for y in weight_strings(4, 2):
            v = table_small.eval(x, y, 4, 4)
            if v == 0:
                continue
            xs, ys = step.apply_inputs(x, y)
            assert table_big.eval(xs, ys, 6, 6) == v  # pad preserves values


def test_transform_complement_bob_flips():
    p = SetIncParams(4, 2, 2, 2, 2, variant="esetinc")
    out, step = reduction_transform("complement_bob", p)
    assert (out.n, out.a, out.b, out.c2) == (4, 2, 2, 2)
    assert step.value_flip
    table = make_setinc(p)
    for x in weight_strings(4, 2):
        for y in weight_strings(4, 2):
            v = table.eval(x, y, 4, 4)
            if v == 0:
                continue
            xs, ys = step.apply_inputs(x, y)
            assert table.eval(xs, ys, 4, 4) == -v


def test_transform_repeat_example():
    p = SetIncParams(4, 2, 2, 2, 2, variant="esetinc")
    out, step = reduction_transform("repeat", p, k=2)
    assert (out.n, out.a, out.b, out.c2, out.g2) == (8, 4, 4, 4, 4)
    ts, tb = make_setinc(p), make_setinc(out)
    for x in weight_strings(4, 2):
        for y in weight_strings(4, 2):
            v = ts.eval(x, y, 4, 4)
            if v == 0:
                continue
            xs, ys = step.apply_inputs(x, y)
            assert tb.eval(xs, ys, 8, 8) == v


def test_transform_invalid_pad_rejected():
    p = SetIncParams(4, 2, 2, 2, 2, variant="esetinc")
    with pytest.raises(ParameterError):
        reduction_transform("pad", p, l1=2, l2=2, l3=0, l=2)  # l1+l2 > l
