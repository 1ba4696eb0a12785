import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gtm.analysis import (
    PowerSeriesInput, QComplex, add_complete_records, add_intervals, approx_leq_k, geometric,
    interval_add, interval_add_seq, limit, limit_intervals, partial_sum, ratio_bound,
    series_partial, series_sum, sqrt_upper, terms_needed,
)
from gtm.errors import InvariantBreach, NotAName, PrecisionError
from gtm.names import LazySeq, encode_interval, interval_stream, read_intervals
from gtm.represent import rho_decode, rho_encode, rho_intervals

F = Fraction


# -- addition -------------------------------------------------------------------

def test_add_intervals_example():
    assert add_intervals((F(1, 2), F(3, 4)), (F(1, 4), F(1, 2))) == (F(3, 4), F(5, 4))


def test_interval_add_of_one_third_and_one_sixth():
    p = interval_add(rho_encode(F(1, 3)), rho_encode(F(1, 6)))
    for d in (0, 5, 17, 30):
        lo, hi = rho_decode(p, d)
        assert lo <= F(1, 2) <= hi and hi - lo <= F(1, 2 ** d)


def test_interval_add_with_a_constant_interval():
    const = interval_stream(itertools.repeat((F(0), F(1))))
    sums = list(itertools.islice(read_intervals(interval_add(rho_encode(F(1)), const)), 8))
    assert all(b - a >= 1 for a, b in sums)
    assert all(a <= F(3, 2) <= b for a, b in sums)


def test_interval_add_seq_matches_stream_version():
    xs, ys = rho_intervals(F(2, 3)), rho_intervals(F(-1, 5))
    got = interval_add_seq(xs, ys).take(6)
    want = list(itertools.islice(read_intervals(interval_add(rho_encode(F(2, 3)), rho_encode(F(-1, 5)))), 6))
    assert got == want


def test_add_complete_records_is_monotone_on_name_prefixes():
    x = "".join(encode_interval(*iv) for iv in rho_intervals(F(1, 3)).take(4))
    y = "".join(encode_interval(*iv) for iv in rho_intervals(F(1, 6)).take(4))
    prev = ""
    for cut in range(0, len(x) + 1, 7):
        out = add_complete_records(x[:cut], y[:cut])
        assert out.startswith(prev)
        prev = out
    assert add_complete_records("0" + x, y) == ""


# -- approximate comparison ---------------------------------------------------

def test_approx_leq_examples():
    for k in range(0, 12):
        assert approx_leq_k(rho_encode(0), rho_encode(1), k) == "tt"
    assert approx_leq_k(rho_encode(2), rho_encode(0), 1) == "ff"
    assert approx_leq_k(rho_encode(0), rho_encode(0), 3) in ("tt", "ff")
    assert approx_leq_k(rho_encode(0), rho_encode(0), 3) == approx_leq_k(rho_encode(0), rho_encode(0), 3)


def test_approx_leq_needs_precision():
    const = interval_stream(itertools.repeat((F(0), F(1))))
    with pytest.raises(PrecisionError):
        approx_leq_k(const, rho_encode(0), 2, budget=20)


@settings(max_examples=150, deadline=None)
@given(st.fractions(min_value=-4, max_value=4, max_denominator=64),
       st.fractions(min_value=-4, max_value=4, max_denominator=64),
       st.integers(0, 12))
def test_approx_leq_soundness(x, y, k):
    got = approx_leq_k(rho_encode(x), rho_encode(y), k)
    if x < y:
        assert got == "tt"
    if x > y + F(1, 2 ** k):
        assert got == "ff"


def test_approx_leq_near_the_gap():
    # both answers are admissible inside the gap, outside it only one is
    for k in (0, 4, 9):
        eps = F(1, 2 ** k)
        assert approx_leq_k(rho_encode(F(1, 3) - eps / 1000), rho_encode(F(1, 3)), k) == "tt"
        assert approx_leq_k(rho_encode(F(1, 3) + eps + eps / 1000), rho_encode(F(1, 3)), k) == "ff"


# -- limits -------------------------------------------------------------------

def test_limit_of_constant_sequence():
    re, im = limit_intervals(LazySeq.from_function(lambda k: F(4, 3)))
    for n, (a, b) in enumerate(re.take(20)):
        assert a <= F(4, 3) <= b and b - a == F(1, 2 ** n)
    assert all(a <= 0 <= b for a, b in im.take(5))
    lo, hi = rho_decode(limit(LazySeq.from_function(lambda k: F(4, 3)))[0], 30)
    assert lo <= F(4, 3) <= hi


def test_limit_of_converging_sequence_contains_the_limit():
    re, _ = limit_intervals(LazySeq.from_function(lambda k: 1 - F(1, 2 ** k)))
    assert all(a <= 1 <= b for a, b in re.take(40))


def test_limit_of_complex_sequence():
    re, im = limit_intervals(LazySeq.from_function(lambda k: QComplex(F(1, 2), F(-3))))
    assert all(a <= F(1, 2) <= b for a, b in re.take(10))
    assert all(a <= -3 <= b for a, b in im.take(10))


def test_limit_of_garbage_is_refuted_downstream():
    re, _ = limit(LazySeq.from_function(lambda k: F(k)))
    with pytest.raises(NotAName):
        rho_decode(re, 10)


# -- power series -------------------------------------------------------------

def test_qcomplex_arithmetic():
    z = QComplex(F(1), F(2))
    assert z * z == QComplex(F(-3), F(4))
    assert (z + 1) - z == QComplex(F(1), F(0))
    assert z.abs2() == 5 and str(z) == "1+2i" and str(QComplex(F(1, 2))) == "1/2"
    assert QComplex.of((1, -1)) == QComplex(F(1), F(-1))


def test_sqrt_upper_is_a_directed_bound():
    for t in (F(0), F(1, 4), F(1, 2), F(2), F(1, 3)):
        for bits in (1, 8, 30):
            c = sqrt_upper(t, bits)
            low = c - F(1, 2 ** bits)
            assert c * c >= t and (low < 0 or low * low <= t)
    assert sqrt_upper(F(1, 4), 5) == F(1, 2)


def test_terms_needed_is_minimal():
    for M, q, k in ((F(1), F(3, 4), 3), (F(5), F(1, 2), 10), (F(1, 3), F(99, 100), 7)):
        n = terms_needed(M, q, k)
        assert M * q ** n / (1 - q) < F(1, 2 ** k)
        assert n == 0 or M * q ** (n - 1) / (1 - q) >= F(1, 2 ** k)
    assert terms_needed(F(0), F(1, 2), 5) == 0


def test_worked_geometric_example():
    inp = PowerSeriesInput(geometric, F(1, 2), 1, F(1, 4))
    rep = series_partial(inp, 3, report=True)
    assert rep.ratio == F(1, 2) and rep.q == F(3, 4) and rep.terms == 13
    assert rep.value == QComplex((1 - F(1, 4 ** 13)) * F(4, 3))
    assert abs(rep.value.re - F(4, 3)) == F(4, 3) / 4 ** 13 < F(1, 8)


def test_zero_argument_gives_leading_coefficient():
    inp = PowerSeriesInput(lambda j: F(1, 2 ** j), F(1), 1, 0)
    for k in (0, 5, 20):
        assert series_partial(inp, k) == QComplex(F(1))
    lo, hi = rho_decode(series_sum(inp)[0], 20)
    assert lo <= 1 <= hi


def test_cauchy_bound_with_equality():
    inp = PowerSeriesInput(lambda j: F(2) ** j, F(1, 2), 1, F(1, 8))
    for k in range(21):
        assert abs(series_partial(inp, k).re - F(4, 3)) <= F(1, 2 ** k)


def test_cauchy_breach_is_reported():
    inp = PowerSeriesInput(lambda j: F(1, math.factorial(j)), F(2), 1, F(1, 2))
    with pytest.raises(InvariantBreach, match="j=1"):
        series_partial(inp, 4)


def test_argument_outside_radius_is_rejected():
    with pytest.raises(InvariantBreach):
        PowerSeriesInput(geometric, F(1, 2), 1, QComplex(F(1, 2), F(0)))
    with pytest.raises(InvariantBreach):
        PowerSeriesInput(geometric, F(0), 1, 0)
    with pytest.raises(InvariantBreach):
        PowerSeriesInput(geometric, F(1), -1, 0)


def test_ratio_bound_stays_below_one_close_to_the_radius():
    inp = PowerSeriesInput(geometric, F(1), 1, F(10**6 - 1, 10**6))
    c = ratio_bound(inp, 0)
    assert F(10**6 - 1, 10**6) <= c < 1


@pytest.mark.parametrize("z", [F(1, 4), F(1, 8), F(-1, 4)])
def test_geometric_error_bound(z):
    inp = PowerSeriesInput(geometric, F(1, 2), 1, z)
    s = 1 / (1 - z)
    for k in range(0, 41, 4):
        b = series_partial(inp, k)
        assert b.im == 0 and abs(b.re - s) <= F(1, 2 ** k)


def test_complex_argument():
    z = QComplex(F(0), F(1, 4))
    inp = PowerSeriesInput(geometric, F(1, 2), 1, z)
    s_re, s_im = F(16, 17), F(4, 17)  # 1 / (1 - i/4)
    for k in (3, 10, 25):
        b = series_partial(inp, k)
        assert (b.re - s_re) ** 2 + (b.im - s_im) ** 2 <= F(1, 4 ** k)
    re, im = series_sum(inp)
    lo, hi = rho_decode(im, 15)
    assert lo <= s_im <= hi


def test_series_sum_at_width_2_to_minus_40():
    inp = PowerSeriesInput(geometric, F(1, 2), 1, F(1, 4))
    lo, hi = rho_decode(series_sum(inp)[0], 40)
    assert lo <= F(4, 3) <= hi and hi - lo <= F(1, 2 ** 40)


def test_partial_sum_horner():
    inp = PowerSeriesInput(lambda j: F(j + 1), F(1, 4), F(10 ** 9), F(1, 8))
    assert partial_sum(inp, 3) == QComplex(1 + F(2, 8) + F(3, 64))
    assert partial_sum(inp, 0) == QComplex(F(0))


def test_random_rational_ratios():
    rng = random.Random(8)
    for _ in range(20):
        r = F(rng.randint(1, 9), rng.randint(1, 9))
        z = r * F(rng.randint(-99, 99), 100)
        inp = PowerSeriesInput(lambda j, r=r: r ** -j, r, 1, z)
        s = 1 / (1 - z / r)
        for k in (0, 7, 19):
            assert abs(series_partial(inp, k).re - s) <= F(1, 2 ** k)
