import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from optaccel import InvalidInputError, ParseError
from optaccel.amdahl import (
    BenchmarkProfile,
    ClassifierConfig,
    ProfileRow,
    SpeedupReport,
    accel_fraction,
    aggregate,
    amdahl_speedup,
    analyze,
    classify_accelerable,
    load_table1,
    parse_profiles,
    printed_checks,
    read_profiles,
)

fractions = st.floats(0, 1)
factors = st.one_of(st.floats(1, 1e6), st.just(math.inf))

TABLE1 = load_table1()
CHECKS = printed_checks(TABLE1)


def full(rows, total, name="b"):
    return BenchmarkProfile(name, total, rows=tuple(ProfileRow(n, t) for n, t in rows))


def test_fft_row_fraction():
    f = classify_accelerable(full([("fft2", 0.912), ("setup", 0.021)], 0.933))
    assert f == 0.912 / 0.933
    # printed 97.79 %; millisecond-rounded times only pin the ratio to ~1e-3
    assert f == pytest.approx(0.9779, abs=1.1e-3)


def test_no_match_and_all_match():
    assert classify_accelerable(full([("load", 1.0), ("plot", 2.0)], 3.0)) == 0.0
    assert classify_accelerable(full([("np.fft.ifft2", 1.0), ("Conv2D", 2.0)], 3.0)) == 1.0


def test_patterns_are_case_insensitive_and_overridable():
    p = full([("scipy.signal.FFTConvolve", 1.0), ("wiener", 1.0)], 4.0)
    assert classify_accelerable(p) == 0.25
    assert classify_accelerable(p, ClassifierConfig(("WIENER",))) == 0.25
    assert classify_accelerable(p, ClassifierConfig(("wiener", "conv"))) == 0.5
    with pytest.raises(InvalidInputError):
        ClassifierConfig(())


def test_overlapping_rows_are_clamped():
    # callers should not pass overlapping rows, but the fraction never exceeds 1
    assert classify_accelerable(full([("fft", 2.0), ("fftshift", 2.0)], 3.0)) == 1.0


def test_zero_total_rejected():
    with pytest.raises(InvalidInputError):
        classify_accelerable(full([("fft", 0.0)], 0.0))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["fft", "conv2d", "io", "plot", "Fourier"]), st.floats(0, 10)), min_size=1),
       st.randoms(use_true_random=False), st.floats(0.01, 0.99))
def test_classification_permutation_and_split_invariant(rows, rnd, cut):
    total = sum(t for _, t in rows) + 1.0
    base = classify_accelerable(full(rows, total))
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert classify_accelerable(full(shuffled, total)) == pytest.approx(base, rel=1e-12, abs=1e-15)
    name, t = rows[0]
    split = [(name, t * cut), (name, t - t * cut)] + rows[1:]
    assert classify_accelerable(full(split, total)) == pytest.approx(base, rel=1e-12, abs=1e-15)


# -- the speedup law --------------------------------------------------------------------------

def test_wiener_row():
    assert amdahl_speedup(0.6751) == pytest.approx(3.078, abs=5e-4)
    assert round(amdahl_speedup(0.6751), 2) == 3.08


def test_direct_substitution():
    assert amdahl_speedup(0.5, 2) == 4 / 3
    assert amdahl_speedup(0.0, 7) == 1.0
    assert amdahl_speedup(0.0) == 1.0
    assert amdahl_speedup(1.0) == math.inf
    assert amdahl_speedup(1.0, 8) == 8.0


@pytest.mark.parametrize("f,p", [(-0.1, 2), (1.1, 2), (0.5, 0.5), (math.nan, 2)])
def test_speedup_validation(f, p):
    with pytest.raises(InvalidInputError):
        amdahl_speedup(f, p)


@settings(max_examples=200, deadline=None)
@given(fractions, fractions, factors)
def test_monotone_in_fraction(a, b, p):
    lo, hi = sorted((a, b))
    assert amdahl_speedup(lo, p) <= amdahl_speedup(hi, p)


@settings(max_examples=200, deadline=None)
@given(fractions, factors, factors)
def test_monotone_in_acceleration(f, a, b):
    lo, hi = sorted((a, b))
    assert amdahl_speedup(f, lo) <= amdahl_speedup(f, hi) * (1 + 1e-15)


@settings(max_examples=100, deadline=None)
@given(fractions, factors)
def test_identity_points(f, p):
    assert amdahl_speedup(0.0, p) == 1.0
    assert amdahl_speedup(f, 1.0) == pytest.approx(1.0, rel=1e-15)


def test_report():
    r = SpeedupReport("x", 0.5, acceleration=2)
    assert r.speedup == 4 / 3
    assert r.asymptotic_speedup == 2.0
    assert r.speedup_at(4) == pytest.approx(1 / 0.625)
    assert SpeedupReport("y", 1.0).asymptotic_speedup == math.inf


# -- aggregates ---------------------------------------------------------------------------------

def reports(speedups):
    return [SpeedupReport(str(i), 1 - 1 / s) for i, s in enumerate(speedups)]


def test_aggregate_small():
    a = aggregate(reports([1, 2, 4]))
    assert a.mean == pytest.approx(7 / 3)
    assert a.median == pytest.approx(2)
    assert (a.min, a.max) == (pytest.approx(1), pytest.approx(4))
    one = aggregate(reports([2.0]))
    assert one.mean == one.median == 2.0
    assert aggregate(reports([1, 2, 4, 8])).median == pytest.approx(3)


def test_aggregate_empty():
    with pytest.raises(InvalidInputError):
        aggregate([])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1, 100), min_size=1, max_size=30, unique=True), st.floats(0.01, 0.49))
def test_median_survives_small_order_preserving_nudges(values, frac):
    values = sorted(values)
    gaps = [b - a for a, b in zip(values, values[1:])]
    eps = frac * min(gaps) if gaps else frac
    assume(eps > 1e-9)
    nudged = [v + (eps if i % 2 else -eps) * 0.5 for i, v in enumerate(values)]
    assume(all(v > 1 for v in nudged))
    before = aggregate(reports(values)).median
    after = aggregate(reports(nudged)).median
    assert abs(after - before) <= eps


# -- bundled benchmark table -------------------------------------------------------------------

def test_table_has_27_rows():
    assert len(TABLE1) == 27
    assert all(p.accel_time_s <= p.total_time_s for p in TABLE1)


def test_table_aggregates():
    a = aggregate(analyze(TABLE1))
    assert a.mean == pytest.approx(9.39, abs=0.05)
    assert a.median == pytest.approx(1.94, abs=0.01)


def test_convolution_row_rounding():
    conv = next(c for c in CHECKS if c.name == "Convolution")
    assert conv.speedup == pytest.approx(159.0, abs=1e-9)
    assert conv.within()


@pytest.mark.parametrize("check", CHECKS, ids=[c.name for c in CHECKS])
def test_time_and_percent_columns_agree(check):
    assert abs(check.speedup - check.speedup_from_pct) / check.speedup_from_pct <= 0.03


# -- CSV parsing ---------------------------------------------------------------------------------

def test_full_form(tmp_path):
    p = tmp_path / "prof.csv"
    p.write_text(
        "benchmark,function,cumulative_s,total_s\n"
        "wiener,fft2,0.5,2.0\n"
        "wiener,load,1.0,2.0\n"
        "cnn,conv2d,3.0,4.0\n"
    )
    ps = read_profiles(p)
    assert [x.name for x in ps] == ["wiener", "cnn"]
    assert [accel_fraction(x) for x in ps] == [0.25, 0.75]


def test_reduced_form_single_row():
    (p,) = parse_profiles("benchmark,accel_time_s,total_time_s\nconv,0.158,0.159\n")
    assert amdahl_speedup(accel_fraction(p)) == pytest.approx(159.0)
    assert p.extra == {}


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("name,time\n", 1),
    ("benchmark,accel_time_s,total_time_s\n", 1),
    ("benchmark,accel_time_s,total_time_s\na,1,2\nb,3,2\n", 3),
    ("benchmark,accel_time_s,total_time_s\na,x,2\n", 2),
    ("benchmark,accel_time_s,total_time_s\na,0,0\n", 2),
    ("benchmark,accel_time_s,total_time_s\na,1\n", 2),
    ("benchmark,function,cumulative_s,total_s\na,fft,1,2\na,io,1,3\n", 3),
    ("benchmark,function,cumulative_s,total_s\na,fft,-1,2\n", 2),
    ("benchmark,function,cumulative_s,total_s\na,fft,inf,2\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_profiles(text)
    assert exc.value.line == line


def test_printed_checks_need_printed_columns():
    with pytest.raises(InvalidInputError):
        printed_checks(parse_profiles("benchmark,accel_time_s,total_time_s\na,1,2\n"))
