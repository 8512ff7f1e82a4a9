"""Amdahl's-law speedup limits from profiling data.

Profiles come in two shapes:

* full: flat ``(function, cumulative seconds)`` rows plus the run's total
  time. Rows whose name matches a pattern count as accelerable. Rows must not
  overlap; call-graph de-duplication is the caller's job.
* reduced: just ``accel_time_s`` and ``total_time_s``.

CSV layouts::

    benchmark,function,cumulative_s,total_s        (full)
    benchmark,accel_time_s,total_time_s[,...]      (reduced; extra columns kept)
"""

import csv
import io
import math
import statistics
from dataclasses import dataclass, field
from importlib import resources

from .errors import InvalidInputError, ParseError

DEFAULT_PATTERNS = ("fft", "ifft", "fourier", "conv")

FULL_FIELDS = ("benchmark", "function", "cumulative_s", "total_s")
REDUCED_FIELDS = ("benchmark", "accel_time_s", "total_time_s")


@dataclass(frozen=True)
class ProfileRow:
    function_name: str
    cumulative_s: float


@dataclass(frozen=True)
class BenchmarkProfile:
    """One benchmark's profile, in full form (``rows``) or reduced form (``accel_time_s``)."""

    name: str
    total_time_s: float
    rows: tuple = ()
    accel_time_s: float = None
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.accel_time_s is not None:
            if self.accel_time_s < 0:
                raise InvalidInputError(f"{self.name}: accel_time_s must be >= 0")
            if self.accel_time_s > self.total_time_s:
                raise InvalidInputError(f"{self.name}: accel_time_s exceeds total_time_s")
        for r in self.rows:
            if r.cumulative_s < 0:
                raise InvalidInputError(f"{self.name}: negative time for {r.function_name}")


@dataclass(frozen=True)
class ClassifierConfig:
    patterns: tuple = DEFAULT_PATTERNS

    def __post_init__(self):
        if not self.patterns:
            raise InvalidInputError("pattern list is empty")
        object.__setattr__(self, "patterns", tuple(p.lower() for p in self.patterns))

    def matches(self, function_name):
        name = function_name.lower()
        return any(p in name for p in self.patterns)


def classify_accelerable(profile, cfg=ClassifierConfig()):
    """Fraction of run time spent in functions whose names match ``cfg``."""
    if not profile.total_time_s > 0:
        raise InvalidInputError(f"{profile.name}: total_time_s must be positive")
    accel = sum(r.cumulative_s for r in profile.rows if cfg.matches(r.function_name))
    return min(1.0, max(0.0, accel / profile.total_time_s))


def accel_fraction(profile, cfg=ClassifierConfig()):
    """Accelerable fraction for either profile form."""
    if profile.accel_time_s is not None:
        if not profile.total_time_s > 0:
            raise InvalidInputError(f"{profile.name}: total_time_s must be positive")
        return profile.accel_time_s / profile.total_time_s
    return classify_accelerable(profile, cfg)


def amdahl_speedup(f, p=math.inf):
    """End-to-end speedup ``1 / ((1 - f) + f / p)``.

    ``p = inf`` (the default) gives the ``1 / (1 - f)`` limit where the
    accelerated part takes no time; ``f = 1`` there returns ``inf``.
    """
    if not 0.0 <= f <= 1.0:
        raise InvalidInputError(f"fraction must lie in [0, 1], got {f}")
    if not p >= 1:
        raise InvalidInputError(f"acceleration factor must be >= 1, got {p}")
    fixed = 1.0 - f
    denom = fixed if math.isinf(p) else fixed + f / p
    if denom == 0:
        return math.inf
    return 1.0 / denom


@dataclass(frozen=True)
class SpeedupReport:
    name: str
    accel_fraction: float
    acceleration: float = math.inf

    def speedup_at(self, p):
        return amdahl_speedup(self.accel_fraction, p)

    @property
    def speedup(self):
        return amdahl_speedup(self.accel_fraction, self.acceleration)

    @property
    def asymptotic_speedup(self):
        return amdahl_speedup(self.accel_fraction)


def analyze(profiles, cfg=ClassifierConfig(), acceleration=math.inf):
    return [SpeedupReport(p.name, accel_fraction(p, cfg), acceleration) for p in profiles]


@dataclass(frozen=True)
class Aggregate:
    count: int
    mean: float
    median: float
    min: float
    max: float


def aggregate(reports):
    if not reports:
        raise InvalidInputError("no reports to aggregate")
    s = [r.speedup for r in reports]
    return Aggregate(len(s), statistics.fmean(s), statistics.median(s), min(s), max(s))


def _num(raw, what, line, path):
    try:
        v = float(raw)
    except ValueError:
        raise ParseError(f"{what} {raw!r} is not a number", line=line, path=path) from None
    if not math.isfinite(v):
        raise ParseError(f"{what} must be finite", line=line, path=path)
    return v


def read_profiles(path):
    with open(path, newline="") as fh:
        return parse_profiles(fh.read(), path=str(path))


def parse_profiles(text, path=None):
    """Parse either CSV layout; the header decides which.

    Full-form rows are grouped by benchmark in order of first appearance, and
    every row of a benchmark must repeat the same ``total_s``.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty file", line=1, path=path) from None
    if tuple(header[:3]) == REDUCED_FIELDS:
        return _read_reduced(reader, header, path)
    if tuple(header) == FULL_FIELDS:
        return _read_full(reader, path)
    raise ParseError(
        f"header must be {','.join(FULL_FIELDS)} or {','.join(REDUCED_FIELDS)}", line=1, path=path
    )


def _rows(reader, width, path):
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width:
            raise ParseError(f"expected {width} fields, got {len(row)}", line=reader.line_num, path=path)
        yield reader.line_num, [c.strip() for c in row]


def _read_reduced(reader, header, path):
    out = []
    for line, row in _rows(reader, len(header), path):
        accel = _num(row[1], "accel_time_s", line, path)
        total = _num(row[2], "total_time_s", line, path)
        extra = dict(zip(header[3:], row[3:]))
        try:
            out.append(BenchmarkProfile(row[0], total, accel_time_s=accel, extra=extra))
        except InvalidInputError as exc:
            raise ParseError(str(exc), line=line, path=path) from None
        if total <= 0:
            raise ParseError(f"{row[0]}: total_time_s must be positive", line=line, path=path)
    if not out:
        raise ParseError("no data rows", line=1, path=path)
    return out


def _read_full(reader, path):
    groups = {}
    totals = {}
    for line, (bench, func, cum, total) in _rows(reader, len(FULL_FIELDS), path):
        cum = _num(cum, "cumulative_s", line, path)
        total = _num(total, "total_s", line, path)
        if cum < 0:
            raise ParseError("cumulative_s must be >= 0", line=line, path=path)
        if total <= 0:
            raise ParseError("total_s must be positive", line=line, path=path)
        if bench in totals and totals[bench] != total:
            raise ParseError(f"{bench}: total_s changes from {totals[bench]} to {total}", line=line, path=path)
        totals[bench] = total
        groups.setdefault(bench, []).append(ProfileRow(func, cum))
    if not groups:
        raise ParseError("no data rows", line=1, path=path)
    return [BenchmarkProfile(b, totals[b], rows=tuple(rs)) for b, rs in groups.items()]


def load_table1():
    """The bundled 27-benchmark dataset, reduced form, with printed columns in ``extra``."""
    text = resources.files("optaccel").joinpath("data").joinpath("table1.csv").read_text()
    return parse_profiles(text, path="table1.csv")


TABLE1_ROW_TOLERANCE = 0.03


@dataclass(frozen=True)
class PrintedCheck:
    """Recomputed speedup next to the published columns of one benchmark."""

    name: str
    speedup: float
    printed_speedup: float
    printed_fraction_pct: float

    @property
    def speedup_from_pct(self):
        return amdahl_speedup(self.printed_fraction_pct / 100.0)

    @property
    def rel_error(self):
        return abs(self.speedup - self.printed_speedup) / self.printed_speedup

    def within(self, tol=TABLE1_ROW_TOLERANCE):
        return self.rel_error <= tol


def printed_checks(profiles):
    """Compare each reduced profile against its ``printed_*`` extra columns."""
    out = []
    for p in profiles:
        try:
            printed = float(p.extra["printed_speedup"])
            pct = float(p.extra["printed_fraction_pct"])
        except (KeyError, ValueError):
            raise InvalidInputError(f"{p.name}: no printed_speedup/printed_fraction_pct columns") from None
        out.append(PrintedCheck(p.name, amdahl_speedup(accel_fraction(p)), printed, pct))
    return out
