"""Power/speed Pareto analysis of published data-converter designs.

A design dominates another when it uses no more power and samples at least
as fast, strictly better in one of the two. Survey CSVs use the header::

    id,kind,power_w,sample_rate_hz,resolution_bits,year

Real survey data (e.g. the Murmann ADC survey) is not bundled;
:func:`synthetic_records` generates stand-in data with a realistic spread.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ParseError

KINDS = ("DAC", "ADC")
CSV_FIELDS = ("id", "kind", "power_w", "sample_rate_hz", "resolution_bits", "year")


@dataclass(frozen=True)
class ConverterRecord:
    id: str
    kind: str
    power_w: float
    sample_rate_hz: float
    resolution_bits: int
    year: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"kind must be DAC or ADC, got {self.kind!r}")
        if not self.power_w > 0:
            raise InvalidInputError(f"{self.id}: power_w must be positive")
        if not self.sample_rate_hz > 0:
            raise InvalidInputError(f"{self.id}: sample_rate_hz must be positive")
        if self.resolution_bits < 1:
            raise InvalidInputError(f"{self.id}: resolution_bits must be >= 1")

    @property
    def energy_per_sample_j(self):
        return self.power_w / self.sample_rate_hz

    @property
    def energy_per_bit_j(self):
        # nominal resolution, not ENOB
        return self.power_w / (self.sample_rate_hz * self.resolution_bits)


def dominates(a, b):
    """True if ``a`` strictly dominates ``b`` (lower power, higher rate)."""
    return (
        a.power_w <= b.power_w
        and a.sample_rate_hz >= b.sample_rate_hz
        and (a.power_w < b.power_w or a.sample_rate_hz > b.sample_rate_hz)
    )


def pareto_frontier(records):
    """Non-dominated records, sorted by ascending power.

    Records tied on both power and rate are collapsed to the first one in
    input order. Runs in O(n log n).
    """
    records = list(records)
    if not records:
        raise InvalidInputError("no records")
    order = sorted(range(len(records)), key=lambda i: (records[i].power_w, -records[i].sample_rate_hz, i))
    frontier = []
    best_rate = -np.inf
    for i in order:
        r = records[i]
        if r.sample_rate_hz > best_rate:
            frontier.append(r)
            best_rate = r.sample_rate_hz
    return frontier


def pareto_frontier_bruteforce(records):
    """O(n^2) pairwise-dominance frontier, same tie rule as :func:`pareto_frontier`."""
    records = list(records)
    if not records:
        raise InvalidInputError("no records")
    keep = []
    seen = set()
    for i, r in enumerate(records):
        if any(dominates(o, r) for j, o in enumerate(records) if j != i):
            continue
        key = (r.power_w, r.sample_rate_hz)
        if key in seen:
            continue
        seen.add(key)
        keep.append(r)
    return sorted(keep, key=lambda r: r.power_w)


@dataclass(frozen=True)
class FeasibilityGap:
    gap: float
    best_record: str
    frontier_min_energy_per_bit_j: float


def feasibility_gap(records, kind, target_energy_per_bit_j):
    """How far the best frontier design is from an energy-per-bit target.

    ``gap = min(frontier energy/bit) / target``; ``gap <= 1`` means some
    frontier design already meets the target.
    """
    if not target_energy_per_bit_j > 0:
        raise InvalidInputError("target energy per bit must be positive")
    subset = [r for r in records if r.kind == kind]
    if not subset:
        raise InvalidInputError(f"no {kind} records")
    frontier = pareto_frontier(subset)
    best = min(frontier, key=lambda r: r.energy_per_bit_j)
    e = best.energy_per_bit_j
    return FeasibilityGap(gap=e / target_energy_per_bit_j, best_record=best.id, frontier_min_energy_per_bit_j=e)


def read_csv(path):
    with open(path, newline="") as fh:
        return parse_csv(fh.read(), path=str(path))


def parse_csv(text, path=None):
    """Parse converter records; errors name the offending line."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file", line=1, path=path) from None
    header = [h.strip() for h in header]
    if tuple(header) != CSV_FIELDS:
        raise ParseError(f"header must be {','.join(CSV_FIELDS)}", line=1, path=path)
    out = []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(CSV_FIELDS):
            raise ParseError(f"expected {len(CSV_FIELDS)} fields, got {len(row)}", line=line, path=path)
        rid, kind, power, rate, bits, year = (c.strip() for c in row)
        try:
            out.append(ConverterRecord(rid, kind, float(power), float(rate), int(bits), int(year)))
        except ValueError as exc:
            raise ParseError(str(exc), line=line, path=path) from None
    if not out:
        raise ParseError("no data rows", line=1, path=path)
    return out


def write_csv(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([r.id, r.kind, repr(r.power_w), repr(r.sample_rate_hz), r.resolution_bits, r.year])


def synthetic_records(n, kind="ADC", seed=0):
    """Random converter designs with a power-vs-speed tradeoff.

    Rates are log-uniform over 1 kS/s .. 100 GS/s; power follows a
    technology-limited floor ``~ rate * 10^-12.5 J`` times a log-normal spread
    of about two decades, plus a static floor. Resolution is 4..16 bits.
    """
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if kind not in KINDS:
        raise InvalidInputError(f"kind must be DAC or ADC, got {kind!r}")
    rng = np.random.default_rng(seed)
    log_rate = rng.uniform(3, 11, n)
    bits = rng.integers(4, 17, n)
    log_power = log_rate - 12.5 + 0.1 * bits + np.abs(rng.normal(0, 1.0, n))
    power = 10.0 ** log_power + 1e-6
    years = rng.integers(1997, 2024, n)
    return [
        ConverterRecord(f"{kind}{i:04d}", kind, float(power[i]), float(10.0 ** log_rate[i]), int(bits[i]), int(years[i]))
        for i in range(n)
    ]
