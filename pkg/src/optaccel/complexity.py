"""When does offloading to an analog accelerator pay for its data conversions?

For a problem of size ``N`` the accelerator must convert ``conversion_count(N)``
elements (``2N`` by default: every input in, every output back). The offload
speedup is::

    ops(N) * t_digital / (conversion_count(N) * t_conv + ops(N) * t_analog)

Work that grows no faster than the conversions (``O(N)``) can never win by
more than a constant factor.
"""

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInputError

BREAKEVEN_CAP = 2 ** 40


def _log(x):
    return math.log(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class ComplexityClass:
    """An operation-count curve ``ops(N)``.

    ``log_ops`` (natural log, ``-inf`` for zero work) is used above
    ``log_space_above`` and wherever ``ops`` overflows; when ``log_ops_fn`` is
    omitted it is ``log(ops(N))``.
    """

    label: str
    ops: Callable[[float], float]
    log_ops_fn: Optional[Callable[[float], float]] = None
    log_space_above: Optional[float] = None

    def log_ops(self, n):
        if self.log_ops_fn is not None:
            return self.log_ops_fn(n)
        return _log(self.ops(n))


LINEAR = ComplexityClass("N", lambda n: n)
NLOGN = ComplexityClass("N log2 N", lambda n: n * math.log2(n))
QUADRATIC = ComplexityClass("N^2", lambda n: n * n, lambda n: 2 * _log(n))
EXPONENTIAL = ComplexityClass("2^N", lambda n: 2.0 ** n, lambda n: n * math.log(2), log_space_above=60)

BUILTIN_CLASSES = {"n": LINEAR, "nlogn": NLOGN, "n2": QUADRATIC, "2n": EXPONENTIAL}


def constant(k, label=None):
    """Fixed work ``k`` regardless of size."""
    if k < 0:
        raise InvalidInputError("constant work must be >= 0")
    return ComplexityClass(label or f"{k:g}", lambda n: k)


def tabulated(sizes, ops, label="tabulated"):
    """User-measured curve, linearly interpolated in log-log space.

    Sizes outside the tabulated range raise; no extrapolation is attempted.
    """
    sizes = np.asarray(sizes, dtype=float)
    ops = np.asarray(ops, dtype=float)
    if sizes.ndim != 1 or sizes.shape != ops.shape or sizes.size < 2:
        raise InvalidInputError("need at least two (size, ops) pairs")
    if np.any(np.diff(sizes) <= 0) or sizes[0] < 1:
        raise InvalidInputError("sizes must be >= 1 and strictly increasing")
    if np.any(ops <= 0) or np.any(np.diff(ops) < 0):
        raise InvalidInputError("tabulated ops must be positive and nondecreasing")
    ls, lo = np.log(sizes), np.log(ops)
    lo_n, hi_n = sizes[0], sizes[-1]

    def log_ops(n):
        if not lo_n <= n <= hi_n:
            raise InvalidInputError(f"N={n} outside tabulated range [{lo_n:g}, {hi_n:g}]")
        return float(np.interp(math.log(n), ls, lo))

    return ComplexityClass(label, lambda n: math.exp(log_ops(n)), log_ops)


@dataclass(frozen=True)
class CrossoverConfig:
    """Per-element and per-op times (seconds).

    ``conversion_count`` defaults to ``2N``. Pass ``lambda n: n_in(n) + n_out(n)``
    when inputs and outputs differ in size.
    """

    t_conv_s: float = 1.0
    t_digital_s: float = 1.0
    t_analog_s: float = 0.0
    conversion_count: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        for name in ("t_conv_s", "t_digital_s", "t_analog_s"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidInputError(f"{name} must be finite and >= 0")

    def conversions(self, n):
        return 2.0 * n if self.conversion_count is None else float(self.conversion_count(n))


def _logsumexp2(a, b):
    m = max(a, b)
    if m == -math.inf:
        return -math.inf
    return m + math.log(math.exp(a - m) + math.exp(b - m))


def log_offload_speedup(cls, cfg, n):
    """Natural log of :func:`offload_speedup`; stays finite where the ratio overflows."""
    if n < 1:
        raise InvalidInputError("N must be >= 1")
    lops = cls.log_ops(n)
    num = lops + _log(cfg.t_digital_s)
    den = _logsumexp2(_log(cfg.conversions(n)) + _log(cfg.t_conv_s), lops + _log(cfg.t_analog_s))
    if den == -math.inf:
        return math.inf if num > -math.inf else math.nan
    return num - den


def offload_speedup(cls, cfg, n):
    """Digital time over accelerator time (conversions plus analog compute).

    ``math.inf`` when the accelerator side costs nothing.
    """
    if n < 1:
        raise InvalidInputError("N must be >= 1")
    direct = _direct(cls, cfg, n)
    if direct is not None:
        return direct
    ls = log_offload_speedup(cls, cfg, n)
    try:
        return math.exp(ls)
    except OverflowError:
        return math.inf


def _direct(cls, cfg, n):
    # None when the plain ratio is off limits (log-space region or overflow)
    if cls.log_space_above is not None and n > cls.log_space_above:
        return None
    try:
        ops = float(cls.ops(n))
        den = cfg.conversions(n) * cfg.t_conv_s + ops * cfg.t_analog_s
        num = ops * cfg.t_digital_s
    except OverflowError:
        return None
    if not (math.isfinite(num) and math.isfinite(den)):
        return None
    if den == 0:
        return math.inf if num > 0 else math.nan
    return num / den


@dataclass(frozen=True)
class Breakeven:
    size: Optional[int]
    reason: str = ""


def breakeven_size(cls, cfg, target):
    """Smallest integer ``N`` with ``offload_speedup >= target``.

    Gallops through powers of two, then bisects the last bracket. The search
    assumes the speedup is nondecreasing in N (true for superlinear work with
    ``t_analog = 0``) and gives up above ``2**40``.
    """
    if not target > 0:
        raise InvalidInputError("target speedup must be positive")
    log_target = math.log(target)

    def ok(n):
        direct = _direct(cls, cfg, n)
        if direct is not None:
            return direct >= target
        return log_offload_speedup(cls, cfg, n) >= log_target

    if ok(1):
        return Breakeven(1, "target met at N=1")
    lo, hi = 1, 2
    while not ok(hi):
        lo, hi = hi, hi * 2
        if hi > BREAKEVEN_CAP:
            s = offload_speedup(cls, cfg, BREAKEVEN_CAP)
            return Breakeven(None, f"speedup {s:.6g} at N=2^40 is still below target {target:g}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return Breakeven(hi, "")


def speedup_curve(cls, cfg, n_values):
    """``[(N, speedup, log10 speedup), ...]`` for ascending ``n_values``."""
    n_values = list(n_values)
    if not n_values:
        raise InvalidInputError("no sizes given")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise InvalidInputError("sizes must be strictly ascending")
    out = []
    for n in n_values:
        ls = log_offload_speedup(cls, cfg, n)
        out.append((n, offload_speedup(cls, cfg, n), ls / math.log(10)))
    return out


def curve_csv(points):
    """Plot-ready ``N,speedup,log10_speedup`` CSV text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "speedup", "log10_speedup"])
    for n, s, l10 in points:
        w.writerow([n, repr(float(s)), repr(float(l10))])
    return buf.getvalue()
