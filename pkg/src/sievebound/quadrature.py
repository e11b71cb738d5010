"""Certified region integration: adaptive interval quadrature and Monte Carlo.

`integrate_rigorous` encloses integral(f over region intersect box) between
machine floats.  The box is refined adaptively; every leaf contributes

    volume(leaf) * fraction_bounds(leaf) * value_bounds(leaf)

where fraction_bounds are the region module's certified volume-fraction
bounds (exact at a single linear constraint, Frechet-combined above) and
value_bounds come from the integrand's interval extension.  Leaves fully
inside the region may instead use the integrand's certified average
enclosure (a mean-value form), always intersected with the plain value
enclosure, which keeps refinement monotone.  All endpoint arithmetic is
outward-rounded, and the final endpoint sums use math.fsum, which is
correctly rounded, before one outward rounding step.

`integrate_mc` is the unrigorous cross-check: plain uniform sampling over
the box with the region as indicator.  It is deterministic for a fixed
(seed, workers) pair; the worker count changes the stream split, never
the statistical meaning.
"""

from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .buchstab import Enclosure, _down, _up
from .regions import Box, RegionPredicate

__all__ = [
    "Integrand",
    "IntegralEstimate",
    "integrate_rigorous",
    "integrate_mc",
]

RIGOROUS = "rigorous"
MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class Integrand:
    """A nonnegative integrand with a certified interval extension.

    value:      exact-intent float evaluation at a point inside the box.
    value_many: vectorized evaluation for an (n, arity) float array; only
                required for Monte Carlo, and only trusted on points the
                region mask accepts.
    enclosure:  certified bounds on {f(t) : t in box}.
    average:    optional certified bounds on the box average of f
                (tighter than `enclosure` when curvature information is
                available); must hold for the true mean over the box.
    """

    arity: int
    value: Callable[[tuple[float, ...]], float]
    enclosure: Callable[[Box], Enclosure]
    value_many: Optional[Callable[[np.ndarray], np.ndarray]] = None
    average: Optional[Callable[[Box], Enclosure]] = None


@dataclass(frozen=True)
class IntegralEstimate:
    """Result of an integration run.

    In rigorous mode [lower, upper] is a certified sandwich and stderr
    is zero.  In Monte Carlo mode lower == upper == point estimate and
    stderr is the estimated standard error; nothing is certified.
    exhausted marks a rigorous run that hit its box budget before
    reaching the requested gap.
    """

    lower: float
    upper: float
    boxes_used: int
    mode: str
    stderr: float = 0.0
    exhausted: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def _volume_enclosure(box: Box) -> Enclosure:
    v = Enclosure(1.0)
    for lo, hi in box:
        v = v * (Enclosure(hi) - Enclosure(lo))
    return v


def _leaf_contribution(f: Integrand, region: RegionPredicate, box: Box) -> tuple[float, float]:
    """Certified bounds on integral(f) over (region intersect box)."""
    fr_lo, fr_hi = region.fraction(box)
    if fr_hi == 0:
        return 0.0, 0.0
    volume = _volume_enclosure(box)
    enc = f.enclosure(box)
    enc = Enclosure(max(enc.lo, 0.0), max(enc.hi, 0.0))
    if fr_lo == 1:
        if f.average is not None:
            enc = f.average(box).intersect(enc)
        contrib = volume * enc
    else:
        frac = Enclosure(max(_down(float(fr_lo)), 0.0), min(_up(float(fr_hi)), 1.0))
        contrib = volume * frac * enc
    return max(contrib.lo, 0.0), contrib.hi


def _split(box: Box, scale: tuple[float, ...]) -> Optional[tuple[Box, Box]]:
    widths = [(hi - lo) / s for (lo, hi), s in zip(box, scale)]
    dim = max(range(len(box)), key=lambda i: (widths[i], -i))
    lo, hi = box[dim]
    mid = 0.5 * (lo + hi)
    if not lo < mid < hi:
        return None
    left = tuple(box[:dim]) + ((lo, mid),) + tuple(box[dim + 1 :])
    right = tuple(box[:dim]) + ((mid, hi),) + tuple(box[dim + 1 :])
    return left, right


def integrate_rigorous(
    f: Integrand,
    region: RegionPredicate,
    box: Box,
    budget: int = 10**6,
    tol: float = 1e-5,
) -> IntegralEstimate:
    """Adaptive certified sandwich for integral(f over region intersect box).

    Refines the leaf with the largest lower/upper contribution gap until
    the total gap falls below tol or `budget` boxes have been evaluated.
    Deterministic: the refinement order depends only on the arguments.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != f.arity or len(box) != region.arity:
        raise ValueError("box, integrand and region dimensions disagree")
    for lo, hi in box:
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError("box intervals must be finite and nondegenerate")

    scale = tuple(hi - lo for lo, hi in box)
    stop_tol = 0.97 * tol
    settled_lo: list[float] = []
    settled_hi: list[float] = []
    heap: list[tuple[float, int, Box, float, float]] = []
    seq = 0

    def admit(leaf: Box) -> float:
        nonlocal seq
        lo_c, hi_c = _leaf_contribution(f, region, leaf)
        gap = hi_c - lo_c
        if gap <= 0.0:
            if hi_c != 0.0 or lo_c != 0.0:
                settled_lo.append(lo_c)
                settled_hi.append(hi_c)
            return 0.0
        heapq.heappush(heap, (-gap, seq, leaf, lo_c, hi_c))
        seq += 1
        return gap

    boxes_used = 1
    approx_gap = admit(box)
    while heap and boxes_used + 2 <= budget and approx_gap > stop_tol:
        _, _, leaf, lo_c, hi_c = heapq.heappop(heap)
        parts = _split(leaf, scale)
        if parts is None:
            settled_lo.append(lo_c)
            settled_hi.append(hi_c)
            continue
        boxes_used += 2
        approx_gap -= hi_c - lo_c
        approx_gap += admit(parts[0])
        approx_gap += admit(parts[1])

    lows = settled_lo + [item[3] for item in heap]
    highs = settled_hi + [item[4] for item in heap]
    lower = max(_down(math.fsum(lows)), 0.0)
    high_sum = math.fsum(highs)
    # A zero sum of nonnegative leaf uppers is exact; no outward round.
    upper = _up(high_sum) if high_sum != 0.0 else 0.0
    return IntegralEstimate(
        lower=lower,
        upper=upper,
        boxes_used=boxes_used,
        mode=RIGOROUS,
        exhausted=bool(upper - lower > tol),
    )


_CHUNK = 1 << 19


def integrate_mc(
    f: Integrand,
    region: RegionPredicate,
    box: Box,
    samples: int,
    seed: int,
    workers: int = 1,
) -> IntegralEstimate:
    """Plain Monte Carlo estimate of integral(f over region intersect box).

    Each worker index owns an independent child stream of the seed, and
    its samples are evaluated in fixed-size chunks, so results are
    bit-reproducible for a fixed (samples, seed, workers) triple.
    """
    if samples < 10_000:
        raise ValueError("samples must be at least 10000")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if f.value_many is None:
        raise TypeError("integrand lacks a vectorized value_many, required for Monte Carlo")
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != f.arity or len(box) != region.arity:
        raise ValueError("box, integrand and region dimensions disagree")

    lows = np.array([lo for lo, _ in box])
    his = np.array([hi for _, hi in box])
    volume = float(np.prod(his - lows))
    counts = [samples // workers + (1 if w < samples % workers else 0) for w in range(workers)]

    total = 0.0
    total_sq = 0.0
    hits = 0
    for w, count in enumerate(counts):
        rng = np.random.default_rng(np.random.SeedSequence((seed, w)))
        remaining = count
        while remaining > 0:
            n = min(remaining, _CHUNK)
            remaining -= n
            pts = rng.uniform(lows, his, size=(n, len(box)))
            mask = region.mask(pts)
            vals = np.where(mask, f.value_many(pts), 0.0)
            total += float(vals.sum())
            total_sq += float(np.square(vals).sum())
            hits += int(mask.sum())

    if hits == 0:
        warnings.warn("no Monte Carlo sample hit the region; estimate degenerates to zero")
    mean = total / samples
    variance = max(total_sq / samples - mean * mean, 0.0)
    estimate = volume * mean
    stderr = volume * math.sqrt(variance / samples)
    return IntegralEstimate(
        lower=estimate,
        upper=estimate,
        boxes_used=samples,
        mode=MONTE_CARLO,
        stderr=stderr,
    )
