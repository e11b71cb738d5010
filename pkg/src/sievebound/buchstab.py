"""Certified enclosures for the Buchstab function and its piecewise bounds.

The Buchstab function omega is the continuous solution of

    omega(u) = 1/u                      for 1 <= u <= 2,
    (u * omega(u))' = omega(u - 1)      for u >= 2.

Everything in this module computes with closed floating-point intervals
(`Enclosure`) whose endpoints are rounded outward after every operation,
so each returned interval is guaranteed to contain the exact real value.

Closed forms used as independent anchors:

    omega(u) = (1 + log(u - 1)) / u                       on [2, 3],
    omega(u) = (1 + log(u - 1)) / u + J(u) / u            on [3, 4],
        where J(u) = integral of log(t - 1) / t over [2, u - 1].

The second form follows from integrating (u omega)' = omega(u - 1) with
omega(u - 1) = (1 + log(u - 2)) / (u - 1) and substituting t = s - 1.

The piecewise bounds `OMEGA_LOWER` and `OMEGA_UPPER` agree with omega on
[1, 3), equal the closed form on [3, 4) (sanity-clamped to
[0.5607, 0.5644]), and flatten to the constants 0.5612 and 0.5617 for
u >= 4, bracketing the asymptotic value exp(-euler_gamma) = 0.56145...
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Enclosure",
    "log_enc",
    "PiecewiseBound",
    "OMEGA_LOWER",
    "OMEGA_UPPER",
    "BuchstabTable",
    "build_table",
    "omega_enclosure",
    "log_integral_term",
    "branch_expression_range",
    "omega_bound",
    "omega_bound_range",
    "omega_bound_value",
    "dump_table_csv",
]

# Sanity window for the closed-form branch on [3, 4) and plateau constants
# bracketing omega(u) for u >= 4.
BRANCH_FLOOR = 0.5607
BRANCH_CEILING = 0.5644
PLATEAU_LOWER = 0.5612
PLATEAU_UPPER = 0.5617

# Bound on |d/dt (log(t-1)/t)''| over [2, 3] and on |omega''| everywhere
# past u = 1, used in trapezoid error terms.  On [1, 2], omega'' = 2/u**3
# with maximum 2 at u = 1.  On [2, 3], differentiating
# omega'(u) = (omega(u-1) - omega(u))/u termwise and using |omega'| <= 1,
# |omega| <= 1 gives |omega''| <= (1 + 1)/2 + 0.66/4 < 2; further branches
# only shrink.  For g(t) = log(t-1)/t on [2, 3],
# g'' = -(2t-1)/(t**2 (t-1)**2) - 1/((t-1) t**2) + 2 log(t-1)/t**3, whose
# magnitude peaks at t = 2 with value 1.
SECOND_DERIVATIVE_BOUND = 2.0

# Global Lipschitz constant for omega on [1, u_max]: |omega'| = 1/u**2 <= 1
# on [1, 2], and |omega'(u)| = |omega(u-1) - omega(u)|/u <= 0.17/2 < 1 past 2.
LIPSCHITZ_BOUND = 1.0


def _down(v: float) -> float:
    return math.nextafter(v, -math.inf)


def _up(v: float) -> float:
    return math.nextafter(v, math.inf)


@dataclass(frozen=True, slots=True)
class Enclosure:
    """Closed interval [lo, hi] with outward-rounded arithmetic.

    Every operator rounds the computed endpoints one ulp outward, so for
    finite inputs the result interval contains the exact real-number
    image of the operand intervals (inclusion isotonicity).
    """

    lo: float
    hi: float = math.nan

    def __post_init__(self) -> None:
        if math.isnan(self.hi):
            object.__setattr__(self, "hi", self.lo)
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("enclosure endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def encloses(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Enclosure") -> "Enclosure":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError(f"disjoint enclosures [{self.lo},{self.hi}] and [{other.lo},{other.hi}]")
        return Enclosure(lo, hi)

    def widen(self, pad: float) -> "Enclosure":
        if pad < 0:
            raise ValueError("pad must be nonnegative")
        return Enclosure(_down(self.lo - pad), _up(self.hi + pad))

    @staticmethod
    def _coerce(value) -> "Enclosure":
        if isinstance(value, Enclosure):
            return value
        return Enclosure(float(value), float(value))

    def __add__(self, other) -> "Enclosure":
        o = Enclosure._coerce(other)
        return Enclosure(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other) -> "Enclosure":
        o = Enclosure._coerce(other)
        return Enclosure(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Enclosure":
        return Enclosure._coerce(other) - self

    def __mul__(self, other) -> "Enclosure":
        o = Enclosure._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        o = Enclosure._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("division by an enclosure containing zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Enclosure(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other) -> "Enclosure":
        return Enclosure._coerce(other) / self


def log_enc(x: Enclosure) -> Enclosure:
    """Enclosure of log over a positive interval.

    math.log is not directed-rounded, so beyond the monotone endpoint
    evaluation the result is widened by four ulps plus a 1e-14 relative
    allowance, far above the worst observed libm error.
    """
    if x.lo <= 0.0:
        raise ValueError("log requires a strictly positive enclosure")
    lo = math.log(x.lo)
    hi = math.log(x.hi)
    lo -= abs(lo) * 1e-14
    hi += abs(hi) * 1e-14
    for _ in range(4):
        lo = _down(lo)
        hi = _up(hi)
    return Enclosure(lo, hi)


def _ratio_enclosure(num: int, den: int) -> Enclosure:
    """Enclosure of the exact rational num/den from one correctly rounded division."""
    q = num / den
    return Enclosure(_down(q), _up(q))


def _recip_decreasing(u: Enclosure) -> Enclosure:
    """Tight enclosure of 1/u for positive u, using monotonicity."""
    return Enclosure(_down(1.0 / u.hi), _up(1.0 / u.lo))


def _expr_23(u: Enclosure) -> Enclosure:
    """Interval evaluation of (1 + log(u - 1)) / u, the closed form on [2, 3]."""
    return (1.0 + log_enc(u - 1.0)) / u


def _log_integral_raw(u: float, panels: int = 8192) -> Enclosure:
    """Enclosure of J(u) = integral of log(t - 1)/t over [2, u - 1], 3 <= u <= 4.

    Composite trapezoid on `panels` panels evaluated in interval
    arithmetic, widened by the standard error bound
    (b - a) * h^2 / 12 * max|g''| with max|g''| <= 2 on [2, 3].
    """
    if not 3.0 <= u <= 4.0:
        raise ValueError("log integral is defined for u in [3, 4]")
    width = Enclosure(u) - 3.0
    if width.hi <= 0.0:
        return Enclosure(0.0)
    h = width / panels
    total = Enclosure(0.0)
    g_prev = Enclosure(0.0)  # g(2) = log(1)/2 = 0
    t = Enclosure(2.0)
    for i in range(1, panels + 1):
        t = 2.0 + h * i
        g_curr = log_enc(t - 1.0) / t
        total = total + (g_prev + g_curr)
        g_prev = g_curr
    integral = total * h * 0.5
    pad = _up(_up(width.hi ** 3) * SECOND_DERIVATIVE_BOUND / (12.0 * panels * panels))
    return integral.widen(pad)


def log_integral_term(u: float) -> Enclosure:
    """Enclosure of J(u)/u, the integral correction in the closed form on [3, 4]."""
    return _log_integral_raw(u) / Enclosure(u)


@dataclass(frozen=True, slots=True)
class PiecewiseBound:
    """One side of the certified bracket around the Buchstab function.

    kind is "lower" or "upper"; plateau is the constant used for u >= 4.
    Both sides share the closed forms on [1, 4), so they coincide there.
    """

    kind: str
    plateau: float


OMEGA_LOWER = PiecewiseBound("lower", PLATEAU_LOWER)
OMEGA_UPPER = PiecewiseBound("upper", PLATEAU_UPPER)


def omega_bound_range(bound: PiecewiseBound, u: Enclosure) -> Enclosure:
    """Enclosure of {bound(t) : t in u}, for u inside [1, +inf).

    The interval is split at the branch knots 2, 3 and 4; each piece is
    evaluated with interval arithmetic and the pieces are hulled.  The
    [3, 4) piece is intersected with the sanity window
    [0.5607, 0.5644], which provably contains the closed form there.
    """
    if u.lo < 1.0:
        raise ValueError("piecewise bounds are defined for u >= 1")
    pieces: list[Enclosure] = []
    if u.lo < 2.0:
        pieces.append(_recip_decreasing(Enclosure(u.lo, min(u.hi, 2.0))))
    # The closed forms agree at the knots, so each right-hand branch is
    # taken closed on the left; degenerate knot inputs stay covered.
    if u.hi >= 2.0 and u.lo < 3.0:
        pieces.append(_expr_23(Enclosure(max(u.lo, 2.0), min(u.hi, 3.0))))
    if u.hi >= 3.0 and u.lo < 4.0:
        a = max(u.lo, 3.0)
        b = min(u.hi, 4.0)
        seg = Enclosure(a, b)
        # J is nondecreasing (its integrand is nonnegative on [2, 3]).
        j_range = Enclosure(_log_integral_raw(a).lo, _log_integral_raw(b).hi)
        piece = _expr_23(seg) + j_range / seg
        pieces.append(piece.intersect(Enclosure(BRANCH_FLOOR, BRANCH_CEILING)))
    if u.hi >= 4.0:
        pieces.append(Enclosure(bound.plateau))
    out = pieces[0]
    for piece in pieces[1:]:
        out = out.hull(piece)
    return out


def omega_bound(bound: PiecewiseBound, u: float) -> Enclosure:
    """Enclosure of the bound evaluated at the single point u."""
    return omega_bound_range(bound, Enclosure(u))


def omega_bound_value(bound: PiecewiseBound, u: float) -> float:
    """Fast float evaluation of the bound, for Monte Carlo sampling.

    Not directed-rounded.  The [3, 4) integral term uses a fixed
    composite Simpson rule whose error is far below 1e-10.
    """
    if u < 1.0:
        raise ValueError("piecewise bounds are defined for u >= 1")
    if u <= 2.0:
        return 1.0 / u
    if u < 3.0:
        return (1.0 + math.log(u - 1.0)) / u
    if u < 4.0:
        n = 128
        h = (u - 3.0) / n
        acc = 0.0  # g(2) = 0
        for i in range(1, n):
            t = 2.0 + i * h
            acc += (4.0 if i % 2 else 2.0) * math.log(t - 1.0) / t
        t_end = u - 1.0
        acc += math.log(t_end - 1.0) / t_end
        j = acc * h / 3.0
        return (1.0 + math.log(u - 1.0) + j) / u
    return bound.plateau


def branch_expression_range(step: float = 2e-4) -> Enclosure:
    """Certified range of the closed-form branch over [3, 4].

    Walks a uniform grid of the given step, carrying a cumulative
    trapezoid enclosure of J along the grid (per-segment error
    h^3/12 * max|g''|), and fills the gaps between grid points with the
    derivative bound |d/du omega(u)| <= 0.022 on [3, 4]: there
    omega'(u) = (omega(u-1) - omega(u))/u with omega(u-1) in [0.5, 0.5644],
    omega(u) in [0.5607, 0.5644] and u >= 3, so |omega'| <= 0.0644/3.
    """
    if not 0.0 < step <= 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    m = round(1.0 / step)
    if abs(m * step - 1.0) > 1e-9:
        raise ValueError("step must divide 1 to float precision")
    h = _ratio_enclosure(1, m)
    seg_pad = _up(_up(h.hi ** 3) * SECOND_DERIVATIVE_BOUND / 12.0)
    j_acc = Enclosure(0.0)
    lo_min = math.inf
    hi_max = -math.inf
    g_prev = Enclosure(0.0)  # g at t = 2
    for k in range(m + 1):
        u_k = _ratio_enclosure(3 * m + k, m)
        if k > 0:
            t_k = u_k - 1.0
            g_curr = log_enc(t_k - 1.0) / t_k
            j_acc = (j_acc + (g_prev + g_curr) * h * 0.5).widen(seg_pad)
            g_prev = g_curr
        expr = _expr_23(u_k) + j_acc / u_k
        lo_min = min(lo_min, expr.lo)
        hi_max = max(hi_max, expr.hi)
    fill = _up(0.022 * step * 0.5)
    return Enclosure(_down(lo_min - fill), _up(hi_max + fill))


@dataclass(frozen=True, slots=True)
class BuchstabTable:
    """Certified table of omega on the rational grid u_k = 1 + k/grid_den.

    values[k] encloses omega(1 + k/grid_den); the final index corresponds
    to u_max.  max_width is the largest enclosure width in the table.
    """

    u_max: float
    grid_den: int
    tol: float
    values: tuple[Enclosure, ...]
    max_width: float

    @property
    def step(self) -> float:
        return 1.0 / self.grid_den


def build_table(u_max: float = 8.0, step: float = 1e-4, tol: float = 5e-8) -> BuchstabTable:
    """Solve the delay recurrence on a uniform grid with certified error.

    The grid is u_k = 1 + k/m with m = round(1/step), so the unit delay
    in (u omega)' = omega(u - 1) aligns exactly with the grid.  For
    k <= m the closed form omega = 1/u seeds the table.  Past that, the
    integral form

        u_{k+1} omega(u_{k+1}) = u_k omega(u_k)
                                 + integral of omega(s - 1) over [u_k, u_{k+1}]

    is advanced with a trapezoid step on the delayed enclosures, widened
    by the trapezoid error bound h^3/12 * max|omega''| <= h^3/6 per step.
    Raises ValueError if any enclosure width exceeds tol.
    """
    if not 0.0 < step <= 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    if not 2.0 <= u_max <= 64.0:
        raise ValueError("u_max must lie in [2, 64]")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    m = round(1.0 / step)
    if abs(m * step - 1.0) > 1e-9:
        raise ValueError("step must divide 1 to float precision")
    span = (u_max - 1.0) * m
    last = round(span)
    if abs(span - last) > 1e-6:
        raise ValueError("u_max - 1 must be a multiple of step")

    h = _ratio_enclosure(1, m)
    step_pad = _up(_up(h.hi ** 3) * SECOND_DERIVATIVE_BOUND / 12.0)
    grid = [_ratio_enclosure(m + k, m) for k in range(last + 1)]
    values: list[Enclosure] = [_recip_decreasing(grid[k]) for k in range(min(m, last) + 1)]
    for k in range(m, last):
        delayed = (values[k - m] + values[k - m + 1]) * h * 0.5
        increment = delayed.widen(step_pad)
        values.append((values[k] * grid[k] + increment) / grid[k + 1])
    max_width = max(v.width for v in values)
    if max_width > tol:
        raise ValueError(f"table width {max_width:.3e} exceeds tol {tol:.3e}; shrink step")
    return BuchstabTable(u_max=float(u_max), grid_den=m, tol=tol, values=tuple(values), max_width=max_width)


def omega_enclosure(table: BuchstabTable, u: float) -> Enclosure:
    """Enclosure of omega(u) for arbitrary u in [1, u_max].

    For each of the two neighbouring grid points, omega(u) lies within
    that grid enclosure widened by the Lipschitz bound times the exact
    distance from u to the grid point (distances computed in rational
    arithmetic, so index rounding cannot leak).  The two enclosures are
    intersected; at a grid point this collapses to the table entry.
    """
    if not 1.0 <= u <= table.u_max:
        raise ValueError(f"u = {u} outside table domain [1, {table.u_max}]")
    m = table.grid_den
    last = len(table.values) - 1
    scaled = Fraction(u) * m
    k = min(max(int(scaled) - m, 0), last - 1)
    out = None
    for idx in (k, k + 1):
        dist = abs(scaled - (m + idx)) / m
        pad = _up(float(dist) * LIPSCHITZ_BOUND)
        candidate = table.values[idx].widen(pad)
        out = candidate if out is None else out.intersect(candidate)
    return out


def dump_table_csv(table: BuchstabTable, path: str) -> int:
    """Write the table as rows (u, lo, hi) and return the row count."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "lo", "hi"])
        for k, enc in enumerate(table.values):
            writer.writerow([repr((table.grid_den + k) / table.grid_den), repr(enc.lo), repr(enc.hi)])
    return len(table.values)
