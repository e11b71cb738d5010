"""The three certified loss integrals and their budget ledger.

Each loss is the volume of sieve mass discarded by one pruning step of
the decomposition, expressed as an exponent-space integral of a
Buchstab-bound kernel over one of the region predicates:

    loss_a3: upper(u) / (t1 t2 t3 t4^2) du, u = (1 - t1 - t2 - t3 - t4)/t4,
             over u_a3;
    loss_b3: upper(u1) upper(u2) / (t2 t3^2 t4^2),
             u1 = (t1 - t4)/t4,  u2 = (1 - t1 - t2 - t3)/t3, over u_b3;
    loss_c:  upper(u) / (t1 t2^2) du, u = (1 - t1 - t2)/t2, over region_c,

where upper is the piecewise upper Buchstab bound.  On each region the
bound argument provably stays inside (1, 2), where upper(u) = 1/u, so
every integrand collapses to a rational function:

    loss_a3: 1 / (t1 t2 t3 t4 (1 - t1 - t2 - t3 - t4)),
    loss_b3: 1 / (t2 t3 t4 (t1 - t4) (1 - t1 - t2 - t3)),
    loss_c:  1 / (t1 t2 (1 - t1 - t2)).

Argument ranges on the regions: for u_a3, t2 + t3 + t4 > 11/19 (the
subset {t2,t3,t4} sums past 9/19 > 8/19 so it must clear the window)
forces 1 - sum < 8/19 - t4 and t4 >= 3/19, hence u < 5/3, while
t4 < (1 - t1 - t2 - t3)/2 gives u > 1.  For u_b3, t4 < t1/2 < 4/19
gives u1 in (1, 5/3), and t3 < (1 - t1 - t2)/2 with the leftover
exponent below 5/19 gives u2 in (1, 5/3).  For region_c,
t2 < (1 - t1)/2 gives u > 1 and t1 + 2 t2 coming within the region
keeps u <= 2.

Both routes are wired as `Integrand`s: the general route goes through
the piecewise bound (with the argument clamped to max(u, 1), a sound
extension used only off-region on mixed boxes), while the reduced
rational route supplies an independent oracle and the curvature data
for mean-value average enclosures.  The certified bounds of the two
routes must agree to within the enclosure tolerance.

Integration domains are pre-clipped bounding boxes of the regions,
derived exactly:

    u_a3 box:     t1 in [11/57, 13/57], t2 in [11/57, 4/19],
                  t3 in [7/38, 4/19],   t4 in [3/19, 4/19]
       (3 t2 > t2 + t3 + t4 > 11/19; t1 > t2; t1 < 8/19 - t2;
        2 t3 > 11/19 - t2 > 7/19; the usual floors elsewhere);
    u_b3 box:     t1 in [7/19, 8/19],   t2 in [3/19, 9/38],
                  t3 in [3/19, 4/19],   t4 in [3/19, 4/19]
       (the windows force t1 + t3 > 11/19 and t3 < 8/19 - t2, so
        11/19 - t1 < 8/19 - t2 with t2 > 11/19 - t1 gives t1 > 7/19;
        t3 < (1 - t1 - t2)/2 < 4/19; t4 < t1/2 < 4/19);
    region_c box: t1 in [11/38, 8/19],  t2 in [9/38, 8/19]
       (2 t1 > t1 + t2 > 11/19).

On these boxes every affine factor above is bounded away from zero
(for example 1 - t1 - t2 - t3 - t4 >= 8/57 on the u_a3 box), so the
interval extensions never divide by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .buchstab import Enclosure, OMEGA_UPPER, _down, _up, omega_bound_range, omega_bound_value
from .quadrature import Integrand, IntegralEstimate, RIGOROUS, integrate_mc, integrate_rigorous
from .regions import Box, REGION_C, REGION_U_A3, REGION_U_B3, RegionPredicate

__all__ = [
    "TARGETS",
    "LOSS_NAMES",
    "LossLedger",
    "integration_domain",
    "loss_a3",
    "loss_b3",
    "loss_c",
    "loss_mc",
    "verified_loss",
    "assemble_ledger",
]

# Externally fixed budget constants each certified upper bound must stay
# below; total is the allowed combined loss and retained the implied
# floor on surviving mass.
TARGETS = {
    "a3": 0.000829,
    "b3": 0.013062,
    "c": 0.235134,
    "total": 0.25,
    "retained": 0.75,
}

LOSS_NAMES = ("a3", "b3", "c")

DEFAULT_BUDGETS = {"a3": 10**7, "b3": 10**7, "c": 10**6}
DEFAULT_TOLS = {"a3": 2e-5, "b3": 5e-5, "c": 5e-7}
MAX_ESCALATIONS = 2

_F = Fraction

_BOXES_EXACT = {
    "a3": ((_F(11, 57), _F(13, 57)), (_F(11, 57), _F(4, 19)), (_F(7, 38), _F(4, 19)), (_F(3, 19), _F(4, 19))),
    "b3": ((_F(7, 19), _F(8, 19)), (_F(3, 19), _F(9, 38)), (_F(3, 19), _F(4, 19)), (_F(3, 19), _F(4, 19))),
    "c": ((_F(11, 38), _F(8, 19)), (_F(9, 38), _F(8, 19))),
}


def _outward_box(exact: tuple[tuple[Fraction, Fraction], ...]) -> Box:
    return tuple((_down(float(lo)), _up(float(hi))) for lo, hi in exact)


_BOXES: dict[str, Box] = {name: _outward_box(b) for name, b in _BOXES_EXACT.items()}
_REGIONS: dict[str, RegionPredicate] = {"a3": REGION_U_A3, "b3": REGION_U_B3, "c": REGION_C}

AffineForm = tuple[float, tuple[float, ...]]


def _affine_enclosure(form: AffineForm, box: Box) -> Enclosure:
    const, coeffs = form
    acc = Enclosure(const)
    for c, (lo, hi) in zip(coeffs, box, strict=True):
        if c:
            acc = acc + Enclosure(lo, hi) * c
    return acc


def _affine_value(form: AffineForm, t) -> float:
    const, coeffs = form
    return const + sum(c * ti for c, ti in zip(coeffs, t) if c)


def _affine_many(form: AffineForm, pts: np.ndarray) -> np.ndarray:
    const, coeffs = form
    return const + pts @ np.array(coeffs)


@dataclass(frozen=True)
class ReciprocalProduct:
    """f(t) = 1 / prod_k L_k(t) with affine factors L_k positive on the box.

    Supplies the certified interval extension and a mean-value average
    enclosure.  With f = exp(-sum log L_k) the partials are
    d_i f = -f S_i and d_j d_i f = f (S_i S_j + Q_ij) for
    S_i = sum_k a_ki / L_k and Q_ij = sum_k a_ki a_kj / L_k^2, so an
    interval Hessian bound M_ij over the box yields

        |avg - f(centre)| <= sum_i M_ii r_i^2 / 6
                             + sum_{i<j} M_ij r_i r_j / 4

    with r the box half-widths, from E[d_i^2] = r_i^2/3 and
    E|d_i| = r_i/2 for the uniform deviation from the centre.
    """

    factors: tuple[AffineForm, ...]

    def intervals(self, box: Box) -> list[Enclosure]:
        out = []
        for form in self.factors:
            enc = _affine_enclosure(form, box)
            if enc.lo <= 0.0:
                raise ValueError("affine factor not positive over the box")
            out.append(enc)
        return out

    def enclosure(self, box: Box) -> Enclosure:
        prod = Enclosure(1.0)
        for enc in self.intervals(box):
            prod = prod * enc
        return 1.0 / prod

    def value(self, t) -> float:
        prod = 1.0
        for form in self.factors:
            prod *= _affine_value(form, t)
        return 1.0 / prod

    def value_many(self, pts: np.ndarray) -> np.ndarray:
        prod = np.ones(len(pts))
        for form in self.factors:
            prod *= _affine_many(form, pts)
        return 1.0 / prod

    def average(self, box: Box) -> Enclosure:
        dims = len(box)
        ls = self.intervals(box)
        f_box = Enclosure(1.0)
        for enc in ls:
            f_box = f_box * enc
        f_box = 1.0 / f_box
        centre = tuple((lo + hi) * 0.5 for lo, hi in box)
        fc = Enclosure(1.0)
        for form in self.factors:
            fc = fc * Enclosure(_affine_value(form, centre))
        fc = 1.0 / fc

        s = []
        for i in range(dims):
            acc = Enclosure(0.0)
            for form, enc in zip(self.factors, ls):
                a = form[1][i]
                if a:
                    acc = acc + a / enc
            s.append(acc)
        radii = [(hi - lo) * 0.5 for lo, hi in box]
        remainder = 0.0
        for i in range(dims):
            for j in range(i, dims):
                q = Enclosure(0.0)
                for form, enc in zip(self.factors, ls):
                    ai, aj = form[1][i], form[1][j]
                    if ai and aj:
                        q = q + (ai * aj) / (enc * enc)
                h = f_box * (s[i] * s[j] + q)
                m = max(abs(h.lo), abs(h.hi))
                if i == j:
                    remainder += m * radii[i] * radii[i] / 6.0
                else:
                    remainder += m * radii[i] * radii[j] / 4.0
        remainder = _up(_up(remainder))
        return fc.widen(remainder)


def _clamped_ratio(num: AffineForm, den: AffineForm, box: Box) -> Enclosure:
    """Enclosure of max(num/den, 1) over the box; den must be positive."""
    ratio = _affine_enclosure(num, box) / _affine_enclosure(den, box)
    return Enclosure(max(ratio.lo, 1.0), max(ratio.hi, 1.0))


_UNIT = {
    0: (0.0, (1.0, 0.0, 0.0, 0.0)),
    1: (0.0, (0.0, 1.0, 0.0, 0.0)),
    2: (0.0, (0.0, 0.0, 1.0, 0.0)),
    3: (0.0, (0.0, 0.0, 0.0, 1.0)),
}


def _build_a3() -> tuple[Integrand, Integrand]:
    reduced_rp = ReciprocalProduct(
        (
            _UNIT[0],
            _UNIT[1],
            _UNIT[2],
            _UNIT[3],
            (1.0, (-1.0, -1.0, -1.0, -1.0)),
        )
    )
    denom = ReciprocalProduct((_UNIT[0], _UNIT[1], _UNIT[2], _UNIT[3], _UNIT[3]))
    num_form = (1.0, (-1.0, -1.0, -1.0, -1.0))
    den_form = _UNIT[3]

    def value(t) -> float:
        u = max(_affine_value(num_form, t) / t[3], 1.0)
        return omega_bound_value(OMEGA_UPPER, u) * denom.value(t)

    def value_many(pts: np.ndarray) -> np.ndarray:
        u = np.maximum(_affine_many(num_form, pts) / pts[:, 3], 1.0)
        return (1.0 / u) * denom.value_many(pts)

    def enclosure(box: Box) -> Enclosure:
        om = omega_bound_range(OMEGA_UPPER, _clamped_ratio(num_form, den_form, box))
        return om * denom.enclosure(box)

    general = Integrand(4, value, enclosure, value_many, reduced_rp.average)
    reduced = Integrand(4, reduced_rp.value, reduced_rp.enclosure, reduced_rp.value_many, reduced_rp.average)
    return general, reduced


def _build_b3() -> tuple[Integrand, Integrand]:
    t1_minus_t4 = (0.0, (1.0, 0.0, 0.0, -1.0))
    leftover = (1.0, (-1.0, -1.0, -1.0, 0.0))
    reduced_rp = ReciprocalProduct((_UNIT[1], _UNIT[2], _UNIT[3], t1_minus_t4, leftover))
    denom = ReciprocalProduct((_UNIT[1], _UNIT[2], _UNIT[2], _UNIT[3], _UNIT[3]))

    def value(t) -> float:
        u1 = max((t[0] - t[3]) / t[3], 1.0)
        u2 = max((1.0 - t[0] - t[1] - t[2]) / t[2], 1.0)
        om = omega_bound_value(OMEGA_UPPER, u1) * omega_bound_value(OMEGA_UPPER, u2)
        return om * denom.value(t)

    def value_many(pts: np.ndarray) -> np.ndarray:
        u1 = np.maximum((pts[:, 0] - pts[:, 3]) / pts[:, 3], 1.0)
        u2 = np.maximum((1.0 - pts[:, 0] - pts[:, 1] - pts[:, 2]) / pts[:, 2], 1.0)
        return (1.0 / u1) * (1.0 / u2) * denom.value_many(pts)

    def enclosure(box: Box) -> Enclosure:
        om1 = omega_bound_range(OMEGA_UPPER, _clamped_ratio(t1_minus_t4, _UNIT[3], box))
        om2 = omega_bound_range(OMEGA_UPPER, _clamped_ratio(leftover, _UNIT[2], box))
        return om1 * om2 * denom.enclosure(box)

    general = Integrand(4, value, enclosure, value_many, reduced_rp.average)
    reduced = Integrand(4, reduced_rp.value, reduced_rp.enclosure, reduced_rp.value_many, reduced_rp.average)
    return general, reduced


def _build_c() -> tuple[Integrand, Integrand]:
    unit0 = (0.0, (1.0, 0.0))
    unit1 = (0.0, (0.0, 1.0))
    rest = (1.0, (-1.0, -1.0))
    reduced_rp = ReciprocalProduct((unit0, unit1, rest))
    denom = ReciprocalProduct((unit0, unit1, unit1))

    def value(t) -> float:
        u = max((1.0 - t[0] - t[1]) / t[1], 1.0)
        return omega_bound_value(OMEGA_UPPER, u) * denom.value(t)

    def value_many(pts: np.ndarray) -> np.ndarray:
        u = np.maximum((1.0 - pts[:, 0] - pts[:, 1]) / pts[:, 1], 1.0)
        return (1.0 / u) * denom.value_many(pts)

    def enclosure(box: Box) -> Enclosure:
        om = omega_bound_range(OMEGA_UPPER, _clamped_ratio(rest, unit1, box))
        return om * denom.enclosure(box)

    general = Integrand(2, value, enclosure, value_many, reduced_rp.average)
    reduced = Integrand(2, reduced_rp.value, reduced_rp.enclosure, reduced_rp.value_many, reduced_rp.average)
    return general, reduced


_INTEGRANDS = {"a3": _build_a3(), "b3": _build_b3(), "c": _build_c()}


def integration_domain(name: str) -> tuple[Integrand, Integrand, RegionPredicate, Box]:
    """(general integrand, reduced oracle integrand, region, bounding box) for a loss."""
    if name not in LOSS_NAMES:
        raise ValueError(f"unknown loss {name!r}; expected one of {LOSS_NAMES}")
    general, reduced = _INTEGRANDS[name]
    return general, reduced, _REGIONS[name], _BOXES[name]


def _run(name: str, budget: int, tol: float, reduced: bool) -> IntegralEstimate:
    general, oracle, region, box = integration_domain(name)
    return integrate_rigorous(oracle if reduced else general, region, box, budget=budget, tol=tol)


def loss_a3(budget: int = DEFAULT_BUDGETS["a3"], tol: float = DEFAULT_TOLS["a3"], reduced: bool = False) -> IntegralEstimate:
    """Certified sandwich for the first discard integral (four variables)."""
    return _run("a3", budget, tol, reduced)


def loss_b3(budget: int = DEFAULT_BUDGETS["b3"], tol: float = DEFAULT_TOLS["b3"], reduced: bool = False) -> IntegralEstimate:
    """Certified sandwich for the reversed-roles discard integral (four variables)."""
    return _run("b3", budget, tol, reduced)


def loss_c(budget: int = DEFAULT_BUDGETS["c"], tol: float = DEFAULT_TOLS["c"], reduced: bool = False) -> IntegralEstimate:
    """Certified sandwich for the dominant two-variable discard integral."""
    return _run("c", budget, tol, reduced)


_LOSS_FUNCS = {"a3": loss_a3, "b3": loss_b3, "c": loss_c}


def loss_mc(name: str, samples: int = 10**7, seed: int = 20240801, workers: int = 1) -> IntegralEstimate:
    """Monte Carlo cross-check of a loss integral (uncertified)."""
    general, _, region, box = integration_domain(name)
    return integrate_mc(general, region, box, samples=samples, seed=seed, workers=workers)


def verified_loss(name: str, budget: int | None = None, tol: float | None = None) -> tuple[IntegralEstimate, int]:
    """Run a loss and escalate the box budget until its target certifies.

    If the certified upper bound exceeds the target the budget is
    multiplied by ten and the run repeated, at most twice.  Returns the
    final estimate and the number of escalations used.
    """
    if name not in LOSS_NAMES:
        raise ValueError(f"unknown loss {name!r}; expected one of {LOSS_NAMES}")
    budget = DEFAULT_BUDGETS[name] if budget is None else budget
    tol = DEFAULT_TOLS[name] if tol is None else tol
    escalations = 0
    est = _LOSS_FUNCS[name](budget=budget, tol=tol)
    while est.upper > TARGETS[name] and escalations < MAX_ESCALATIONS:
        escalations += 1
        budget *= 10
        est = _LOSS_FUNCS[name](budget=budget, tol=tol)
    return est, escalations


@dataclass(frozen=True)
class LossLedger:
    """Combined certified budget: three sandwiches and their implied totals."""

    loss_a3: IntegralEstimate
    loss_b3: IntegralEstimate
    loss_c: IntegralEstimate
    total_upper: float
    retained_lower: float
    targets: dict

    def margins(self) -> dict[str, float]:
        return {
            "a3": self.targets["a3"] - self.loss_a3.upper,
            "b3": self.targets["b3"] - self.loss_b3.upper,
            "c": self.targets["c"] - self.loss_c.upper,
            "total": self.targets["total"] - self.total_upper,
            "retained": self.retained_lower - self.targets["retained"],
        }

    def all_within(self) -> bool:
        return all(m >= 0.0 for m in self.margins().values())


def assemble_ledger(a3: IntegralEstimate, b3: IntegralEstimate, c: IntegralEstimate) -> LossLedger:
    """Combine three certified loss sandwiches into the total budget.

    Refuses Monte Carlo inputs: the ledger is only meaningful when every
    term carries a certified upper bound.
    """
    for name, est in (("a3", a3), ("b3", b3), ("c", c)):
        if est.mode != RIGOROUS:
            raise ValueError(f"ledger requires rigorous estimates, got {est.mode} for {name}")
    total_upper = _up(_up(a3.upper + b3.upper) + c.upper)
    retained_lower = _down(1.0 - total_upper)
    return LossLedger(
        loss_a3=a3,
        loss_b3=b3,
        loss_c=c,
        total_upper=total_upper,
        retained_lower=retained_lower,
        targets=dict(TARGETS),
    )
