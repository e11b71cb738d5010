"""Tests for the three loss integrals and the budget ledger.

Oracles:

  * The planar loss reduces, on its region, to the rational form
    1/(t1 t2 (1 - t1 - t2)) because the Buchstab argument stays below 2
    there, where the upper bound equals 1/u exactly.  The inner t1
    integral has the closed antiderivative
    log(t1 / (1 - t2 - t1)) / ((1 - t2) t2), which leaves a smooth
    one-dimensional integrand for composite Simpson in t2.  The outer
    limits split at t2 = 11/38 where both the lower limit switch
    (max(t2, 11/19 - t2)) and the upper limit switch
    (min(8/19, 1 - 2 t2)) happen simultaneously; the region empties at
    t2 = 1/3.

  * 0.23513302634810698, 8.934900411446318e-05 and
    0.0004467450149420221 are frozen high-precision values of the three
    integrals obtained from independent adaptive refinement runs driven
    far past the certified tolerances; they act as regression anchors
    and must lie inside every certified sandwich.
"""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from sievebound import losses
from sievebound.quadrature import MONTE_CARLO, RIGOROUS, IntegralEstimate

FROZEN = {
    "a3": 8.934900411446318e-05,
    "b3": 0.0004467450149420221,
    "c": 0.23513302634810698,
}


def planar_oracle(panels: int = 4096) -> float:
    """Composite Simpson over the closed-form inner integral."""

    def inner(t2: float) -> float:
        lo = max(t2, 11.0 / 19.0 - t2)
        hi = min(8.0 / 19.0, 1.0 - 2.0 * t2)
        if lo >= hi:
            return 0.0
        c = 1.0 - t2

        def anti(t1: float) -> float:
            return math.log(t1 / (c - t1)) / (c * t2)

        return anti(hi) - anti(lo)

    total = 0.0
    for a, b in ((9.0 / 38.0, 11.0 / 38.0), (11.0 / 38.0, 1.0 / 3.0)):
        h = (b - a) / panels
        acc = inner(a) + inner(b)
        for i in range(1, panels):
            acc += (4.0 if i % 2 else 2.0) * inner(a + i * h)
        total += acc * h / 3.0
    return total


class TestOracles:
    def test_planar_oracle_matches_frozen(self):
        """The Simpson oracle reproduces the frozen planar value to 1e-9."""
        assert abs(planar_oracle() - FROZEN["c"]) <= 1e-9

    def test_general_equals_reduced_at_members(self):
        """Both integrand routes agree pointwise inside each region."""
        for name, point in (
            ("a3", (0.21, 0.205, 0.195, 0.185)),
            ("b3", (0.40, 0.20, 0.19, 0.195)),
            ("c", (0.35, 0.25)),
        ):
            general, reduced, region, box = losses.integration_domain(name)
            assert region.contains(point)
            gv = general.value(point)
            rv = reduced.value(point)
            assert gv == pytest.approx(rv, rel=1e-12)
            assert gv > 0.0

    def test_boxes_cover_regions(self):
        """No region mass may leak outside the pre-clipped boxes."""
        import numpy as np

        rng = np.random.default_rng(20240801)
        for name in losses.LOSS_NAMES:
            _, _, region, box = losses.integration_domain(name)
            pts = rng.uniform(0.0, 0.75, size=(200000, region.arity))
            inside = region.mask(pts)
            lows = np.array([lo for lo, _ in box]) - 1e-12
            his = np.array([hi for _, hi in box]) + 1e-12
            in_box = ((pts >= lows) & (pts <= his)).all(axis=1)
            assert not (inside & ~in_box).any()


class TestCertifiedRuns:
    def test_coarse_sandwiches_contain_frozen(self):
        """Cheap rigorous runs bracket the frozen references."""
        for name, budget, tol in (("a3", 4000, 1e-3), ("b3", 8000, 1e-2), ("c", 4000, 1e-3)):
            general, reduced, region, box = losses.integration_domain(name)
            est = losses._run(name, budget=budget, tol=tol, reduced=False)
            assert est.mode == RIGOROUS
            assert est.lower <= FROZEN[name] <= est.upper

    def test_dual_route_sandwiches_overlap(self):
        """General and reduced evaluators certify the same integral.

        Two correct enclosures of one number must intersect, and both
        must contain the frozen reference.
        """
        for name in losses.LOSS_NAMES:
            a = losses._run(name, budget=3000, tol=1e-9, reduced=False)
            b = losses._run(name, budget=3000, tol=1e-9, reduced=True)
            assert max(a.lower, b.lower) <= min(a.upper, b.upper)
            assert a.lower <= FROZEN[name] <= a.upper
            assert b.lower <= FROZEN[name] <= b.upper

    def test_default_runs_meet_targets(self, verified_a3, verified_b3, verified_c):
        for (est, _), name in (
            (verified_a3, "a3"),
            (verified_b3, "b3"),
            (verified_c, "c"),
        ):
            assert est.upper <= losses.TARGETS[name]
            assert est.lower <= FROZEN[name] <= est.upper
            assert est.boxes_used <= losses.DEFAULT_BUDGETS[name]

    def test_c_width_requirement(self, verified_c):
        est, escalations = verified_c
        assert est.upper - est.lower <= 5e-5
        assert est.lower > 0.2
        assert escalations == 0

    def test_determinism(self):
        a = losses.loss_a3(budget=2000, tol=1e-9)
        b = losses.loss_a3(budget=2000, tol=1e-9)
        assert (a.lower, a.upper, a.boxes_used) == (b.lower, b.upper, b.boxes_used)


class TestVerifiedLoss:
    def test_escalation_path(self):
        """An undersized budget escalates tenfold until the target holds."""
        est, escalations = losses.verified_loss("a3", budget=3, tol=1e-9)
        assert escalations == 1
        assert est.upper <= losses.TARGETS["a3"]
        assert est.lower <= FROZEN["a3"] <= est.upper
        est, escalations = losses.verified_loss("a3", budget=1, tol=1e-9)
        assert escalations == 2

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            losses.verified_loss("nope")


class TestLedger:
    def test_target_sum_is_under_budget(self):
        total = sum(losses.TARGETS[name] for name in losses.LOSS_NAMES)
        assert total == pytest.approx(0.249025, abs=1e-12)
        assert total < losses.TARGETS["total"]

    def test_ledger_combines(self, ledger):
        assert ledger.total_upper < losses.TARGETS["total"]
        assert ledger.retained_lower > losses.TARGETS["retained"]
        assert ledger.all_within()
        margins = ledger.margins()
        assert set(margins) >= {"a3", "b3", "c", "total"}
        assert all(m > 0 for m in margins.values())

    def test_ledger_refuses_monte_carlo(self):
        fake = IntegralEstimate(
            lower=1e-5, upper=1e-5, boxes_used=100000, mode=MONTE_CARLO, stderr=1e-7
        )
        rig = IntegralEstimate(lower=1e-5, upper=2e-5, boxes_used=10, mode=RIGOROUS)
        with pytest.raises(ValueError):
            losses.assemble_ledger(fake, rig, rig)


class TestMonteCarlo:
    def test_mc_agrees_with_frozen(self):
        for name in losses.LOSS_NAMES:
            est = losses.loss_mc(name, samples=10**6, seed=20240801)
            se = max(est.stderr, 1e-12)
            assert abs(est.lower - FROZEN[name]) <= 6 * se

    def test_mc_sandwich(self, verified_a3, verified_b3, verified_c, mc_estimates):
        for (est, _), name in (
            (verified_a3, "a3"),
            (verified_b3, "b3"),
            (verified_c, "c"),
        ):
            mc = mc_estimates[name]
            assert est.lower - 4 * mc.stderr <= mc.lower <= est.upper + 4 * mc.stderr
