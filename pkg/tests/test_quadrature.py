"""Tests for the certified integrator and the Monte Carlo estimator.

Closed-form oracles over the unit square with the halfspace region
t1 + t2 <= 1/2:

  * area = 1/8;
  * int t1 dA = int_0^{1/2} t1 (1/2 - t1) dt1 = 1/48.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

import numpy as np
import pytest

from sievebound.buchstab import Enclosure
from sievebound.quadrature import (
    Integrand,
    MONTE_CARLO,
    RIGOROUS,
    integrate_mc,
    integrate_rigorous,
)
from sievebound.regions import AndNode, LinearConstraint, RegionPredicate


def halfspace_region() -> RegionPredicate:
    tree = AndNode((LinearConstraint((1, 1), "<=", Fraction(1, 2)),))
    return RegionPredicate("half", 2, tree)


def constant_one() -> Integrand:
    return Integrand(
        arity=2,
        value=lambda t: 1.0,
        enclosure=lambda box: Enclosure(1.0),
        value_many=lambda pts: np.ones(len(pts)),
    )


def linear_t1() -> Integrand:
    return Integrand(
        arity=2,
        value=lambda t: t[0],
        enclosure=lambda box: Enclosure(box[0][0], box[0][1]),
        value_many=lambda pts: pts[:, 0].copy(),
    )


UNIT_SQUARE = ((0.0, 1.0), (0.0, 1.0))


class TestRigorous:
    def test_area_of_triangle(self):
        est = integrate_rigorous(constant_one(), halfspace_region(), UNIT_SQUARE, tol=1e-6)
        assert est.mode == RIGOROUS
        assert est.lower <= 0.125 <= est.upper
        assert est.upper - est.lower <= 1e-6
        assert not est.exhausted

    def test_first_moment(self):
        est = integrate_rigorous(linear_t1(), halfspace_region(), UNIT_SQUARE, tol=1e-4)
        exact = 1.0 / 48.0
        assert est.lower <= exact <= est.upper
        assert est.upper - est.lower <= 1e-4
        assert not est.exhausted

    def test_budget_monotone_bounds(self):
        """More budget never loosens the certified sandwich.

        Each refinement replaces one box by its two halves; interval
        arithmetic is inclusion isotone, so the certified upper bound is
        non-increasing and the lower bound non-decreasing in the budget
        (up to the final one-ulp outward rounding).
        """
        f = linear_t1()
        region = halfspace_region()
        exact = 1.0 / 48.0
        prev = None
        for budget in (20, 100, 500, 2500, 12500):
            est = integrate_rigorous(f, region, UNIT_SQUARE, budget=budget, tol=1e-15)
            assert est.lower <= exact <= est.upper
            if prev is not None:
                assert est.upper <= prev.upper + 1e-12
                assert est.lower >= prev.lower - 1e-12
            prev = est

    def test_budget_exhaustion_flag(self):
        est = integrate_rigorous(
            linear_t1(), halfspace_region(), UNIT_SQUARE, budget=30, tol=1e-9
        )
        assert est.exhausted
        assert est.boxes_used <= 30
        assert est.lower <= 1.0 / 48.0 <= est.upper

    def test_outside_box_is_zero(self):
        box = ((0.8, 1.0), (0.8, 1.0))
        est = integrate_rigorous(constant_one(), halfspace_region(), box, tol=1e-9)
        assert est.lower == 0.0 and est.upper == 0.0

    def test_inside_box_uses_average(self):
        box = ((0.0, 0.2), (0.0, 0.2))
        f = Integrand(
            arity=2,
            value=lambda t: t[0],
            enclosure=lambda b: Enclosure(b[0][0], b[0][1]),
            average=lambda b: Enclosure(0.5 * (b[0][0] + b[0][1])).widen(1e-15),
        )
        est = integrate_rigorous(f, halfspace_region(), box, tol=1e-12, budget=10**4)
        exact = 0.1 * 0.04  # mean of t1 times area
        assert est.lower <= exact <= est.upper
        assert est.upper - est.lower <= 1e-10

    def test_determinism(self):
        f = linear_t1()
        region = halfspace_region()
        a = integrate_rigorous(f, region, UNIT_SQUARE, budget=2000, tol=1e-7)
        b = integrate_rigorous(f, region, UNIT_SQUARE, budget=2000, tol=1e-7)
        assert (a.lower, a.upper, a.boxes_used) == (b.lower, b.upper, b.boxes_used)

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            integrate_rigorous(linear_t1(), halfspace_region(), ((0.0, 1.0),))


class TestMonteCarlo:
    def test_estimates_area(self):
        est = integrate_mc(constant_one(), halfspace_region(), UNIT_SQUARE, samples=200000, seed=1)
        assert est.mode == MONTE_CARLO
        se = est.stderr
        assert abs(est.lower - 0.125) <= 5 * se
        assert est.boxes_used == 200000

    def test_estimates_moment(self):
        est = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=200000, seed=2)
        assert abs(est.lower - 1.0 / 48.0) <= 5 * est.stderr

    def test_seed_determinism(self):
        a = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=50000, seed=9)
        b = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=50000, seed=9)
        c = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=50000, seed=10)
        assert (a.lower, a.stderr) == (b.lower, b.stderr)
        assert a.lower != c.lower

    def test_worker_streams_reproducible(self):
        a = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=60000, seed=4, workers=3)
        b = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=60000, seed=4, workers=3)
        assert (a.lower, a.stderr) == (b.lower, b.stderr)

    def test_stderr_shrinks(self):
        small = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=20000, seed=3)
        large = integrate_mc(linear_t1(), halfspace_region(), UNIT_SQUARE, samples=320000, seed=3)
        assert large.stderr < small.stderr

    def test_zero_hits_warns(self):
        box = ((0.9, 1.0), (0.9, 1.0))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            est = integrate_mc(constant_one(), halfspace_region(), box, samples=10000, seed=5)
        assert est.lower == 0.0
        assert any("hit the region" in str(w.message) for w in caught)

    def test_minimum_samples(self):
        with pytest.raises(ValueError):
            integrate_mc(constant_one(), halfspace_region(), UNIT_SQUARE, samples=100, seed=1)
