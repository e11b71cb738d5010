"""Exact integer verification of the sieve decomposition on a dyadic window.

For every integer n in (x, 2x] this module evaluates, with pure integer
arithmetic, each term of the decomposition that the loss integrals bound
asymptotically, and checks the combinatorial identities termwise:

    prime_split:      1_p(n) = S1 - S2 - S3 + S4
    bucket_partition: S4 = S_A + S_T2 + S_B + S_C
    low_chain:        S_A = S_A1 - S_A2 + S_A3
    reversal_chain:   S_B = S_B1 - S_B2 + S_B3

together with the minorant properties of

    rho(n) = 1_p(n) - S_C(n) - dropped_A3(n) - dropped_B3(n).

Notation: z = x^(3/19) is the sieve cut, psi(m, w) = [spf(m) >= w] with
spf(1) treated as infinite, and all weights below are psi-values of
integer cofactors, so every check is exact.

Threshold realizations (all equality cases are impossible for x in
range, by parity or by size, so strict and non-strict agree):

    p >= z                <=>  p >= CZ, CZ = min{v : v^19 >= x^3}
    p <= (2x)^(8/19)      <=>  p^19 <= (2x)^8
    p <  sqrt(2x)         <=>  p^2 < 2x
    pair buckets          by  (p1 p2)^19 against (2x)^8 and (2x)^11,
                          B/C split by p2^38 against (2x)^9
    grouping window       prod(T)^19 in [x^8, x^11]  (x-based)

Derivation of the identities (each exact for n in (x, 2x], x >= 10^4):

  1_p(n) = [spf(n)^2 >= 2x]: a composite n with spf^2 >= 2x would need a
  second factor >= spf, hence n >= spf^2 >= 2x >= n with equality
  forcing n = 2x = spf^2, impossible by parity.

  The Buchstab step [spf(m) >= w1] = [spf(m) >= w2] + sum over primes
  w1 <= p < w2 of [p | m] psi(m/p, p) applied to S1 at w2 = sqrt(2x)
  gives 1_p = S1 - sum over CZ <= p, p^2 < 2x; the sum splits at
  (2x)^(8/19) into the S3 range (weights psi(n/p, p)) and the low range,
  which a second Buchstab step converts to S2 - S4 with S4 over pairs
  p2 < p1.  The S4 cap p1 p2^2 < 2x is free: a dropped term has
  cofactor m = n/(p1 p2) <= p2, so m = 1 (then n = p1 p2 <=
  (2x)^(16/19) < x, outside the window) or m = p2 (then n = 2x, odd
  times odd, impossible), hence weight zero.

  The A-chain applies two more Buchstab steps to psi(n/(p1 p2), p2) on
  the A-pair list.  The level-3 cap p1 p2 p3^2 < 2x and level-4 cap
  p1 p2 p3 p4^2 < 2x again drop only identically-zero branches: the
  respective cofactors are squeezed to {1, p3} or {1, p4}, the prime
  case forces n = 2x (parity), and the unit case forces
  n <= (2x)^(16/19) < x since p3 p4 < p2^2 <= p1 p2 < (2x)^(8/19).

  The reversal chain rewrites the first B-side Buchstab step, a sum of
  psi(beta, p3) over B-pairs (p1, p2) and p3 | n/(p1 p2) with
  beta = n/(p1 p2 p3), as a sum over (beta, p2, p3) with
  q = n/(beta p2 p3) required to be the prime p1.  With the cap
  q p2 p3^2 < 2x (dropped branches: beta <= p3 forces beta = p3 and
  n = 2x, parity-impossible, or beta = 1 and n = q p2 p3 <=
  (2x)^(34/38) < x for x >= 363, size-impossible), [q prime] equals
  psi(q, sqrt(2x/(beta p2 p3))): the cut exceeds sqrt(q) >= spf of any
  composite q, a square q = a^2 at the cut forces n = 2x (parity), and
  a prime q always clears the cut since q >= 2 > 2x/n.  One Buchstab
  step down from that cut to z, with p4 < cut realized as
  p4^2 beta p2 p3 < 2x, yields S_B2 and S_B3; the cut stays above z
  because q^38 > (2x)^13 on B-pairs.

rho drops the whole C-bucket and the chain terms whose exponent subsets
fit no grouping window; rho <= 1_p holds termwise and rho vanishes
whenever spf(n) < z because every surviving weight requires a cofactor
free of primes below z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "SieveContext",
    "DecompositionRecord",
    "IdentityReport",
    "MinorantReport",
    "build_context",
    "psi",
    "decompose",
    "verify_identities",
    "verify_minorant",
    "harness_report",
]

X_MIN = 10**4
X_MAX = 10**8

_INF = 1 << 62  # sentinel spf for 1: larger than any threshold in range

IDENTITY_NAMES = ("prime_split", "bucket_partition", "low_chain", "reversal_chain")


def _build_spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx.astype(np.int32)
    spf[0] = 0
    spf[1] = 0
    return spf


class SieveContext:
    """Precomputed integer thresholds and a smallest-prime-factor table.

    Covers the window (x, 2x].  The spf table costs 4(2x + 1) bytes, so
    the largest admissible x = 10^8 needs about 800 MB.
    """

    def __init__(self, x: int):
        if not isinstance(x, int):
            raise TypeError("x must be an integer")
        if not X_MIN <= x <= X_MAX:
            raise ValueError(f"x must lie in [{X_MIN}, {X_MAX}]")
        self.x = x
        self.twox = 2 * x
        self.spf = _build_spf(self.twox)
        self.cut = _min_root_geq(x**3, 19)
        self.pow8 = self.twox**8
        self.pow9 = self.twox**9
        self.pow11 = self.twox**11
        self.x8 = x**8
        self.x11 = x**11
        self._scan_cache: dict | None = None

    @property
    def z(self) -> float:
        return self.x ** (3.0 / 19.0)

    def spf_of(self, m: int) -> int:
        if m == 1:
            return _INF
        if not 2 <= m <= self.twox:
            raise ValueError(f"m = {m} outside spf table range [1, {self.twox}]")
        return int(self.spf[m])


def _min_root_geq(value: int, k: int) -> int:
    """Smallest integer v with v^k >= value."""
    v = round(value ** (1.0 / k))
    while v**k >= value:
        v -= 1
    while (v + 1) ** k < value:
        v += 1
    return v + 1


def build_context(x: int) -> SieveContext:
    """Sieve the window (x, 2x] and freeze all integer thresholds."""
    return SieveContext(x)


def psi(ctx: SieveContext, m: int, threshold) -> int:
    """[spf(m) >= threshold], with psi(1, anything) = 1."""
    if m < 1:
        raise ValueError("psi is defined for positive integers")
    return 1 if ctx.spf_of(m) >= threshold else 0


def _factorize(ctx: SieveContext, n: int) -> list[list[int]]:
    out: list[list[int]] = []
    m = n
    spf = ctx.spf
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append([p, e])
    return out


_RECORD_FIELDS = (
    "n",
    "one_p",
    "s1",
    "s2",
    "s3",
    "s4",
    "s_a",
    "s_type2",
    "s_b",
    "s_c",
    "s_a1",
    "s_a2",
    "s_a3",
    "s_b1",
    "s_b2",
    "s_b3",
    "dropped_a3",
    "dropped_b3",
    "rho",
)


@dataclass(frozen=True, slots=True)
class DecompositionRecord:
    """All decomposition terms of a single integer n."""

    n: int
    one_p: int
    s1: int
    s2: int
    s3: int
    s4: int
    s_a: int
    s_type2: int
    s_b: int
    s_c: int
    s_a1: int
    s_a2: int
    s_a3: int
    s_b1: int
    s_b2: int
    s_b3: int
    dropped_a3: int
    dropped_b3: int
    rho: int

    def identity_residuals(self) -> dict[str, int]:
        return {
            "prime_split": self.one_p - (self.s1 - self.s2 - self.s3 + self.s4),
            "bucket_partition": self.s4 - (self.s_a + self.s_type2 + self.s_b + self.s_c),
            "low_chain": self.s_a - (self.s_a1 - self.s_a2 + self.s_a3),
            "reversal_chain": self.s_b - (self.s_b1 - self.s_b2 + self.s_b3),
        }


def _groupable(ctx: SieveContext, parts: tuple[int, ...]) -> bool:
    """True when some nonempty sub-product lands in [x^(8/19), x^(11/19)]."""
    n_parts = len(parts)
    for mask in range(1, 1 << n_parts):
        prod = 1
        for i in range(n_parts):
            if mask >> i & 1:
                prod *= parts[i]
        v = prod**19
        if ctx.x8 <= v <= ctx.x11:
            return True
    return False


def _beta_splits(
    items: list[tuple[int, int]], p3: int
) -> Iterator[tuple[int, int, int]]:
    """Yield (beta, q, spf_q) over divisors beta of prod(items) with factors >= p3.

    items is the ascending remaining factorization; primes below p3 are
    forced into q.  spf_q is the smallest prime actually present in q,
    or the infinite sentinel for q = 1.
    """
    low: list[tuple[int, int]] = []
    high: list[tuple[int, int]] = []
    for p, e in items:
        (low if p < p3 else high).append((p, e))
    q_low = 1
    for p, e in low:
        q_low *= p**e
    spf_low = low[0][0] if low else _INF

    def rec(idx: int, beta: int, q_high: int, spf_high: int) -> Iterator[tuple[int, int, int]]:
        if idx == len(high):
            yield beta, q_low * q_high, min(spf_low, spf_high)
            return
        p, e = high[idx]
        pk = 1
        for take in range(e + 1):
            keep = e - take
            yield from rec(
                idx + 1,
                beta * pk,
                q_high * p**keep,
                spf_high if keep == 0 else min(spf_high, p),
            )
            pk *= p

    # spf_high accumulates the smallest high prime left in q; high is
    # ascending so min() is equivalent to first-kept, kept simple.
    yield from rec(0, 1, 1, _INF)


def decompose(ctx: SieveContext, n: int) -> DecompositionRecord:
    """Evaluate every decomposition term for one integer, exactly."""
    if not ctx.x < n <= ctx.twox:
        raise ValueError(f"n = {n} outside the window ({ctx.x}, {ctx.twox}]")
    fac = _factorize(ctx, n)
    spf_n = fac[0][0]
    twox = ctx.twox
    cz = ctx.cut

    def cof_spf(used: dict[int, int]) -> int:
        for p, e in fac:
            if e - used.get(p, 0) > 0:
                return p
        return _INF

    one_p = 1 if spf_n * spf_n >= twox else 0
    s1 = 1 if spf_n >= cz else 0

    qual = [p for p, _ in fac if p >= cz]

    s2 = s3 = s4 = 0
    s_a = s_type2 = s_b = s_c = 0
    s_a1 = s_a2 = s_a3 = 0
    s_b1 = s_b2 = s_b3 = 0
    dropped_a3 = dropped_b3 = 0
    a_pairs: list[tuple[int, int]] = []
    b_pairs: list[tuple[int, int]] = []

    for p in qual:
        if p**19 <= ctx.pow8:
            if cof_spf({p: 1}) >= cz:
                s2 += 1
        elif p * p < twox:
            if cof_spf({p: 1}) >= p:
                s3 += 1

    for p1 in qual:
        if p1**19 > ctx.pow8:
            continue
        for p2 in qual:
            if p2 >= p1:
                continue
            if p1 * p2 * p2 >= twox:
                continue
            pair_pow = (p1 * p2) ** 19
            if pair_pow < ctx.pow8:
                bucket = "a"
                a_pairs.append((p1, p2))
            elif pair_pow <= ctx.pow11:
                bucket = "t2"
            else:
                p2_split = p2**38
                if p2_split < ctx.pow9:
                    bucket = "b"
                    b_pairs.append((p1, p2))
                elif p2_split > ctx.pow9:
                    bucket = "c"
                else:
                    raise AssertionError("impossible equality p2^38 = (2x)^9")
            w = 1 if cof_spf({p1: 1, p2: 1}) >= p2 else 0
            if w:
                s4 += 1
                if bucket == "a":
                    s_a += 1
                elif bucket == "t2":
                    s_type2 += 1
                elif bucket == "b":
                    s_b += 1
                else:
                    s_c += 1

    # A-side chain: two further Buchstab steps over each admissible pair.
    for p1, p2 in a_pairs:
        if cof_spf({p1: 1, p2: 1}) >= cz:
            s_a1 += 1
        for p3 in qual:
            if not p3 < p2:
                continue
            if p1 * p2 * p3 * p3 >= twox:
                continue
            used3 = {p1: 1, p2: 1, p3: 1}
            if cof_spf(used3) >= cz:
                s_a2 += 1
            for p4 in qual:
                if not p4 < p3:
                    continue
                if p1 * p2 * p3 * p4 * p4 >= twox:
                    continue
                used4 = {p1: 1, p2: 1, p3: 1, p4: 1}
                if cof_spf(used4) >= p4:
                    s_a3 += 1
                    if not _groupable(ctx, (p1, p2, p3)) and not _groupable(
                        ctx, (p1, p2, p3, p4)
                    ):
                        dropped_a3 += 1

    for p1, p2 in b_pairs:
        if cof_spf({p1: 1, p2: 1}) >= cz:
            s_b1 += 1

    # Reversed B-side chain, enumerated over (p2, p3, beta) with
    # q = n / (beta p2 p3); the forward pair prime p1 reappears as q.
    for p2 in qual:
        if p2**38 >= ctx.pow9:
            continue
        for p3 in qual:
            if not p3 < p2:
                continue
            consumed = {p2: 1, p3: 1}
            items = [
                (p, e - consumed.get(p, 0)) for p, e in fac if e - consumed.get(p, 0) > 0
            ]
            for beta, q, spf_q in _beta_splits(items, p3):
                if q <= p2:
                    continue
                if q**19 > ctx.pow8:
                    continue
                if (q * p2) ** 19 <= ctx.pow11:
                    continue
                if q * p2 * p2 >= twox:
                    continue
                if q * p2 * p3 * p3 >= twox:
                    continue
                if spf_q >= cz:
                    s_b2 += 1
                qq = q
                while qq > 1:
                    p4 = ctx.spf_of(qq)
                    e4 = 0
                    while qq % p4 == 0:
                        qq //= p4
                        e4 += 1
                    if p4 < cz:
                        continue
                    if p4 * p4 * beta * p2 * p3 >= twox:
                        continue
                    rest = q // p4
                    spf_rest = ctx.spf_of(rest) if e4 == 1 else min(ctx.spf_of(rest), p4)
                    if spf_rest >= p4:
                        s_b3 += 1
                        if not _groupable(ctx, (q, p2, p3)) and not _groupable(
                            ctx, (beta, p2, p3, p4)
                        ):
                            dropped_b3 += 1

    rho = one_p - s_c - dropped_a3 - dropped_b3
    return DecompositionRecord(
        n=n,
        one_p=one_p,
        s1=s1,
        s2=s2,
        s3=s3,
        s4=s4,
        s_a=s_a,
        s_type2=s_type2,
        s_b=s_b,
        s_c=s_c,
        s_a1=s_a1,
        s_a2=s_a2,
        s_a3=s_a3,
        s_b1=s_b1,
        s_b2=s_b2,
        s_b3=s_b3,
        dropped_a3=dropped_a3,
        dropped_b3=dropped_b3,
        rho=rho,
    )


def _scan(ctx: SieveContext) -> dict:
    if ctx._scan_cache is not None:
        return ctx._scan_cache
    totals = {name: 0 for name in _RECORD_FIELDS if name != "n"}
    identity_violations = {name: 0 for name in IDENTITY_NAMES}
    minorant_violations = 0
    support_violations = 0
    cap_violations = 0
    min_rho = None
    for n in range(ctx.x + 1, ctx.twox + 1):
        rec = decompose(ctx, n)
        for name in totals:
            totals[name] += getattr(rec, name)
        for name, residual in rec.identity_residuals().items():
            if residual != 0:
                identity_violations[name] += 1
        if rec.rho > rec.one_p:
            minorant_violations += 1
        if rec.rho > 1:
            cap_violations += 1
        if rec.rho != 0 and ctx.spf_of(n) < ctx.cut:
            support_violations += 1
        if min_rho is None or rec.rho < min_rho:
            min_rho = rec.rho
    ctx._scan_cache = {
        "checked": ctx.x,
        "totals": totals,
        "identity_violations": identity_violations,
        "minorant_violations": minorant_violations,
        "support_violations": support_violations,
        "cap_violations": cap_violations,
        "min_rho": min_rho,
    }
    return ctx._scan_cache


@dataclass(frozen=True)
class IdentityReport:
    x: int
    checked: int
    violations: dict[str, int]
    totals: dict[str, int]

    def clean(self) -> bool:
        return all(v == 0 for v in self.violations.values())


@dataclass(frozen=True)
class MinorantReport:
    x: int
    checked: int
    minorant_violations: int
    support_violations: int
    cap_violations: int
    min_rho: int
    sum_rho: int
    prime_count: int
    ratio_window_log: float
    ratio_base_log: float

    def clean(self) -> bool:
        return (
            self.minorant_violations == 0
            and self.support_violations == 0
            and self.cap_violations == 0
        )


def verify_identities(ctx: SieveContext) -> IdentityReport:
    """Scan the whole window and count identity violations (expect zero)."""
    scan = _scan(ctx)
    return IdentityReport(
        x=ctx.x,
        checked=ctx.x,
        violations=dict(scan["identity_violations"]),
        totals=dict(scan["totals"]),
    )


def verify_minorant(ctx: SieveContext) -> MinorantReport:
    """Scan the window for minorant, cap and support violations (expect zero).

    The reported ratios divide sum(rho) by the window length after
    multiplying by log of the representative size: the window midpoint
    scale 1.5x, and the base scale x for comparison.
    """
    scan = _scan(ctx)
    sum_rho = scan["totals"]["rho"]
    return MinorantReport(
        x=ctx.x,
        checked=ctx.x,
        minorant_violations=scan["minorant_violations"],
        support_violations=scan["support_violations"],
        cap_violations=scan["cap_violations"],
        min_rho=scan["min_rho"],
        sum_rho=sum_rho,
        prime_count=scan["totals"]["one_p"],
        ratio_window_log=sum_rho * math.log(1.5 * ctx.x) / ctx.x,
        ratio_base_log=sum_rho * math.log(ctx.x) / ctx.x,
    )


def harness_report(ctx: SieveContext) -> dict:
    """JSON-ready summary of both window scans."""
    identities = verify_identities(ctx)
    minorant = verify_minorant(ctx)
    return {
        "x": ctx.x,
        "checked": identities.checked,
        "violations": {
            "identity": sum(identities.violations.values()),
            "identity_detail": dict(identities.violations),
            "minorant": minorant.minorant_violations + minorant.cap_violations,
            "support": minorant.support_violations,
        },
        "totals": {
            "rho": minorant.sum_rho,
            "primes": minorant.prime_count,
            "S_C": identities.totals["s_c"],
            "dropped_A3": identities.totals["dropped_a3"],
            "dropped_B3": identities.totals["dropped_b3"],
        },
        "ratios": {
            "window_log": minorant.ratio_window_log,
            "base_log": minorant.ratio_base_log,
        },
        "clean": identities.clean() and minorant.clean(),
    }
