"""Combinatorial sieve bookkeeping over orbit data: congruence slices, the
orbit-density function g, remainder terms r_q, and almost-prime censuses.

A series is the multiset of values f(v) over the enumerated quadruples v with
max-norm at most T, for a coordinate, coordinate-product, or maximal-entry
selector f.  For square-free q the slice |A_q| counts values divisible by q;
its expected mass g(q) * X uses the exactly computed proportion of the orbit
mod q with f = 0, so the remainder r_q = |A_q| - g(q) * X measures genuine
equidistribution error, which the level-distribution report aggregates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arithmetic import is_squarefree
from .congruence import orbit_mod
from .quadruples import PackingOrbit

Selector = tuple


def _selector_degree(selector: Selector) -> int:
    return 2 if selector[0] == "product" else 1


def parse_selector(spec: str) -> Selector:
    """'coord:i', 'product:i:j' (1-based coordinates), or 'max'."""
    parts = spec.strip().split(":")
    if parts[0] == "coord" and len(parts) == 2:
        i = int(parts[1])
        if i not in (1, 2, 3, 4):
            raise ValueError(f"coordinate index out of range in {spec!r}")
        return ("coord", i)
    if parts[0] == "product" and len(parts) == 3:
        i, j = int(parts[1]), int(parts[2])
        if i not in (1, 2, 3, 4) or j not in (1, 2, 3, 4) or i == j:
            raise ValueError(f"bad product selector {spec!r}")
        return ("product", i, j)
    if parts[0] == "max" and len(parts) == 1:
        return ("max",)
    raise ValueError(f"unknown selector {spec!r}")


def selector_name(selector: Selector) -> str:
    if selector[0] == "coord":
        return f"coord:{selector[1]}"
    if selector[0] == "product":
        return f"product:{selector[1]}:{selector[2]}"
    return "max"


def apply_selector(selector: Selector, quads: np.ndarray) -> np.ndarray:
    if selector[0] == "coord":
        return quads[:, selector[1] - 1]
    if selector[0] == "product":
        return quads[:, selector[1] - 1] * quads[:, selector[2] - 1]
    if selector[0] == "max":
        return quads.max(axis=1)
    raise ValueError(f"unknown selector {selector!r}")


@dataclass
class SieveSeries:
    root: tuple
    selector: Selector
    bound: int
    values: np.ndarray

    @property
    def X(self) -> int:
        """Total mass |A(T)| = number of enumerated quadruples."""
        return int(self.values.size)


@dataclass
class CongruenceSlice:
    q: int
    mass: int
    g_hat: float
    r_hat: float


def build_series(orbit: PackingOrbit, selector: Selector, bound: int | None = None) -> SieveSeries:
    """The multiset {f(v)} over enumerated quadruples with max-norm <= bound."""
    if orbit.quads is None:
        raise ValueError("orbit lacks stored quadruples; enumerate with keep_quads=True")
    bound = orbit.bound if bound is None else int(bound)
    if bound > orbit.bound:
        raise ValueError(f"bound {bound} exceeds orbit bound {orbit.bound}")
    quads = orbit.quads
    if bound < orbit.bound:
        quads = quads[np.abs(quads).max(axis=1) <= bound]
    return SieveSeries(
        root=orbit.root,
        selector=selector,
        bound=bound,
        values=apply_selector(selector, quads),
    )


def slice_series(series: SieveSeries, q: int) -> CongruenceSlice:
    """Mass, orbit-density estimate, and remainder of the congruence slice
    f = 0 mod q."""
    q = int(q)
    if q < 2:
        raise ValueError("slice moduli start at 2")
    if not is_squarefree(q):
        raise ValueError(f"slice moduli must be square-free; got {q}")
    mass = int((series.values % q == 0).sum())
    if series.selector[0] == "max":
        raise ValueError("the max selector has no congruence density; use coord/product")
    om = orbit_mod(series.root, q)
    fvals = apply_selector(series.selector, om)
    g_hat = float((fvals % q == 0).sum() / len(om))
    return CongruenceSlice(q=q, mass=mass, g_hat=g_hat, r_hat=mass - g_hat * series.X)


def sieve_primes(z: float, excluded=frozenset()) -> list[int]:
    """Primes p < z outside the excluded set."""
    out = []
    for p in range(2, math.ceil(z)):
        if p >= z:
            break
        if p in excluded:
            continue
        if all(p % d for d in range(2, int(math.isqrt(p)) + 1)):
            out.append(p)
    return out


def almost_prime_count(series: SieveSeries, z: float, excluded=frozenset()) -> int:
    """S(A, P_z): the number of series values coprime to every prime p < z
    outside the excluded set.  z=2 leaves the empty product, so S = X."""
    if z < 2:
        raise ValueError("z must be >= 2")
    mask = np.ones(series.values.size, dtype=bool)
    for p in sieve_primes(z, excluded):
        mask &= series.values % p != 0
    return int(mask.sum())


def survivors(series: SieveSeries, z: float, excluded=frozenset()) -> np.ndarray:
    mask = np.ones(series.values.size, dtype=bool)
    for p in sieve_primes(z, excluded):
        mask &= series.values % p != 0
    return series.values[mask]


def prime_factor_count(n: int) -> int:
    """Number of prime factors with multiplicity of |n| (0 for units)."""
    n = abs(int(n))
    if n <= 1:
        return 0
    count = 0
    d = 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            count += 1
        d += 1 if d == 2 else 2
    if n > 1:
        count += 1
    return count


@dataclass
class AlmostPrimeCensus:
    z: float
    R_bound: int
    survivor_count: int
    omega_histogram: dict[int, int]

    @property
    def max_omega(self) -> int:
        return max(self.omega_histogram, default=0)


def almost_prime_census(series: SieveSeries, eta_denominator: int = 9, excluded=frozenset()) -> AlmostPrimeCensus:
    """Sieve by primes below z = T^(1/eta_denominator) and factor the
    survivors: every survivor has at most degree(f) * eta_denominator prime
    factors, the R-almost-prime census."""
    z = max(2.0, series.bound ** (1.0 / eta_denominator))
    surv = survivors(series, z, excluded)
    hist: dict[int, int] = {}
    for v in surv:
        w = prime_factor_count(int(v))
        hist[w] = hist.get(w, 0) + 1
    return AlmostPrimeCensus(
        z=z,
        R_bound=_selector_degree(series.selector) * eta_denominator,
        survivor_count=int(surv.size),
        omega_histogram=dict(sorted(hist.items())),
    )


def detect_excluded_primes(series: SieveSeries) -> frozenset[int]:
    """{2} when parity forces every value even (mass(2) = X), else empty."""
    if int((series.values % 2 == 0).sum()) == series.X:
        return frozenset({2})
    return frozenset()


@dataclass
class LevelDistributionReport:
    D: int
    X: int
    slices: list[CongruenceSlice]
    sum_abs_r: float

    @property
    def empirical_exponent(self) -> float:
        """log(sum |r_q|) / log X; below 1 is consistent with a power-saving
        level distribution."""
        if self.sum_abs_r <= 0:
            return float("-inf")
        return math.log(self.sum_abs_r) / math.log(self.X)


def level_distribution_report(series: SieveSeries, D: int) -> LevelDistributionReport:
    """Sum of |r_q| over square-free q < D together with the total mass."""
    if D < 2:
        raise ValueError("level D must be >= 2")
    slices = [slice_series(series, q) for q in range(2, D) if is_squarefree(q)]
    return LevelDistributionReport(
        D=D,
        X=series.X,
        slices=slices,
        sum_abs_r=float(sum(abs(s.r_hat) for s in slices)),
    )


def sieve_dimension_trace(series: SieveSeries, zs, excluded=frozenset()) -> list[tuple[int, float]]:
    """(z, sum over primes p < z of g(p) log p): the empirical slope in log z
    estimates the sieve dimension."""
    out = []
    acc = 0.0
    done: set[int] = set()
    for z in sorted(int(z) for z in zs):
        for p in sieve_primes(z, excluded):
            if p in done:
                continue
            done.add(p)
            acc += slice_series(series, p).g_hat * math.log(p)
        out.append((z, acc))
    return out


def crt_remainder_probe(series: SieveSeries, q1: int, q2: int) -> dict[str, float]:
    """Compare |r| at coprime q1, q2 and their product; reported, not asserted."""
    if math.gcd(q1, q2) != 1:
        raise ValueError("probe moduli must be coprime")
    s1 = slice_series(series, q1)
    s2 = slice_series(series, q2)
    s12 = slice_series(series, q1 * q2)
    return {
        "q1": q1,
        "q2": q2,
        "r_q1": s1.r_hat,
        "r_q2": s2.r_hat,
        "r_q1q2": s12.r_hat,
        "g_q1": s1.g_hat,
        "g_q2": s2.g_hat,
        "g_q1q2": s12.g_hat,
        "g_product_defect": s12.g_hat - s1.g_hat * s2.g_hat,
    }
