"""Sieved arithmetic tables over the Gaussian integers.

A table covers every z with 0 < N(z) <= n_max.  Dense per-norm data
(r2 counts) and per-cell data (von Mangoldt values, primality flags) are
held in numpy arrays indexed by (|re|, |im|); all the functions stored
this way are invariant under multiplication by units and conjugation, so
one octant of data serves the whole plane.  Multiplicative data that is
only needed for small moduli (factorizations, mu, phi) is computed on
demand from the rational smallest-prime-factor sieve and memoized.

Gaussian primes come from the classification of rational primes:
2 ramifies as (1+i)^2, p = 1 mod 4 splits into a conjugate pair found by
Cornacchia descent, p = 3 mod 4 stays inert with norm p^2.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import GaussInt, ONE, exact_divide, gcd
from .errors import CapacityError, ConfigError

__all__ = [
    "Factorization",
    "ArithmeticTable",
    "build_table",
    "load_table",
    "two_squares",
    "estimate_table_bytes",
]

LOG2 = math.log(2.0)

_CACHE_MAGIC = b"GGTB"
_CACHE_VERSION = 1
_ENDIAN_TAG = 0x01020304


def two_squares(p: int) -> tuple[int, int]:
    """Write a prime p = 1 mod 4 as a^2 + b^2 with a > b > 0.

    Finds a square root of -1 mod p from a quadratic non-residue, then
    runs the Euclidean descent until the remainder drops below sqrt(p).
    Deterministic: the non-residue search goes through 2, 3, 4, ...
    """
    if p % 4 != 1:
        raise ValueError(f"{p} is not 1 mod 4")
    x = 0
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            x = pow(r, (p - 1) // 4, p)
            break
    s = math.isqrt(p)
    a, b = p, x
    while b > s:
        a, b = b, a % b
    c = math.isqrt(p - b * b)
    hi, lo = max(b, c), min(b, c)
    assert hi * hi + lo * lo == p
    return hi, lo


@dataclass(frozen=True)
class Factorization:
    """unit * product(prime^exp) with canonical primes in a fixed order."""

    unit: GaussInt
    factors: tuple[tuple[GaussInt, int], ...]

    def value(self) -> GaussInt:
        z = self.unit
        for rho, e in self.factors:
            for _ in range(e):
                z = z * rho
        return z

    def num_divisors(self) -> int:
        d = 1
        for _, e in self.factors:
            d *= e + 1
        return d

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def estimate_table_bytes(n_max: int) -> int:
    w1 = math.isqrt(n_max) + 1
    # spf (int32) + r2 (int64) + lambda grid (f64) + prime mask (u8)
    return 4 * (n_max + 1) + 8 * (n_max + 1) + 9 * w1 * w1


def _spf_sieve(n_max: int) -> np.ndarray:
    """Smallest prime factor for every integer up to n_max (spf[0:2] = 0/1)."""
    spf = np.zeros(n_max + 1, dtype=np.int32)
    spf[1:] = np.arange(1, n_max + 1, dtype=np.int32)
    for p in range(2, math.isqrt(n_max) + 1):
        if spf[p] == p:
            seg = spf[p * p :: p]
            untouched = seg == np.arange(p * p, n_max + 1, p, dtype=np.int32)
            seg[untouched] = p
    return spf


class ArithmeticTable:
    """Read-only arithmetic data for all z with 0 < N(z) <= n_max."""

    def __init__(self, n_max: int, memory_budget: int = 2_000_000_000):
        if n_max < 2:
            raise ValueError("n_max must be at least 2")
        need = estimate_table_bytes(n_max)
        if need > memory_budget:
            raise CapacityError(
                f"table for n_max={n_max} needs about {need} bytes, "
                f"budget is {memory_budget}",
                required_bytes=need,
            )
        self.n_max = int(n_max)
        self.W = math.isqrt(n_max)
        self.spf = _spf_sieve(n_max)
        self.is_rational_prime = np.zeros(n_max + 1, dtype=bool)
        idx = np.arange(2, n_max + 1)
        self.is_rational_prime[idx] = self.spf[idx] == idx
        self._primes_above: dict[int, tuple[GaussInt, ...]] = {}
        self._fact_memo: dict[tuple[int, int, int, int], Factorization] = {}
        self._mu_memo: dict[tuple[int, int], int] = {}
        self._phi_memo: dict[tuple[int, int], int] = {}
        self._div_memo: dict[tuple[int, int], list[GaussInt]] = {}
        self._build_grids()

    # -- construction ---------------------------------------------------

    def _build_grids(self) -> None:
        W, n_max = self.W, self.n_max
        side = W + 1
        X, Y = np.meshgrid(
            np.arange(side, dtype=np.int64),
            np.arange(side, dtype=np.int64),
            indexing="ij",
        )
        norms = X * X + Y * Y
        inside = (norms <= n_max) & (norms > 0)

        # r2: every plane point maps to the octant cell (|x|, |y|); the
        # preimage has 4 points off the axes, 2 on an axis, 1 at 0.
        weights = np.full((side, side), 4, dtype=np.int64)
        weights[0, :] = 2
        weights[:, 0] = 2
        weights[0, 0] = 1
        r2 = np.zeros(n_max + 1, dtype=np.int64)
        np.add.at(r2, norms[inside], weights[inside])
        r2[0] = 1
        self.r2 = r2

        # primality: norm is a rational prime, or an inert rational prime
        # sitting on an axis (norm p^2 with p = 3 mod 4).
        mask = np.zeros((side, side), dtype=bool)
        small = norms <= n_max
        mask[small] = self.is_rational_prime[norms[small]]
        axis = np.arange(side)
        inert_axis = np.zeros(side, dtype=bool)
        ok = axis[axis * axis <= n_max]
        inert_axis[ok] = self.is_rational_prime[ok] & (ok % 4 == 3)
        mask[:, 0] |= inert_axis
        mask[0, :] |= inert_axis
        self.prime_mask = mask

        # von Mangoldt: walk prime powers directly, the support is sparse.
        lam = np.zeros((side, side), dtype=np.float64)

        def put(z: GaussInt, value: float) -> None:
            a, b = abs(z.re), abs(z.im)
            lam[a, b] = value
            lam[b, a] = value

        z = GaussInt(1, 1)
        while z.norm <= n_max:
            put(z, LOG2)
            z = z * GaussInt(1, 1)
        for p in range(2, n_max + 1):
            if not self.is_rational_prime[p]:
                continue
            if p % 4 == 1:
                hi, lo = two_squares(p)
                pi = GaussInt(hi, lo)
                z = pi
                while z.norm <= n_max:
                    put(z, math.log(p))
                    z = z * pi
            elif p % 4 == 3:
                if p * p > n_max:
                    continue
                v = p
                while v * v <= n_max:
                    put(GaussInt(v, 0), 2.0 * math.log(p))
                    v *= p
        self.lam = lam

    # -- prime classification -------------------------------------------

    def primes_above(self, p: int) -> tuple[GaussInt, ...]:
        """Canonical Gaussian primes dividing the rational prime p."""
        got = self._primes_above.get(p)
        if got is not None:
            return got
        if p > self.n_max or not self.is_rational_prime[p]:
            raise ValueError(f"{p} is not a rational prime within the table")
        if p == 2:
            out: tuple[GaussInt, ...] = (GaussInt(1, 1),)
        elif p % 4 == 1:
            hi, lo = two_squares(p)
            out = (GaussInt(hi, lo), GaussInt(lo, hi))
        else:
            out = (GaussInt(p, 0),)
        self._primes_above[p] = out
        return out

    def gaussian_primes(self, norm_below: int) -> list[GaussInt]:
        """Canonical Gaussian primes with norm strictly below the bound."""
        bound = min(norm_below, self.n_max + 1)
        out: list[GaussInt] = []
        if bound > 2:
            out.append(GaussInt(1, 1))
        for p in range(2, bound):
            if self.is_rational_prime[p] and p % 4 == 1:
                out.extend(self.primes_above(p))
        p = 3
        while p * p < bound:
            if self.is_rational_prime[p] and p % 4 == 3:
                out.append(GaussInt(p, 0))
            p += 1
        out.sort(key=lambda z: (z.norm, z.re, z.im))
        return out

    # -- scalar lookups -------------------------------------------------

    def _check(self, z: GaussInt) -> int:
        n = z.norm
        if n == 0:
            raise ValueError("table lookups need z != 0")
        if n > self.n_max:
            raise CapacityError(f"N(z) = {n} exceeds table bound {self.n_max}")
        return n

    def lam_at(self, z: GaussInt) -> float:
        self._check(z)
        return float(self.lam[abs(z.re), abs(z.im)])

    def is_prime(self, z: GaussInt) -> bool:
        self._check(z)
        return bool(self.prime_mask[abs(z.re), abs(z.im)])

    def r2_count(self, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise ValueError("norm out of table range")
        return int(self.r2[n])

    def factorization(self, z: GaussInt) -> Factorization:
        n = self._check(z)
        key = (z.re, z.im, 0, 0)
        got = self._fact_memo.get(key)
        if got is not None:
            return got
        factors: list[tuple[GaussInt, int]] = []
        if n > 1:
            rational: list[tuple[int, int]] = []
            m = n
            while m > 1:
                p = int(self.spf[m])
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                rational.append((p, e))
            for p, e in rational:
                if p == 2:
                    rho = GaussInt(1, 1)
                    for _ in range(e):
                        z = exact_divide(z, rho)
                    factors.append((rho, e))
                elif p % 4 == 3:
                    rho = GaussInt(p, 0)
                    for _ in range(e // 2):
                        z = exact_divide(z, rho)
                    factors.append((rho, e // 2))
                else:
                    pi, pibar = self.primes_above(p)
                    a = 0
                    while a < e:
                        nxt = exact_divide(z, pi)
                        if nxt is None:
                            break
                        z = nxt
                        a += 1
                    for _ in range(e - a):
                        z = exact_divide(z, pibar)
                    if a:
                        factors.append((pi, a))
                    if e - a:
                        factors.append((pibar, e - a))
        assert z is not None and z.norm == 1, "factor removal must leave a unit"
        factors.sort(key=lambda t: (t[0].norm, t[0].re, t[0].im))
        fact = Factorization(unit=z, factors=tuple(factors))
        self._fact_memo[key] = fact
        return fact

    def mu(self, z: GaussInt) -> int:
        """Moebius value: 0 on square divisors, else (-1)^(#distinct primes)."""
        self._check(z)
        key = _orbit_key(z)
        got = self._mu_memo.get(key)
        if got is None:
            fact = self.factorization(z)
            got = 0 if not fact.is_squarefree() else (-1) ** len(fact.factors)
            self._mu_memo[key] = got
        return got

    def phi(self, z: GaussInt) -> int:
        """Euler totient N(z) * prod(1 - 1/N(rho)) as an exact integer."""
        self._check(z)
        key = _orbit_key(z)
        got = self._phi_memo.get(key)
        if got is None:
            got = 1
            for rho, e in self.factorization(z).factors:
                nr = rho.norm
                got *= nr ** (e - 1) * (nr - 1)
            self._phi_memo[key] = got
        return got

    def num_divisors(self, z: GaussInt) -> int:
        self._check(z)
        return self.factorization(z).num_divisors()

    def divisors(self, z: GaussInt) -> list[GaussInt]:
        """All canonical divisors of z, sorted by (norm, re, im).

        Memoized on the canonical associate (conjugates have different
        canonical divisor sets, so the orbit key would be wrong here).
        """
        c = z.canonical()
        key = (c.re, c.im)
        got = self._div_memo.get(key)
        if got is not None:
            return got
        fact = self.factorization(z)
        out = [ONE]
        for rho, e in fact.factors:
            powers = []
            w = ONE
            for _ in range(e):
                w = w * rho
                powers.append(w)
            out = [d * w for d in out for w in [ONE] + powers]
            out = [d.canonical() for d in out]
        uniq = sorted(set(out), key=lambda d: (d.norm, d.re, d.im))
        self._div_memo[key] = uniq
        return uniq

    # -- smooth moduli --------------------------------------------------

    def smooth_moduli(self, Q: int, norm_cap: int) -> list[GaussInt]:
        """Square-free canonical products of primes with N(rho) < Q.

        Includes 1.  Results are capped at N(q) <= norm_cap and sorted by
        (norm, re, im).
        """
        return [q for q, _ in self.smooth_moduli_factored(Q, norm_cap)]

    def smooth_moduli_factored(
        self, Q: int, norm_cap: int
    ) -> list[tuple[GaussInt, tuple[GaussInt, ...]]]:
        """Smooth moduli together with their prime support."""
        primes = self.gaussian_primes(Q)
        out: list[tuple[GaussInt, tuple[GaussInt, ...]]] = []

        def extend(i: int, q: GaussInt, used: tuple[GaussInt, ...]) -> None:
            out.append((q.canonical(), used))
            for j in range(i, len(primes)):
                rho = primes[j]
                if q.norm * rho.norm > norm_cap:
                    continue
                extend(j + 1, q * rho, used + (rho,))

        extend(0, ONE, ())
        out.sort(key=lambda t: (t[0].norm, t[0].re, t[0].im))
        return out

    # -- binary cache ---------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Dump the dense arrays with a versioned fixed-width header."""
        path = Path(path)
        side = self.W + 1
        header = struct.pack(
            "<4sIIQQ", _CACHE_MAGIC, _CACHE_VERSION, _ENDIAN_TAG, self.n_max, side
        )
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(self.r2.astype("<i8").tobytes())
            fh.write(self.lam.astype("<f8").tobytes())
            fh.write(self.prime_mask.astype("u1").tobytes())


def load_table(path: str | Path, memory_budget: int = 2_000_000_000) -> ArithmeticTable:
    """Restore a table from a cache file written by ArithmeticTable.save.

    The header is validated field by field; any mismatch (magic, version,
    byte order, truncated payload) is rejected rather than guessed at.
    Only the dense grids are stored; the rational sieve is cheap and gets
    rebuilt so that factorization lookups keep working.
    """
    path = Path(path)
    raw = path.read_bytes()
    head_size = struct.calcsize("<4sIIQQ")
    if len(raw) < head_size:
        raise ConfigError(f"{path}: truncated cache header")
    magic, version, endian, n_max, side = struct.unpack("<4sIIQQ", raw[:head_size])
    if magic != _CACHE_MAGIC:
        raise ConfigError(f"{path}: not a table cache (bad magic {magic!r})")
    if version != _CACHE_VERSION:
        raise ConfigError(f"{path}: cache version {version}, expected {_CACHE_VERSION}")
    if endian != _ENDIAN_TAG:
        raise ConfigError(f"{path}: cache written with mismatched byte order")
    n_max, side = int(n_max), int(side)
    if side != math.isqrt(n_max) + 1:
        raise ConfigError(f"{path}: header side {side} inconsistent with n_max {n_max}")
    expect = head_size + 8 * (n_max + 1) + 8 * side * side + side * side
    if len(raw) != expect:
        raise ConfigError(f"{path}: cache payload is {len(raw)} bytes, expected {expect}")
    need = estimate_table_bytes(n_max)
    if need > memory_budget:
        raise CapacityError(
            f"cached table for n_max={n_max} needs about {need} bytes",
            required_bytes=need,
        )
    table = ArithmeticTable.__new__(ArithmeticTable)
    table.n_max = n_max
    table.W = side - 1
    table.spf = _spf_sieve(n_max)
    table.is_rational_prime = np.zeros(n_max + 1, dtype=bool)
    idx = np.arange(2, n_max + 1)
    table.is_rational_prime[idx] = table.spf[idx] == idx
    table._primes_above = {}
    table._fact_memo = {}
    table._mu_memo = {}
    table._phi_memo = {}
    table._div_memo = {}
    off = head_size
    table.r2 = np.frombuffer(raw, dtype="<i8", count=n_max + 1, offset=off).copy()
    off += 8 * (n_max + 1)
    table.lam = (
        np.frombuffer(raw, dtype="<f8", count=side * side, offset=off)
        .reshape(side, side)
        .copy()
    )
    off += 8 * side * side
    table.prime_mask = (
        np.frombuffer(raw, dtype="u1", count=side * side, offset=off)
        .reshape(side, side)
        .astype(bool)
    )
    return table


def _orbit_key(z: GaussInt) -> tuple[int, int]:
    a, b = abs(z.re), abs(z.im)
    return (a, b) if a <= b else (b, a)


def build_table(n_max: int, memory_budget: int = 2_000_000_000) -> ArithmeticTable:
    """Build the arithmetic table covering all 0 < N(z) <= n_max."""
    return ArithmeticTable(n_max, memory_budget=memory_budget)
