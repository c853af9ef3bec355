"""Ramanujan sums over Z[i] by three independent routes.

The sum is

    tau_q(x) = sum over n in A_q of e(<x, n/q>),

with A_q the reduced residues of the box B_q.  It evaluates to an
integer: the divisor form sum_{d | gcd(q, conj(x))} mu(q/d) N(d) and
the closed form mu(q/g) phi(q)/phi(q/g) with g = gcd(q, conj(x)) both
equal it.  The three routes are implemented independently so they can
cross-check each other; the divisor route is the workhorse.

Note the conjugate: tau_q(x) is a function of x mod conj(q), so the
identities come out as tau_q(conj(q)) = phi(q) and tau_q(1) = mu(q).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .core import GaussInt, exact_divide, gcd
from .residues import build_box
from .tables import ArithmeticTable

__all__ = [
    "tau_exponential",
    "tau_divisor",
    "tau_multiplicative",
    "gauss_ratio",
    "cohen_identity_check",
    "tau_lookup",
    "bourgain_moment",
]


def tau_exponential(q: GaussInt, x: GaussInt) -> float:
    """Direct evaluation of the exponential sum, exact roots of unity.

    <x, n/q> = Re(x * conj(n) * q) / N(q), an integer over N(q); with
    w = x*q the numerator is Re(w)Re(n) + Im(w)Im(n), so the whole sum
    is a root-table gather over the reduced residues of the cached box.
    """
    if not q:
        raise ValueError("modulus must be nonzero")
    box = build_box(q)
    nq = q.norm
    w = x * q
    nre, nim = box.reduced_coords
    k = (w.re * nre + w.im * nim) % nq
    total = complex(box.root_table[k].sum())
    if abs(total.imag) > 1e-8 * max(1, nq):
        raise AssertionError(f"tau_{q}({x}) has imaginary part {total.imag}")
    return total.real


def tau_divisor(q: GaussInt, x: GaussInt, table: ArithmeticTable) -> int:
    """The divisor-sum route: sum_{d | g} mu(q/d) N(d), g = gcd(q, conj(x))."""
    if not q:
        raise ValueError("modulus must be nonzero")
    g = gcd(q, x.conj())
    total = 0
    for d in table.divisors(g):
        cof = exact_divide(q, d)
        if cof is None:
            raise AssertionError(f"{d} does not divide {q}")
        total += table.mu(cof) * d.norm
    return total


def tau_multiplicative(q: GaussInt, x: GaussInt, table: ArithmeticTable) -> int:
    """The closed form mu(q/g) phi(q)/phi(q/g) with g = gcd(q, conj(x))."""
    if not q:
        raise ValueError("modulus must be nonzero")
    g = gcd(q, x.conj())
    cof = exact_divide(q, g)
    if cof is None:
        raise AssertionError(f"{g} does not divide {q}")
    mu_cof = table.mu(cof)
    if mu_cof == 0:
        return 0
    phi_q = table.phi(q)
    phi_cof = table.phi(cof)
    if phi_q % phi_cof:
        raise AssertionError(f"phi({cof}) does not divide phi({q})")
    return mu_cof * (phi_q // phi_cof)


def gauss_ratio(a: GaussInt, q: GaussInt, table: ArithmeticTable) -> Fraction:
    """Phi(a, q) = tau_q(a) / phi(q) as an exact rational."""
    return Fraction(tau_divisor(q, a, table), table.phi(q))


def cohen_identity_check(q: GaussInt, x: GaussInt, table: ArithmeticTable) -> bool:
    """Verify sum_{r in A_conj(q)} tau_q(x + r) = mu(q) tau_q(x) exactly."""
    left = sum(tau_divisor(q, x + r, table) for r in build_box(q.conj()).reduced)
    right = table.mu(q) * tau_divisor(q, x, table)
    return left == right


def tau_lookup(q: GaussInt, table: ArithmeticTable) -> np.ndarray:
    """Dense lookup of tau_q over residue classes, for vectorized gathers.

    tau_q(x) depends only on x mod conj(q).  Writing w = x*q, the class
    is keyed by (Re(w) mod N(q), Im(w) mod N(q)); the returned N(q) x
    N(q) int64 array T satisfies T[u, v] = tau_q(x) for every x whose
    key is (u, v).  Combine with tau_key_arrays for grid evaluation.
    """
    nq = q.norm
    out = np.zeros((nq, nq), dtype=np.int64)
    for r in build_box(q.conj()).points:
        w = r * q
        out[w.re % nq, w.im % nq] = tau_divisor(q, r, table)
    return out


def tau_key_arrays(q: GaussInt, re: np.ndarray, im: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Residue keys (u, v) of x = re + i*im for use with tau_lookup."""
    nq = q.norm
    u = (re * q.re - im * q.im) % nq
    v = (re * q.im + im * q.re) % nq
    return u, v


def canonical_moduli(norm_lo: int, norm_hi: int) -> list[GaussInt]:
    """All canonical z with norm_lo <= N(z) < norm_hi, sorted by (norm, re)."""
    out = []
    amax = math.isqrt(max(0, norm_hi - 1))
    for a in range(1, amax + 1):
        for b in range(0, amax + 1):
            n = a * a + b * b
            if norm_lo <= n < norm_hi:
                out.append(GaussInt(a, b))
    out.sort(key=lambda z: (z.norm, z.re, z.im))
    return out


def bourgain_moment(table: ArithmeticTable, n_bound: int, q_bound: int, k: int) -> float:
    """The k-th moment of the absolute Ramanujan sums over small moduli:

        mean over N(x) < N of [ sum_{2 <= N(q) < Q} |tau_q(x)| ]^k.

    The inner sum runs over canonical moduli with 2 <= N(q) < Q and is
    accumulated in exact integer arithmetic via residue-class lookups;
    only the final power and average are floating point.  When the only
    modulus in range is 1+i the moment is exactly 1.
    """
    if k < 1 or k > 8:
        raise ValueError("moment order k must be in [1, 8]")
    if q_bound > table.n_max:
        from .errors import CapacityError

        raise CapacityError(
            f"q norm bound {q_bound} exceeds table capacity {table.n_max}"
        )
    w = math.isqrt(max(0, n_bound - 1))
    a = np.arange(-w, w + 1, dtype=np.int64)
    re, im = np.meshgrid(a, a, indexing="ij")
    inside = (re * re + im * im) < n_bound
    re = re[inside]
    im = im[inside]
    acc = np.zeros(re.shape, dtype=np.int64)
    for q in canonical_moduli(2, q_bound):
        lut = np.abs(tau_lookup(q, table))
        u, v = tau_key_arrays(q, re, im)
        acc += lut[u, v]
    return float(np.mean(acc.astype(float) ** k))
