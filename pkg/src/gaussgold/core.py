"""Exact arithmetic in the ring of Gaussian integers.

Elements are pairs of plain Python integers, so all ring operations are
exact at any size (arbitrary precision stands in for checked 64-bit
arithmetic: wide values widen, they never wrap).

The geometric conventions used throughout the package live here as well:
the real pairing <z, w> = Re(z)Re(w) + Im(z)Im(w), the canonical
first-quadrant associate, and division with remainder landing in the
fundamental square spanned by q and iq.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "GaussInt",
    "ZERO",
    "ONE",
    "I",
    "UNITS",
    "RationalPoint",
    "pairing",
    "pairing_int",
    "divide_into_box",
    "gcd",
    "arg_angle",
]


@dataclass(frozen=True)
class GaussInt:
    """A Gaussian integer re + im*i with exact integer coordinates."""

    re: int
    im: int

    def __post_init__(self) -> None:
        if not isinstance(self.re, int) or not isinstance(self.im, int):
            raise TypeError("GaussInt coordinates must be plain ints")

    # -- ring structure -------------------------------------------------

    def __add__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other: "GaussInt") -> "GaussInt":
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussInt(a * c - b * d, a * d + b * c)

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    @property
    def norm(self) -> int:
        """N(z) = re^2 + im^2, exact and non-negative."""
        return self.re * self.re + self.im * self.im

    # -- units and associates -------------------------------------------

    def is_unit(self) -> bool:
        return self.norm == 1

    def canonical(self) -> "GaussInt":
        """The unique associate with re > 0 and im >= 0 (zero maps to zero).

        Exactly one of z, iz, -z, -iz lands in the closed-open first
        quadrant, which makes this a canonical representative of the
        associate class.
        """
        a, b = self.re, self.im
        if a == 0 and b == 0:
            return self
        if a > 0 and b >= 0:
            return self
        if b > 0 and a <= 0:          # multiply by -i
            return GaussInt(b, -a)
        if a < 0 and b <= 0:          # multiply by -1
            return GaussInt(-a, -b)
        return GaussInt(-b, a)        # multiply by i

    def unit_to_canonical(self) -> "GaussInt":
        """The unit u with u * z == z.canonical()."""
        a, b = self.re, self.im
        if (a == 0 and b == 0) or (a > 0 and b >= 0):
            return ONE
        if b > 0 and a <= 0:
            return GaussInt(0, -1)
        if a < 0 and b <= 0:
            return GaussInt(-1, 0)
        return I

    def is_even(self) -> bool:
        """True when (1+i) divides z, equivalently re + im is even."""
        return (self.re + self.im) % 2 == 0

    # -- conversions ----------------------------------------------------

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return f"({self.re}{self.im:+d}i)"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))


def pairing(z: complex, w: complex) -> float:
    """Real inner product <z, w> = Re(z)Re(w) + Im(z)Im(w).

    Identical to Re(z * conj(w)); the norm is recovered on the diagonal.
    Accepts anything with .real/.imag, so GaussInt values should be passed
    through to_complex() or to pairing_int below.
    """
    return z.real * w.real + z.imag * w.imag


def pairing_int(z: GaussInt, w: GaussInt) -> int:
    """Exact integer pairing of two Gaussian integers."""
    return z.re * w.re + z.im * w.im


def divide_into_box(x: GaussInt, q: GaussInt) -> tuple[GaussInt, GaussInt]:
    """Divide x by q != 0 with the remainder in the fundamental box of q.

    The box B_q is the half-open square

        B_q = { r : 0 <= <r, q> < N(q), 0 <= <r, iq> < N(q) },

    a complete residue system mod q with exactly N(q) points.  Writing
    x * conj(q) = U + iV, the quotient is (floor(U/N(q)), floor(V/N(q)))
    and the remainder x - quotient * q then satisfies both inequalities.

    Returns (quotient, remainder) with x == quotient * q + remainder.
    """
    if not q:
        raise ZeroDivisionError("division by zero Gaussian integer")
    n = q.norm
    w = x * q.conj()
    quot = GaussInt(w.re // n, w.im // n)
    rem = x - quot * q
    return quot, rem


def in_box(r: GaussInt, q: GaussInt) -> bool:
    """Membership test for the fundamental box B_q."""
    n = q.norm
    u = pairing_int(r, q)
    v = pairing_int(r, GaussInt(-q.im, q.re))
    return 0 <= u < n and 0 <= v < n


def gcd(a: GaussInt, b: GaussInt) -> GaussInt:
    """Greatest common divisor, returned as a canonical associate.

    Euclidean algorithm with nearest-rounding division, so the remainder
    norm is at most half the divisor norm and descent is guaranteed (the
    box remainder of divide_into_box can be larger than the divisor and
    must not be used here).  gcd(0, 0) = 0.  The loop runs on bare
    integer pairs: this sits inside reduced-residue scans.
    """
    ar, ai, br, bi = a.re, a.im, b.re, b.im
    while br or bi:
        n = br * br + bi * bi
        # round-half-up of w/n done in integers, w = a * conj(b)
        qr = (2 * (ar * br + ai * bi) + n) // (2 * n)
        qi = (2 * (ai * br - ar * bi) + n) // (2 * n)
        ar, ai, br, bi = br, bi, ar - qr * br + qi * bi, ai - qr * bi - qi * br
    return GaussInt(ar, ai).canonical()


def is_coprime(a: GaussInt, b: GaussInt) -> bool:
    return gcd(a, b).is_unit()


def exact_divide(x: GaussInt, d: GaussInt) -> GaussInt | None:
    """x / d when d divides x exactly, else None."""
    if not d:
        return None
    n = d.norm
    w = x * d.conj()
    if w.re % n or w.im % n:
        return None
    return GaussInt(w.re // n, w.im // n)


def arg_angle(z: GaussInt | complex) -> float:
    """Argument of a nonzero point, reduced to [0, 2*pi)."""
    if isinstance(z, GaussInt):
        if not z:
            raise ValueError("argument of zero is undefined")
        a = math.atan2(z.im, z.re)
    else:
        if z == 0:
            raise ValueError("argument of zero is undefined")
        a = math.atan2(z.imag, z.real)
    return a % (2.0 * math.pi)


@dataclass(frozen=True)
class RationalPoint:
    """A reduced rational point a/q on the torus, with a in B_q.

    These index the major arcs: the torus coordinates are the components
    of a * conj(q) / N(q), each a rational with denominator N(q).
    """

    a: GaussInt
    q: GaussInt

    def __post_init__(self) -> None:
        if not self.q:
            raise ValueError("rational point needs q != 0")
        if not gcd(self.a, self.q).is_unit():
            raise ValueError("rational point must be reduced: gcd(a, q) not a unit")
        if not in_box(self.a, self.q):
            raise ValueError("numerator must lie in the fundamental box of q")

    def to_complex(self) -> complex:
        n = self.q.norm
        w = self.a * self.q.conj()
        return complex(w.re / n, w.im / n)

    def torus_coords(self) -> tuple[float, float]:
        c = self.to_complex()
        return c.real % 1.0, c.imag % 1.0
