"""Residue boxes modulo a Gaussian integer and the finite Fourier transform.

The box B_q is the half-open fundamental square spanned by q and iq:

    B_q = { r in Z[i] : 0 <= <r, q> < N(q), 0 <= <r, iq> < N(q) },

a complete residue system mod q with exactly N(q) points.  Characters on
the quotient are indexed by a residue system mod conj(q), and every
phase that appears is an exact N(q)-th root of unity: for x and n,

    <x, n/q> = Re(x * conj(n) * q) / N(q),

an integer over N(q).  The transform below exploits that, summing from a
precomputed root table rather than accumulating float phases.  The
transform is direct O(N(q)^2) summation by design; moduli of interest
stay small.
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache

import numpy as np

from .core import GaussInt, divide_into_box, gcd

__all__ = ["ResidueBox", "build_box", "dft", "inverse_dft", "orthogonality_sum"]


class ResidueBox:
    """The fundamental box B_q with its reduced residues and lookups."""

    def __init__(self, q: GaussInt):
        if not q:
            raise ValueError("box modulus must be nonzero")
        self.q = q
        self.norm = q.norm
        self.points = _enumerate_box(q)
        self.index = {(r.re, r.im): i for i, r in enumerate(self.points)}
        if len(self.points) != self.norm:
            raise AssertionError(
                f"box for {q} has {len(self.points)} points, expected {self.norm}"
            )

    @cached_property
    def reduced(self) -> list[GaussInt]:
        """The reduced residues A_q = { r in B_q : gcd(r, q) is a unit }."""
        return [r for r in self.points if gcd(r, self.q).is_unit()]

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Point coordinates as a pair of int64 arrays (re, im)."""
        re = np.array([p.re for p in self.points], dtype=np.int64)
        im = np.array([p.im for p in self.points], dtype=np.int64)
        return re, im

    @cached_property
    def reduced_coords(self) -> tuple[np.ndarray, np.ndarray]:
        re = np.array([p.re for p in self.reduced], dtype=np.int64)
        im = np.array([p.im for p in self.reduced], dtype=np.int64)
        return re, im

    @cached_property
    def root_table(self) -> np.ndarray:
        """e(+k / N(q)) for k = 0 .. N(q)-1."""
        return np.exp(2j * np.pi * np.arange(self.norm) / self.norm)

    @cached_property
    def conjugate_box(self) -> "ResidueBox":
        return build_box(self.q.conj())

    def reduce(self, x: GaussInt) -> GaussInt:
        """The unique box representative congruent to x mod q."""
        return divide_into_box(x, self.q)[1]

    def position(self, x: GaussInt) -> int:
        r = self.reduce(x)
        return self.index[(r.re, r.im)]

    def __len__(self) -> int:
        return self.norm

    def __repr__(self) -> str:
        return f"ResidueBox(q={self.q}, size={self.norm})"


@lru_cache(maxsize=4096)
def _cached_box(qre: int, qim: int) -> ResidueBox:
    return ResidueBox(GaussInt(qre, qim))


def build_box(q: GaussInt) -> ResidueBox:
    """The box for q, cached: moduli recur heavily across identity scans."""
    return _cached_box(q.re, q.im)


def _enumerate_box(q: GaussInt) -> list[GaussInt]:
    """Scan a bounding square for the N(q) box points.

    Points are ordered lexicographically by (<r, q>, <r, iq>), which is
    deterministic and matches the (u, v) coordinates of r*conj(q).
    """
    n = q.norm
    c = math.isqrt(2 * n) + 1
    found: list[tuple[int, int, GaussInt]] = []
    for a in range(-c, c + 1):
        for b in range(-c, c + 1):
            u = a * q.re + b * q.im
            if not 0 <= u < n:
                continue
            v = -a * q.im + b * q.re
            if not 0 <= v < n:
                continue
            found.append((u, v, GaussInt(a, b)))
    found.sort(key=lambda t: (t[0], t[1]))
    return [r for _, _, r in found]


def _root_table(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * k / n)


def _phase_matrix(rows: list[GaussInt], cols: list[GaussInt], q: GaussInt) -> np.ndarray:
    """Matrix of e(-<x, n/q>) for x in rows, n in cols, via exact phases.

    <x, n/q> = Re(x * conj(n) * q)/N(q); the numerator is assembled with
    integer arithmetic and reduced mod N(q) before touching floats.
    """
    nq = q.norm
    xr = np.array([x.re for x in rows], dtype=np.int64)[:, None]
    xi = np.array([x.im for x in rows], dtype=np.int64)[:, None]
    nr = np.array([n.re for n in cols], dtype=np.int64)[None, :]
    ni = np.array([n.im for n in cols], dtype=np.int64)[None, :]
    # Re(x * conj(n) * q) with x = xr + i xi, n = nr + i ni, q = qr + i qi
    qr, qi = q.re, q.im
    re_xn = xr * nr + xi * ni
    im_xn = xi * nr - xr * ni
    k = (re_xn * qr - im_xn * qi) % nq
    return _root_table(nq)[k]


def dft(box: ResidueBox, values: np.ndarray) -> np.ndarray:
    """Finite Fourier transform of a function on B_q.

    values[i] corresponds to box.points[i]; the output is indexed by the
    points of the conjugate box (the residue system mod conj(q)), in their
    own lexicographic order:

        F(x) = sum over n in B_q of f(n) e(-<x, n/q>).
    """
    values = np.asarray(values, dtype=complex)
    if values.shape[-1] != box.norm:
        raise ValueError("value vector length must equal N(q)")
    mat = _phase_matrix(box.conjugate_box.points, box.points, box.q)
    return values @ mat.T


def inverse_dft(box: ResidueBox, transformed: np.ndarray) -> np.ndarray:
    """Inverse of dft: recovers f on B_q from values on the conjugate box.

        f(n) = (1/N(q)) sum over x of F(x) e(+<x, n/q>).
    """
    transformed = np.asarray(transformed, dtype=complex)
    if transformed.shape[-1] != box.norm:
        raise ValueError("value vector length must equal N(q)")
    mat = _phase_matrix(box.conjugate_box.points, box.points, box.q)
    return (transformed @ np.conj(mat)) / box.norm


def orthogonality_sum(q: GaussInt, n: GaussInt, d: GaussInt | None = None) -> complex:
    """The character sum over the box: sum_{r in B_q} e(<r, n/conj(d)>).

    With d = q (the default) this is N(q) when conj(q) divides n and 0
    otherwise; the divisor variant takes any d dividing q.
    """
    if d is None:
        d = q
    box = build_box(q)
    nd = d.norm
    k = np.empty(len(box.points), dtype=np.int64)
    for i, r in enumerate(box.points):
        # <r, n/conj(d)> = Re(r * conj(n) * conj(d)) / N(d)
        w = r * n.conj() * d.conj()
        k[i] = w.re % nd
    roots = np.exp(2j * np.pi * np.arange(nd) / nd)
    return complex(roots[k].sum())
