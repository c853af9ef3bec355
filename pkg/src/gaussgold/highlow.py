"""The High/Low multiplier decomposition on the frequency torus.

Grid functions sample the torus at xi = (j/m, k/m).  Because a lattice
exponential sum at a grid point only depends on the lattice coordinates
mod m, folding an array into an m x m block and applying an FFT gives
the exact transform values on the grid, for any m.

The Low part collects the major-arc peaks: for each modulus q in a
smoothness-limited set and each reduced residue a, the term

    Phi(a, conj(q)) * c * Mhat(xi - a/q) * window(xi - a/q)

with Phi(a, conj(q)) = mu(q)/phi(q), a tent window per axis, and the
density calibration c = Ahat(0)/Mhat(0) that matches the prime-weighted
mass to the plain mass (about 4/pi times (2 pi/|w|)^2).  Hi is the
remainder A_hat - Lo_hat; its sup norm decays as Q grows, which is the
quantitative heart of the decomposition.

The window half-width is w = min(Q^(2/3)/sqrt(N), 1/8).  Each peak of
Mhat has width comparable to 1/sqrt(N), so the window must be at least
that wide or the cutoff leaves the shoulder of the peak exposed; the
uncovered shoulder is about 4(N w^2)^(-3/4), and matching that to the
height 4/Q of the largest arc left out of the Low set gives the
exponent 2/3.  Windows of nearby arcs may then overlap at larger Q;
that is harmless, because the windowed terms model additive arc
contributions, not a partition of the torus.

The kernel-error route keeps the dyadic-shell form instead: moduli are
grouped by norm into shells 2^s <= N(q) < 2^(s+1) and each shell gets
the window eta(16^s xi), much narrower at deep shells, so the required
grid resolution grows like 16^s.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import GaussInt, RationalPoint
from .errors import ConfigError, ResolutionError
from .ramanujan import canonical_moduli, gauss_ratio, tau_divisor
from .residues import build_box
from .sectors import LatticeArray, Sector, build_A, build_M
from .tables import ArithmeticTable

__all__ = [
    "eta",
    "GridFunction",
    "grid_from_lattice",
    "build_M_hat",
    "build_A_hat",
    "density_calibration",
    "build_L",
    "build_Lo",
    "build_Hi",
    "lo_spatial",
    "kernel_error",
    "lo_moduli",
    "lo_half_width",
    "shell_moduli",
]

_GRID_MAGIC = b"GGGF"
_GRID_VERSION = 1


def centered_frac(t):
    """Reduce to the centered representative in [-1/2, 1/2)."""
    return (np.asarray(t, dtype=float) + 0.5) % 1.0 - 0.5


def eta(xi1, xi2=None) -> float | np.ndarray:
    """Tensor hat on the plane: product of max(0, 1 - |t|) per coordinate.

    Accepts a complex scalar or a pair of arrays.  No torus reduction is
    applied here; callers wrap their arguments first when the cutoff is
    used as a periodic window.
    """
    if xi2 is None:
        xi1, xi2 = xi1.real, xi1.imag
    a = np.maximum(0.0, 1.0 - np.abs(np.asarray(xi1, dtype=float)))
    b = np.maximum(0.0, 1.0 - np.abs(np.asarray(xi2, dtype=float)))
    out = a * b
    return out if out.shape else float(out)


@dataclass
class GridFunction:
    """Complex samples on the m x m torus grid, values[j, k] at (j/m, k/m)."""

    m: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (self.m, self.m):
            raise ValueError("grid shape mismatch")

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def at_origin(self) -> complex:
        return complex(self.values[0, 0])

    def write_binary(self, path: str | Path) -> None:
        header = struct.pack("<4sII", _GRID_MAGIC, _GRID_VERSION, self.m)
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(self.values, dtype=np.complex128).tobytes())

    def write_csv_abs(self, path: str | Path, stride: int = 1) -> None:
        """|value| per grid point, for plotting: columns xi1, xi2, abs.

        stride > 1 subsamples every stride-th row and column, keeping the
        file size manageable for large grids.
        """
        if stride < 1:
            raise ValueError("stride must be >= 1")
        idx = np.arange(0, self.m, stride)
        mag = np.abs(self.values[np.ix_(idx, idx)])
        xi1 = np.repeat(idx / self.m, idx.size)
        xi2 = np.tile(idx / self.m, idx.size)
        data = np.column_stack([xi1, xi2, mag.ravel()])
        np.savetxt(path, data, fmt="%.17g", delimiter=",",
                   header="xi1,xi2,abs_value", comments="")


def load_grid_function(path: str | Path) -> GridFunction:
    raw = Path(path).read_bytes()
    head = struct.calcsize("<4sII")
    if len(raw) < head:
        raise ConfigError(f"{path}: truncated grid header")
    magic, version, m = struct.unpack("<4sII", raw[:head])
    if magic != _GRID_MAGIC:
        raise ConfigError(f"{path}: not a grid dump (magic {magic!r})")
    if version != _GRID_VERSION:
        raise ConfigError(f"{path}: grid dump version {version}")
    expect = head + m * m * 16
    if len(raw) != expect:
        raise ConfigError(f"{path}: payload is {len(raw)} bytes, expected {expect}")
    values = np.frombuffer(raw, dtype=np.complex128, offset=head).reshape(m, m).copy()
    return GridFunction(m, values)


def _fold(weights: np.ndarray, half_width: int, m: int) -> np.ndarray:
    """Fold a lattice-indexed array into residues mod m (exact aliasing)."""
    w = half_width
    side = np.arange(-w, w + 1)
    folded = np.zeros((m, m), dtype=complex)
    rows = side % m
    cols = side % m
    # accumulate row blocks; distinct residues collide only when 2w+1 > m
    np.add.at(folded, (rows[:, None], cols[None, :]), weights)
    return folded


def grid_from_lattice(arr: LatticeArray, m: int, twist: tuple[int, int, int] | None = None) -> GridFunction:
    """Exact grid transform sum_n f(n) e(-<n, xi>) at xi = (j/m, k/m).

    twist = (u, v, d) multiplies f by e(+(n1 u + n2 v)/d) first, which
    shifts the transform to xi - (u/d, v/d) without losing exactness.
    """
    w = arr.half_width
    side = np.arange(-w, w + 1)
    weights = arr.values.astype(complex)
    if twist is not None:
        u, v, d = twist
        tw1 = np.exp(2j * np.pi * ((side * u) % d) / d)
        tw2 = np.exp(2j * np.pi * ((side * v) % d) / d)
        weights = weights * tw1[:, None] * tw2[None, :]
    return GridFunction(m, np.fft.fft2(_fold(weights, w, m)))


def build_M_hat(table: ArithmeticTable, n_bound: int, sector: Sector, grid_m: int) -> GridFunction:
    """Grid transform of the plain sector measure M."""
    return grid_from_lattice(build_M(table, n_bound, sector), grid_m)


def build_A_hat(table: ArithmeticTable, n_bound: int, sector: Sector, grid_m: int) -> GridFunction:
    """Grid transform of the Lambda-weighted sector measure A."""
    return grid_from_lattice(build_A(table, n_bound, sector), grid_m)


def density_calibration(table: ArithmeticTable, n_bound: int, sector: Sector) -> float:
    """The ratio Ahat(0)/Mhat(0) of total masses.

    The prime-weighted measure carries about 4/pi times the mass of the
    plain one (up to the sector normalizations); multiplying Mhat by
    this ratio makes the Low part match A at the major arcs.
    """
    a_mass = build_A(table, n_bound, sector).total_mass()
    m_mass = build_M(table, n_bound, sector).total_mass()
    if m_mass == 0.0:
        raise ConfigError("sector contains no lattice points; cannot calibrate")
    return a_mass / m_mass


def _torus_shift(aq_a: GaussInt, aq_q: GaussInt) -> tuple[int, int, int]:
    """a/q as exact torus coordinates (u/d, v/d) with d = N(q)."""
    w = aq_a * aq_q.conj()
    return w.re, w.im, aq_q.norm


def _accumulate_peak(total: np.ndarray, marr: LatticeArray, grid_m: int,
                     u: int, v: int, d: int, amp: float, half_width: float) -> None:
    """Add amp * Mhat(xi - a/q) * tent((xi - a/q)/w) to the grid in place.

    The tent is the separable window max(0, 1 - |t|/w) per axis, centered
    at a/q = (u/d, v/d).  Off the window support nothing changes, so the
    transform is evaluated directly on the support patch with two small
    DFT matrices instead of a full-grid FFT; only a window wide enough to
    wrap the torus falls back to the folded-FFT route.
    """
    m = grid_m
    j = np.arange(m)
    t1 = centered_frac(j / m - u / d)
    t2 = centered_frac(j / m - v / d)
    rows = np.nonzero(np.abs(t1) < half_width)[0]
    cols = np.nonzero(np.abs(t2) < half_width)[0]
    if rows.size == 0 or cols.size == 0:
        return
    win1 = 1.0 - np.abs(t1[rows]) / half_width
    win2 = 1.0 - np.abs(t2[cols]) / half_width
    if rows.size < m or cols.size < m:
        side = np.arange(-marr.half_width, marr.half_width + 1)
        e1 = np.exp(-2j * np.pi * np.outer(side, t1[rows]))
        e2 = np.exp(-2j * np.pi * np.outer(side, t2[cols]))
        patch = e1.T @ (marr.values @ e2)
        total[np.ix_(rows, cols)] += amp * patch * np.outer(win1, win2)
    else:
        shifted = grid_from_lattice(marr, m, twist=(u, v, d))
        total += amp * shifted.values * np.outer(win1, win2)


def build_L(table: ArithmeticTable, n_bound: int, sector: Sector, aq: RationalPoint, grid_m: int) -> GridFunction:
    """The single-point approximating multiplier on the grid:

        Lhat(xi) = Phi(a, conj(q)) * Mhat(xi - a/q),

    no window and no calibration; the q = 1 case reduces to Mhat itself.
    """
    phi_ratio = float(gauss_ratio(aq.a, aq.q.conj(), table))
    marr = build_M(table, n_bound, sector)
    shifted = grid_from_lattice(marr, grid_m, twist=_torus_shift(aq.a, aq.q))
    return GridFunction(grid_m, phi_ratio * shifted.values)


def lo_half_width(q_bound: int, n_bound: int) -> float:
    # one window scale for the whole Low part; see the module docstring
    return min(q_bound ** (2.0 / 3.0) / math.sqrt(n_bound), 0.125)


def lo_required_m(q_bound: int, n_bound: int) -> int:
    # at least four grid samples across each window
    return int(math.ceil(2.0 / lo_half_width(q_bound, n_bound)))


def lo_moduli(table: ArithmeticTable, q_bound: int) -> list[GaussInt]:
    """The Low moduli: square-free products of primes of norm < Q,
    capped at N(q) <= 4Q.  Includes q = 1."""
    return table.smooth_moduli(q_bound, norm_cap=4 * q_bound)


def _check_lo_resolution(grid_m: int, q_bound: int, n_bound: int) -> None:
    need = lo_required_m(q_bound, n_bound)
    if grid_m < need:
        raise ResolutionError(
            f"grid m={grid_m} cannot resolve the Low windows at Q={q_bound}, "
            f"N={n_bound}; need m >= {need}",
            required_m=need,
        )


def build_Lo(table: ArithmeticTable, n_bound: int, sector: Sector, q_bound: int, grid_m: int) -> GridFunction:
    """The Low multiplier: calibrated, windowed major-arc peaks."""
    _check_lo_resolution(grid_m, q_bound, n_bound)
    c = density_calibration(table, n_bound, sector)
    w = lo_half_width(q_bound, n_bound)
    marr = build_M(table, n_bound, sector)
    total = np.zeros((grid_m, grid_m), dtype=complex)
    for q in lo_moduli(table, q_bound):
        for a in build_box(q).reduced:
            phi_ratio = float(gauss_ratio(a, q.conj(), table))
            if phi_ratio == 0.0:
                continue
            u, v, d = _torus_shift(a, q)
            _accumulate_peak(total, marr, grid_m, u, v, d, c * phi_ratio, w)
    return GridFunction(grid_m, total)


def build_Hi(table: ArithmeticTable, n_bound: int, sector: Sector, q_bound: int, grid_m: int) -> GridFunction:
    """Hi = Ahat - Lo_hat on the grid (Ahat carries the 2 pi/(|w| N) scale)."""
    lo = build_Lo(table, n_bound, sector, q_bound, grid_m)
    a_hat = build_A_hat(table, n_bound, sector, grid_m)
    return GridFunction(grid_m, a_hat.values - lo.values)


def _fejer(t: np.ndarray, half_width: float) -> np.ndarray:
    """Inverse transform of the tent of the given half-width, per axis.

    Non-negative (the square makes it a Fejer-type kernel), mass 1.
    """
    return half_width * np.sinc(half_width * t) ** 2


def lo_spatial(table: ArithmeticTable, n_bound: int, sector: Sector, q_bound: int, x: GaussInt) -> float:
    """Spatial-side evaluation of the Low part at a lattice point:

        Lo(x) = c * (M conv fejer)(x) * sum_q mu(q) tau_q(x) / phi(q),

    the q-sum over the same moduli as build_Lo.  The window transform
    collapses the double (a, q) sum to the Ramanujan factor, since
    sum_{a in A_q} tau_conj(q)(a) e(<x, a/q>) = mu(q) tau_q(x).
    """
    c = density_calibration(table, n_bound, sector)
    w = lo_half_width(q_bound, n_bound)
    marr = build_M(table, n_bound, sector)
    re, im = marr.coords()
    mask = marr.values != 0.0
    ker = _fejer(x.re - re[mask], w) * _fejer(x.im - im[mask], w)
    smoothed = float(np.sum(marr.values[mask] * ker))
    arith = 0.0
    for q in lo_moduli(table, q_bound):
        arith += table.mu(q) * tau_divisor(q, x, table) / table.phi(q)
    return c * smoothed * arith


# -- dyadic-shell kernel approximation ----------------------------------


def shell_moduli(s: int) -> list[GaussInt]:
    """Canonical moduli in the dyadic norm shell 2^s <= N(q) < 2^(s+1)."""
    if s == 0:
        return [GaussInt(1, 0)]
    return canonical_moduli(2 ** s, 2 ** (s + 1))


def kernel_error(table: ArithmeticTable, n_bound: int, sector: Sector, grid_m: int, s_max: int) -> float:
    """sup over the grid of |Ahat - Bhat| for the shell approximation

        Bhat(xi) = sum_{s <= s_max} sum_{q in shell s} sum_{a in A_q}
                   c * Phi(a, conj(q)) * Mhat(xi - a/q) * eta(16^s (xi - a/q)).

    Moduli with mu(q) = 0 contribute nothing (their Gauss ratio
    vanishes) and are skipped.
    """
    need = 4 * 16 ** s_max
    if grid_m < need:
        raise ResolutionError(
            f"grid m={grid_m} cannot resolve shell s={s_max}; need m >= {need}",
            required_m=need,
        )
    c = density_calibration(table, n_bound, sector)
    marr = build_M(table, n_bound, sector)
    total = np.zeros((grid_m, grid_m), dtype=complex)
    for s in range(s_max + 1):
        # eta(16^s t) is the tent of half-width 16^-s
        width = 16.0 ** (-s)
        for q in shell_moduli(s):
            if table.mu(q) == 0:
                continue
            for a in build_box(q).reduced:
                phi_ratio = float(gauss_ratio(a, q.conj(), table))
                if phi_ratio == 0.0:
                    continue
                u, v, d = _torus_shift(a, q)
                _accumulate_peak(total, marr, grid_m, u, v, d, c * phi_ratio, width)
    a_hat = build_A_hat(table, n_bound, sector, grid_m)
    return float(np.max(np.abs(a_hat.values - total)))
