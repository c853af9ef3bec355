"""Angular sectors and the lattice measures living on them.

Two measures drive everything downstream, both stored as dense arrays
over the square [-W, W]^2 with W = isqrt(N-1):

    M (plain average):   weight |w|/(2 pi N) at each nonzero lattice
                         point with norm < N and argument in the sector;
    A (prime-weighted):  weight (2 pi / (|w| N)) Lambda(n) at the same
                         points, with Lambda the Gaussian von Mangoldt
                         function.

Here |w| is the arc length of the sector.  Zero is excluded everywhere:
its argument is undefined and Lambda(0) = 0.  Convolutions are exact
linear convolutions (zero-padded FFT, no wraparound), so an order-k
auto-convolution of a width-W array lives on [-kW, kW]^2.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

from .core import GaussInt, arg_angle
from .errors import CapacityError, ConfigError
from .tables import ArithmeticTable

__all__ = [
    "Sector",
    "full_sector",
    "make_sector",
    "LatticeArray",
    "ConvolutionResult",
    "build_M",
    "build_A",
    "convolve",
    "convolve_power",
    "exp_sum_M",
    "exp_sum_A",
    "sector_boundary_distance",
]

TWO_PI = 2.0 * math.pi

_GRID_MAGIC = b"GGLA"
_GRID_VERSION = 1


@dataclass(frozen=True)
class Sector:
    """Half-open arc [theta0, theta1) of directions, wraparound allowed.

    Endpoints are angles in [0, 2 pi).  theta1 == theta0 with
    full_circle set means the whole circle; otherwise the length is the
    counterclockwise distance from theta0 to theta1.
    """

    theta0: float
    theta1: float
    full_circle: bool = False

    def __post_init__(self) -> None:
        if not self.full_circle:
            if not (0.0 <= self.theta0 < TWO_PI and 0.0 <= self.theta1 <= TWO_PI):
                raise ConfigError("sector endpoints must lie in [0, 2*pi)")
            if self.length <= 0.0:
                raise ConfigError("sector must have positive length")

    @property
    def length(self) -> float:
        if self.full_circle:
            return TWO_PI
        d = (self.theta1 - self.theta0) % TWO_PI
        return d if d > 0.0 else TWO_PI

    def contains_angle(self, angle: float) -> bool:
        if self.full_circle:
            return True
        return (angle - self.theta0) % TWO_PI < self.length

    def contains(self, z: GaussInt) -> bool:
        return self.contains_angle(arg_angle(z))

    def boundary_distance_angle(self, angle: float) -> float:
        """Angular distance to the complement, 0 outside the sector."""
        if self.full_circle:
            return math.inf
        t = (angle - self.theta0) % TWO_PI
        if t >= self.length:
            return 0.0
        return min(t, self.length - t)

    def mask(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Vectorized membership for nonzero lattice points."""
        if self.full_circle:
            return np.ones(re.shape, dtype=bool)
        ang = np.arctan2(im, re) % TWO_PI
        return (ang - self.theta0) % TWO_PI < self.length


def full_sector() -> Sector:
    return Sector(0.0, 0.0, full_circle=True)


def make_sector(theta0: float, theta1: float) -> Sector:
    return Sector(theta0 % TWO_PI, theta1 % TWO_PI if theta1 != TWO_PI else TWO_PI)


def sector_boundary_distance(sector: Sector, z: GaussInt) -> float:
    """dist(arg(z), complement of the sector); +inf for the full circle."""
    return sector.boundary_distance_angle(arg_angle(z))


# -- lattice arrays -----------------------------------------------------


class LatticeArray:
    """Real values on the integer square [-W, W]^2.

    values[i, j] corresponds to the point (i - W) + (j - W) i.
    """

    def __init__(self, half_width: int, values: np.ndarray):
        side = 2 * half_width + 1
        if values.shape != (side, side):
            raise ValueError(
                f"array shape {values.shape} does not match half_width {half_width}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("lattice array must be finite")
        self.half_width = half_width
        self.values = values

    def value_at(self, z: GaussInt) -> float:
        w = self.half_width
        if abs(z.re) > w or abs(z.im) > w:
            return 0.0
        return float(self.values[z.re + w, z.im + w])

    def total_mass(self) -> float:
        return float(self.values.sum())

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid of (re, im) coordinates matching self.values."""
        side = np.arange(-self.half_width, self.half_width + 1)
        return np.meshgrid(side, side, indexing="ij")

    def write_csv(self, path: str | Path, include_zeros: bool = False) -> None:
        """Rows of (re, im, value), skipping zero cells unless asked."""
        w = self.half_width
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["re", "im", "value"])
            for i in range(2 * w + 1):
                row = self.values[i]
                for j in np.nonzero(row)[0] if not include_zeros else range(2 * w + 1):
                    out.writerow([i - w, int(j) - w, repr(float(row[j]))])

    def write_binary(self, path: str | Path) -> None:
        dtype = np.dtype(self.values.dtype).str.encode()
        header = struct.pack(
            "<4sII8s", _GRID_MAGIC, _GRID_VERSION, self.half_width, dtype.ljust(8)
        )
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.ascontiguousarray(self.values).tobytes())


def load_lattice_array(path: str | Path) -> LatticeArray:
    raw = Path(path).read_bytes()
    head = struct.calcsize("<4sII8s")
    if len(raw) < head:
        raise ConfigError(f"{path}: truncated lattice header")
    magic, version, half_width, dtype_raw = struct.unpack("<4sII8s", raw[:head])
    if magic != _GRID_MAGIC:
        raise ConfigError(f"{path}: not a lattice dump (magic {magic!r})")
    if version != _GRID_VERSION:
        raise ConfigError(f"{path}: lattice dump version {version}")
    dtype = np.dtype(dtype_raw.rstrip(b"\0 ").decode())
    side = 2 * half_width + 1
    expect = head + side * side * dtype.itemsize
    if len(raw) != expect:
        raise ConfigError(f"{path}: payload is {len(raw)} bytes, expected {expect}")
    values = np.frombuffer(raw, dtype=dtype, offset=head).reshape(side, side).copy()
    return LatticeArray(half_width, values)


@dataclass
class ConvolutionResult:
    """An auto-convolution along with the normalization it carries."""

    order: int
    values: LatticeArray
    normalization: dict


def _lattice_frame(table: ArithmeticTable, n_bound: int):
    if n_bound > table.n_max:
        raise CapacityError(
            f"norm bound {n_bound} exceeds table capacity {table.n_max}"
        )
    w = math.isqrt(max(0, n_bound - 1))
    side = np.arange(-w, w + 1, dtype=np.int64)
    re, im = np.meshgrid(side, side, indexing="ij")
    inside = (re * re + im * im < n_bound) & ((re != 0) | (im != 0))
    return w, re, im, inside


def build_M(table: ArithmeticTable, n_bound: int, sector: Sector) -> LatticeArray:
    """The averaged sector measure: |w|/(2 pi N) per qualifying point."""
    w, re, im, inside = _lattice_frame(table, n_bound)
    mask = inside & sector.mask(re, im)
    values = np.zeros(re.shape, dtype=float)
    values[mask] = sector.length / (TWO_PI * n_bound)
    return LatticeArray(w, values)


def build_A(table: ArithmeticTable, n_bound: int, sector: Sector) -> LatticeArray:
    """The Lambda-weighted sector measure: (2 pi / (|w| N)) Lambda(n)."""
    w, re, im, inside = _lattice_frame(table, n_bound)
    mask = inside & sector.mask(re, im)
    lam = table.lam[np.abs(re), np.abs(im)]
    values = np.where(mask, lam, 0.0) * (TWO_PI / (sector.length * n_bound))
    return LatticeArray(w, values)


def convolve(a: LatticeArray, b: LatticeArray) -> LatticeArray:
    """Exact linear convolution; the supports add, so widths add."""
    out = fftconvolve(a.values, b.values, mode="full")
    return LatticeArray(a.half_width + b.half_width, out)


def convolve_power(measure: LatticeArray, order: int, normalization: dict | None = None) -> ConvolutionResult:
    """order-fold auto-convolution of a measure (order 2 or 3)."""
    if order not in (2, 3):
        raise ValueError("convolution order must be 2 or 3")
    out = convolve(measure, measure)
    if order == 3:
        out = convolve(out, measure)
    return ConvolutionResult(order, out, dict(normalization or {}))


def exp_sum_M(table: ArithmeticTable, n_bound: int, sector: Sector, beta: complex) -> complex:
    """(|w|/(2 pi N)) sum over the sector lattice of e(-<n, beta>).

    At beta = 0 this is the total mass of build_M.  Direct summation.
    """
    _, re, im, inside = _lattice_frame(table, n_bound)
    mask = inside & sector.mask(re, im)
    phase = re[mask] * beta.real + im[mask] * beta.imag
    total = np.exp(-2j * np.pi * phase).sum()
    return complex(total * sector.length / (TWO_PI * n_bound))


def exp_sum_A(table: ArithmeticTable, n_bound: int, sector: Sector, alpha: complex) -> complex:
    """sum over the sector lattice of Lambda(n) e(<n, alpha>), unnormalized.

    Direct summation; periodic in both coordinates of alpha mod 1.
    """
    _, re, im, inside = _lattice_frame(table, n_bound)
    mask = inside & sector.mask(re, im)
    lam = table.lam[np.abs(re[mask]), np.abs(im[mask])]
    phase = re[mask] * alpha.real + im[mask] * alpha.imag
    total = np.sum(lam * np.exp(2j * np.pi * phase))
    return complex(total)
