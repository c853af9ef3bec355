"""Goldbach-type representation machinery over the Gaussian integers.

Singular series, main terms, and full representation scans.  A target n
is "represented" (binary) when n = p1 + p2 with both summands Gaussian
primes, optionally restricted to a sector; the ternary variant uses
three summands.  Scans count representations for every target at once
with FFT convolutions of the prime indicator and then re-verify every
flagged target exactly in integers, so reported exceptions are never
FFT artifacts.

The singular series is the arithmetic product over Gaussian primes rho
with N(rho) < Q:

    order 2:  prod (1 + tau_rho(x) / phi(rho)^2)
    order 3:  prod (1 + mu(rho) tau_rho(x) / phi(rho)^3)

For prime rho, tau_rho(x) is phi(rho) when rho divides conj(x) and -1
otherwise, which makes the parity obstruction visible in the 1+i
factor: the order-2 series vanishes exactly on odd x, the order-3
series exactly on even x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .core import GaussInt
from .errors import CapacityError, ConfigError, InvariantViolation
from .sectors import LatticeArray, Sector, build_A, build_M, convolve_power, sector_boundary_distance
from .tables import ArithmeticTable

__all__ = [
    "singular_series",
    "singular_series_grid",
    "series_global",
    "series_sum_form",
    "main_term",
    "prime_indicator",
    "admissibility_cutoff",
    "is_admissible",
    "scan_binary",
    "scan_ternary",
    "compare_counts",
    "improving_check",
    "GoldbachReport",
    "ComparisonResult",
    "ImprovingResult",
]


# -- singular series ----------------------------------------------------


def _tau_prime(rho: GaussInt, x: GaussInt) -> int:
    """tau at a prime modulus: phi(rho) if rho | conj(x), else -1."""
    n = rho.norm
    # rho | conj(x)  <=>  conj(rho) | x; test x * rho == 0 mod N(rho)
    w = x * rho
    if w.re % n == 0 and w.im % n == 0:
        return n - 1
    return -1


def _series_factor(rho: GaussInt, tau: float, order: int) -> float:
    phi = rho.norm - 1
    if order == 2:
        return 1.0 + tau / phi**2
    # mu(rho) = -1 at every prime
    return 1.0 - tau / phi**3


def _check_order(order: int) -> None:
    if order not in (2, 3):
        raise ConfigError(f"series order must be 2 or 3, got {order}")


def singular_series(table: ArithmeticTable, order: int, q_bound: int, x: GaussInt) -> float:
    """The singular series at a single target, product over N(rho) < Q."""
    _check_order(order)
    out = 1.0
    for rho in table.gaussian_primes(q_bound):
        out *= _series_factor(rho, float(_tau_prime(rho, x)), order)
    return out


def singular_series_grid(table: ArithmeticTable, order: int, q_bound: int, half_width: int) -> np.ndarray:
    """Vectorized singular series on the square |re|, |im| <= half_width.

    Returns values indexed [re + half_width, im + half_width].  One
    divisibility mask per prime; the grid cost is independent of how
    many x are eventually read.
    """
    _check_order(order)
    side = np.arange(-half_width, half_width + 1)
    re, im = np.meshgrid(side, side, indexing="ij")
    out = np.ones(re.shape, dtype=float)
    for rho in table.gaussian_primes(q_bound):
        n = rho.norm
        phi = n - 1
        divides = (((re * rho.re - im * rho.im) % n) == 0) & (((re * rho.im + im * rho.re) % n) == 0)
        tau = np.where(divides, float(phi), -1.0)
        if order == 2:
            out *= 1.0 + tau / phi**2
        else:
            out *= 1.0 - tau / phi**3
    return out


def series_global(table: ArithmeticTable, q_bound: int) -> float:
    """The universal constant: product of 1 - 1/phi(rho)^2 over odd
    primes N(rho) < Q.  Both parities of the series stay >= twice this."""
    out = 1.0
    for rho in table.gaussian_primes(q_bound):
        if rho.norm == 2:
            continue
        out *= 1.0 - 1.0 / (rho.norm - 1) ** 2
    return out


def series_sum_form(table: ArithmeticTable, order: int, q_bound: int, x: GaussInt) -> float:
    """The singular series as a sum over square-free Q-smooth moduli q:

        order 2: sum_q tau_q(x) / phi(q)^2
        order 3: sum_q mu(q) tau_q(x) / phi(q)^3

    evaluated term by term over all 2^k smooth moduli (k primes below
    Q), using multiplicativity of tau to carry prime-level factors.
    Agrees with the product form by distributivity; the float sum is
    accumulated independently as a cross-check of the rearrangement.
    """
    _check_order(order)
    terms = np.ones(1)
    for rho in table.gaussian_primes(q_bound):
        phi = rho.norm - 1
        tau = float(_tau_prime(rho, x))
        v = tau / phi**2 if order == 2 else -tau / phi**3
        terms = np.concatenate([terms, terms * v])
    return float(np.sum(terms))


def main_term(
    table: ArithmeticTable,
    n_bound: int,
    sector: Sector,
    q_bound: int,
    x: GaussInt,
    order: int = 2,
    conv_values: np.ndarray | None = None,
) -> float:
    """Predicted representation weight: (M conv M [conv M])(x) times the
    singular series.  Pass conv_values (from convolve_power) to amortize
    the convolution across many targets."""
    _check_order(order)
    if conv_values is None:
        conv_values = convolve_power(build_M(table, n_bound, sector), order).values.values
    w = (conv_values.shape[0] - 1) // 2
    if abs(x.re) > w or abs(x.im) > w:
        raise CapacityError(f"target {x} outside the convolution range")
    kernel = float(conv_values[x.re + w, x.im + w])
    return kernel * singular_series(table, order, q_bound, x)


# -- representation scans -----------------------------------------------


def prime_indicator(
    table: ArithmeticTable, n_bound: int, sector: Sector, use_prime_powers: bool = False
) -> LatticeArray:
    """0/1 lattice array marking Gaussian primes with norm < N in the
    sector (all associates that lie in the sector, not one per class).
    use_prime_powers widens the support to unit multiples of rho^k."""
    if n_bound > table.n_max:
        raise CapacityError(f"n_bound {n_bound} exceeds table range {table.n_max}")
    w = math.isqrt(n_bound - 1)
    side = np.arange(-w, w + 1)
    re, im = np.meshgrid(side, side, indexing="ij")
    norm = re * re + im * im
    mask = (norm < n_bound) & (norm > 0) & sector.mask(re, im)
    if use_prime_powers:
        mask &= table.lam[np.abs(re), np.abs(im)] > 0.0
    else:
        mask &= table.prime_mask[np.abs(re), np.abs(im)]
    return LatticeArray(w, mask.astype(float))


def admissibility_cutoff(norm: int, form: str = "sqrt", C: float = 1.0, B: float = 10.0) -> float:
    """Boundary-distance cutoff below which a sector target is exempt.

    "logpow" is C (log N)^(-B/3); "sqrt" is C / sqrt(N).
    """
    if norm < 2:
        return math.inf
    if form == "logpow":
        return C * math.log(norm) ** (-B / 3.0)
    if form == "sqrt":
        return C / math.sqrt(norm)
    raise ConfigError(f"unknown admissibility form {form!r}")


def is_admissible(sector: Sector, z: GaussInt, form: str = "sqrt", C: float = 1.0, B: float = 10.0) -> bool:
    """Admissible = far enough from the sector boundary for its norm."""
    return sector_boundary_distance(sector, z) > admissibility_cutoff(z.norm, form, C, B)


@dataclass
class GoldbachReport:
    """Scan outcome for one configuration.

    counts are ordered-tuple representation counts.  exceptional holds
    targets with no representation, each re-verified exactly in integer
    arithmetic.  inadmissible_unrepresented lists sector targets that
    failed the admissibility cutoff and also lack representations; they
    are informational, not exceptions.  sampled_counts carries a seeded
    sample of (target, count) pairs for reporting.
    """

    order: int
    n_bound: int
    norm_lo: int
    norm_hi: int
    sector_theta: tuple[float, float] | None
    parity: str
    threshold: float
    max_count: int
    n_targets: int
    n_represented: int
    exceptional: list[tuple[int, int]]
    inadmissible_unrepresented: list[tuple[int, int]]
    histogram_edges: list[float]
    histogram_counts: list[int]
    sampled_counts: list[tuple[int, int, int]]
    admissibility: dict | None = None
    mean_count: float = 0.0
    # sector scans only: per boundary-distance band, (lo, hi, targets, exceptional)
    boundary_strata: list[tuple[float, float, int, int]] = field(default_factory=list)
    use_prime_powers: bool = False

    @property
    def exceptional_density(self) -> float:
        return len(self.exceptional) / self.n_targets if self.n_targets else 0.0


def _target_mask(re, im, norm, norm_lo, norm_hi, parity: str, sector: Sector | None):
    mask = (norm >= norm_lo) & (norm <= norm_hi)
    if parity == "even":
        mask &= (re + im) % 2 == 0
    elif parity == "odd":
        mask &= (re + im) % 2 == 1
    if sector is not None:
        mask &= sector.mask(re, im)
    return mask


def _histogram(counts: np.ndarray) -> tuple[list[float], list[int]]:
    top = max(1, int(counts.max()) if counts.size else 1)
    edges = [0.0, 1.0]
    while edges[-1] <= top:
        edges.append(edges[-1] * 2)
    freq, _ = np.histogram(counts, bins=edges)
    return edges, freq.astype(int).tolist()


def _sample_counts(re, im, counts, seed: int, k: int = 200) -> list[tuple[int, int, int]]:
    rng = np.random.default_rng(seed)
    if re.size == 0:
        return []
    idx = rng.choice(re.size, size=min(k, re.size), replace=False)
    return [(int(re[i]), int(im[i]), int(counts[i])) for i in sorted(idx.tolist())]


def _verify_binary(target: GaussInt, pmask: np.ndarray, w: int) -> int:
    """Exact ordered-pair count of target = p1 + p2 via mask gather."""
    rows, cols = np.nonzero(pmask)
    r2 = target.re - (rows - w)
    c2 = target.im - (cols - w)
    ok = (np.abs(r2) <= w) & (np.abs(c2) <= w)
    return int(pmask[r2[ok] + w, c2[ok] + w].sum())


def _verify_ternary(target: GaussInt, pmask: np.ndarray, pair_counts: np.ndarray, w: int) -> int:
    """Exact triple count: sum over primes p of pair_counts[target - p]."""
    pw = (pair_counts.shape[0] - 1) // 2
    rows, cols = np.nonzero(pmask)
    r2 = target.re - (rows - w)
    c2 = target.im - (cols - w)
    ok = (np.abs(r2) <= pw) & (np.abs(c2) <= pw)
    return int(pair_counts[r2[ok] + pw, c2[ok] + pw].sum())


def _flag_threshold(conv: np.ndarray) -> float:
    # anything below this is treated as an FFT zero and re-checked exactly
    return 1e-6 * float(conv.max())


def _boundary_dist_grid(sector: Sector, re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Vectorized boundary distance; 0 outside the sector."""
    ang = (np.arctan2(im, re)) % (2.0 * np.pi)
    t = (ang - sector.theta0) % (2.0 * np.pi)
    inside = t < sector.length
    return np.where(inside, np.minimum(t, sector.length - t), 0.0)


_STRATA_EDGES = (0.0, 0.0125, 0.025, 0.05, 0.1, 0.2)


def _boundary_strata(sector: Sector, tre, tim, bad: set[tuple[int, int]]):
    """Exceptional rate per boundary-distance band among sector targets."""
    dist = _boundary_dist_grid(sector, tre, tim)
    edges = [e for e in _STRATA_EDGES if e < sector.length / 2] + [sector.length / 2]
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        band = (dist >= lo) & (dist < hi)
        n_band = int(band.sum())
        n_bad = sum(1 for a, b in zip(tre[band], tim[band]) if (int(a), int(b)) in bad)
        out.append((float(lo), float(hi), n_band, n_bad))
    return out


def scan_binary(
    table: ArithmeticTable,
    n_bound: int,
    sector: Sector | None = None,
    norm_lo: int = 4,
    norm_hi: int | None = None,
    min_boundary_distance: float = 0.0,
    use_prime_powers: bool = False,
    seed: int = 0,
) -> GoldbachReport:
    """Count n = p1 + p2 for every even target with norm in range.

    With a sector, both primes and the target are restricted to it;
    targets closer than min_boundary_distance to the sector boundary
    are dropped from the target set, and the report carries exceptional
    rates stratified by boundary distance (no admissibility cutoff is
    imposed on the binary problem).
    """
    norm_hi = norm_hi if norm_hi is not None else n_bound
    psec = sector if sector is not None else Sector(0.0, 0.0, full_circle=True)
    parr = prime_indicator(table, n_bound, psec, use_prime_powers)
    w = parr.half_width
    conv = fftconvolve(parr.values, parr.values)
    cw = (conv.shape[0] - 1) // 2
    threshold = _flag_threshold(conv)

    side = np.arange(-cw, cw + 1)
    re, im = np.meshgrid(side, side, indexing="ij")
    norm = re * re + im * im
    tmask = _target_mask(re, im, norm, norm_lo, norm_hi, "even", sector)
    if min_boundary_distance > 0.0 and sector is not None:
        tmask &= _boundary_dist_grid(psec, re, im) > min_boundary_distance

    tre, tim = re[tmask], im[tmask]
    tcounts = conv[tmask]
    flagged = tcounts <= threshold
    exceptional: list[tuple[int, int]] = []
    for a, b in zip(tre[flagged], tim[flagged]):
        if _verify_binary(GaussInt(int(a), int(b)), parr.values.astype(bool), w) == 0:
            exceptional.append((int(a), int(b)))

    counts_int = np.rint(tcounts).astype(np.int64)
    edges, freq = _histogram(counts_int)
    strata = [] if sector is None else _boundary_strata(psec, tre, tim, set(exceptional))
    return GoldbachReport(
        order=2,
        n_bound=n_bound,
        norm_lo=norm_lo,
        norm_hi=norm_hi,
        sector_theta=None if sector is None else (psec.theta0, psec.theta1),
        parity="even",
        threshold=threshold,
        max_count=int(counts_int.max()) if counts_int.size else 0,
        n_targets=int(tre.size),
        n_represented=int(tre.size - len(exceptional)),
        exceptional=exceptional,
        inadmissible_unrepresented=[],
        histogram_edges=edges,
        histogram_counts=freq,
        sampled_counts=_sample_counts(tre, tim, counts_int, seed),
        mean_count=float(counts_int.mean()) if counts_int.size else 0.0,
        boundary_strata=strata,
        use_prime_powers=use_prime_powers,
    )


def scan_ternary(
    table: ArithmeticTable,
    n_bound: int,
    sector: Sector | None = None,
    norm_lo: int = 2,
    norm_hi: int | None = None,
    admissibility: dict | None = None,
    use_prime_powers: bool = False,
    seed: int = 0,
) -> GoldbachReport:
    """Count n = p1 + p2 + p3 for every odd target with norm in range.

    The pair convolution is rounded to exact integers first (the guard
    raises if FFT noise comes anywhere near 1/2), so the flagged-target
    verification is exact.  With a sector, admissibility splits the
    unrepresented targets: those below the boundary-distance cutoff are
    reported separately and do not count as exceptions.
    """
    norm_hi = norm_hi if norm_hi is not None else n_bound
    adm = {"form": "sqrt", "C": 1.0, "B": 10.0, **(admissibility or {})}
    psec = sector if sector is not None else Sector(0.0, 0.0, full_circle=True)
    parr = prime_indicator(table, n_bound, psec, use_prime_powers)
    w = parr.half_width
    pair = fftconvolve(parr.values, parr.values)
    drift = float(np.max(np.abs(pair - np.rint(pair))))
    if drift > 0.01:
        raise InvariantViolation("pair-convolution-integrality", f"FFT drift {drift}")
    pair = np.rint(pair)
    conv = fftconvolve(pair, parr.values)
    cw = (conv.shape[0] - 1) // 2
    threshold = _flag_threshold(conv)

    side = np.arange(-cw, cw + 1)
    re, im = np.meshgrid(side, side, indexing="ij")
    norm = re * re + im * im
    tmask = _target_mask(re, im, norm, norm_lo, norm_hi, "odd", sector)
    tre, tim = re[tmask], im[tmask]
    tcounts = conv[tmask]

    flagged = tcounts <= threshold
    pbool = parr.values.astype(bool)
    exceptional: list[tuple[int, int]] = []
    boundary: list[tuple[int, int]] = []
    for a, b in zip(tre[flagged], tim[flagged]):
        z = GaussInt(int(a), int(b))
        if _verify_ternary(z, pbool, pair, w) > 0:
            continue
        if sector is not None and not is_admissible(psec, z, **adm):
            boundary.append((z.re, z.im))
        else:
            exceptional.append((z.re, z.im))

    counts_int = np.rint(tcounts).astype(np.int64)
    edges, freq = _histogram(counts_int)
    bad = set(exceptional) | set(boundary)
    strata = [] if sector is None else _boundary_strata(psec, tre, tim, bad)
    return GoldbachReport(
        order=3,
        n_bound=n_bound,
        norm_lo=norm_lo,
        norm_hi=norm_hi,
        sector_theta=None if sector is None else (psec.theta0, psec.theta1),
        parity="odd",
        threshold=threshold,
        max_count=int(counts_int.max()) if counts_int.size else 0,
        n_targets=int(tre.size),
        n_represented=int(tre.size - len(exceptional) - len(boundary)),
        exceptional=exceptional,
        inadmissible_unrepresented=boundary,
        histogram_edges=edges,
        histogram_counts=freq,
        sampled_counts=_sample_counts(tre, tim, counts_int, seed),
        admissibility=adm if sector is not None else None,
        mean_count=float(counts_int.mean()) if counts_int.size else 0.0,
        boundary_strata=strata,
        use_prime_powers=use_prime_powers,
    )


# -- prediction vs. measurement -----------------------------------------


@dataclass
class ComparisonResult:
    """Measured Lambda-weighted counts against the predicted main term."""

    order: int
    n_bound: int
    q_bound: int
    samples: list[tuple[int, int, float, float, float]]  # re, im, measured, predicted, ratio
    median_ratio: float
    mean_ratio: float
    deciles: list[float]  # 10th through 90th percentile of the ratio


def compare_counts(
    table: ArithmeticTable,
    n_bound: int,
    sector: Sector,
    q_bound: int,
    order: int = 2,
    norm_window: tuple[float, float] = (0.5, 0.75),
    n_samples: int = 500,
    seed: int = 0,
) -> ComparisonResult:
    """Sample targets and compare A conv A (or the triple) against the
    main term.  Targets are even for order 2, odd for order 3, with norm
    in [norm_window[0] * N, norm_window[1] * N]."""
    _check_order(order)
    aa = convolve_power(build_A(table, n_bound, sector), order).values.values
    mm = convolve_power(build_M(table, n_bound, sector), order).values.values
    cw = (aa.shape[0] - 1) // 2
    side = np.arange(-cw, cw + 1)
    re, im = np.meshgrid(side, side, indexing="ij")
    norm = re * re + im * im
    lo, hi = int(norm_window[0] * n_bound), int(norm_window[1] * n_bound)
    parity = "even" if order == 2 else "odd"
    tmask = _target_mask(re, im, norm, lo, hi, parity, sector if not sector.full_circle else None)
    tmask &= aa > 0
    tre, tim = re[tmask], im[tmask]
    if tre.size == 0:
        raise CapacityError("no targets with positive measured count in the window")

    rng = np.random.default_rng(seed)
    idx = rng.choice(tre.size, size=min(n_samples, tre.size), replace=False)
    series = singular_series_grid(table, order, q_bound, cw)
    samples = []
    ratios = []
    for i in idx.tolist():
        a, b = int(tre[i]), int(tim[i])
        measured = float(aa[a + cw, b + cw])
        predicted = float(mm[a + cw, b + cw]) * float(series[a + cw, b + cw])
        if predicted <= 0.0:
            continue
        ratio = measured / predicted
        samples.append((a, b, measured, predicted, ratio))
        ratios.append(ratio)
    if not ratios:
        raise CapacityError("no usable samples: predictions all vanish")
    return ComparisonResult(
        order=order,
        n_bound=n_bound,
        q_bound=q_bound,
        samples=samples,
        median_ratio=float(np.median(ratios)),
        mean_ratio=float(np.mean(ratios)),
        deciles=[float(v) for v in np.percentile(ratios, range(10, 100, 10))],
    )


@dataclass
class ImprovingResult:
    n_bound: int
    p: float
    n_pairs: int
    seed: int
    ratios: list[float]
    max_ratio: float


def improving_check(
    table: ArithmeticTable,
    n_bound: int,
    p: float = 1.5,
    n_pairs: int = 100,
    seed: int = 0,
) -> ImprovingResult:
    """Ratio <A conv 1_F, 1_G> / (N^(1-2/p) |F|^(1/p) |G|^(1/p)) over
    seeded random indicator pairs F, G inside the square [0, sqrt(N)]^2.

    Densities vary per pair so sparse and dense sets are both probed.
    """
    if not 1.0 < p < 2.0:
        raise ConfigError(f"p must lie in (1, 2), got {p}")
    sector = Sector(0.0, 0.0, full_circle=True)
    aarr = build_A(table, n_bound, sector)
    w = aarr.half_width
    s = math.isqrt(n_bound)

    # one padded transform of A, reused across every pair
    full = 2 * w + s + 1
    fa = np.fft.rfft2(aarr.values, s=(full, full))
    rng = np.random.default_rng(seed)
    ratios: list[float] = []
    for _ in range(n_pairs):
        dens_f, dens_g = rng.uniform(0.05, 0.6, size=2)
        farr = rng.random((s + 1, s + 1)) < dens_f
        garr = rng.random((s + 1, s + 1)) < dens_g
        size_f, size_g = int(farr.sum()), int(garr.sum())
        if size_f == 0 or size_g == 0:
            ratios.append(0.0)
            continue
        conv = np.fft.irfft2(fa * np.fft.rfft2(farr.astype(float), s=(full, full)), s=(full, full))
        # (A conv 1_F)(x) for x in the square starts at array offset w
        inner = float(conv[w : w + s + 1, w : w + s + 1][garr].sum())
        denom = n_bound ** (1.0 - 2.0 / p) * size_f ** (1.0 / p) * size_g ** (1.0 / p)
        ratios.append(inner / denom)
    return ImprovingResult(
        n_bound=n_bound,
        p=p,
        n_pairs=n_pairs,
        seed=seed,
        ratios=ratios,
        max_ratio=float(max(ratios)),
    )
