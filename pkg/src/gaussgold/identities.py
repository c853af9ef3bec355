"""Exhaustive exact-identity suites over small moduli.

Shared by the verify-identities command and the acceptance tests: one
SuiteResult per named identity family, each checked for every canonical
modulus q with 2 <= N(q) <= norm_hi and (where applicable) every x in
the box B_q.  Everything here is either an exact integer statement or a
float statement with an explicit tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import GaussInt
from .ramanujan import (
    canonical_moduli,
    tau_divisor,
    tau_exponential,
    tau_key_arrays,
    tau_lookup,
    tau_multiplicative,
)
from .residues import build_box, dft, inverse_dft
from .tables import ArithmeticTable

__all__ = ["SuiteResult", "run_identity_suite"]

_MAX_RECORDED = 20


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, detail: str) -> None:
        if len(self.failures) < _MAX_RECORDED:
            self.failures.append(detail)
        else:
            self.failures[-1] = "... more failures suppressed"


def _box_sizes(qs, table, out: SuiteResult) -> None:
    for q in qs:
        box = build_box(q)
        out.cases += 2
        if len(box.points) != q.norm:
            out.fail(f"q={q}: |B_q|={len(box.points)} != {q.norm}")
        if len(box.reduced) != table.phi(q):
            out.fail(f"q={q}: |A_q|={len(box.reduced)} != phi={table.phi(q)}")


def _orthogonality(qs, tol: float, out: SuiteResult) -> None:
    # sum over r in B_q of e(<r, x/conj(q)>) = N(q) [conj(q) | x] for x in B_q
    for q in qs:
        box = build_box(q)
        nq = q.norm
        rr, ri = box.coords
        xr, xi = rr.copy(), ri.copy()
        wr = xr * q.re - xi * q.im
        wi = -(xr * q.im + xi * q.re)
        k = (rr[None, :] * wr[:, None] - ri[None, :] * wi[:, None]) % nq
        sums = np.exp(2j * np.pi * np.arange(nq) / nq)[k].sum(axis=1)
        divisible = ((xr * q.re - xi * q.im) % nq == 0) & ((xr * q.im + xi * q.re) % nq == 0)
        expected = np.where(divisible, float(nq), 0.0)
        bad = np.abs(sums - expected) > tol * nq
        out.cases += nq
        for i in np.nonzero(bad)[0]:
            out.fail(f"q={q}, x={box.points[i]}: sum={sums[i]:.3e} expected={expected[i]}")


def _tau_routes(qs, table, out: SuiteResult) -> None:
    for q in qs:
        box = build_box(q)
        lut = tau_lookup(q, table)
        for x in box.points:
            t_exp = tau_exponential(q, x)
            t_div = tau_divisor(q, x, table)
            t_mul = tau_multiplicative(q, x, table)
            u, v = tau_key_arrays(q, np.array([x.re]), np.array([x.im]))
            t_lut = int(lut[u[0], v[0]])
            out.cases += 1
            if abs(t_exp - t_div) > 1e-8 * q.norm or not (t_div == t_mul == t_lut):
                out.fail(f"q={q}, x={x}: routes {t_exp}/{t_div}/{t_mul}/{t_lut}")
        out.cases += 2
        if tau_divisor(q, q.conj(), table) != table.phi(q):
            out.fail(f"q={q}: tau(conj q) != phi")
        if tau_divisor(q, GaussInt(1, 0), table) != table.mu(q):
            out.fail(f"q={q}: tau(1) != mu")


def _cohen(qs, table, out: SuiteResult) -> None:
    # sum over r in A_conj(q) of tau_q(x + r) = mu(q) tau_q(x), all x in B_q
    for q in qs:
        box = build_box(q)
        nq = q.norm
        lut = tau_lookup(q, table)
        xr, xi = box.coords
        mu = table.mu(q)
        base_u, base_v = tau_key_arrays(q, xr, xi)
        acc = np.zeros(nq, dtype=np.int64)
        for r in build_box(q.conj()).reduced:
            u = (base_u + r.re * q.re - r.im * q.im) % nq
            v = (base_v + r.re * q.im + r.im * q.re) % nq
            acc += lut[u, v]
        want = mu * lut[base_u, base_v]
        bad = acc != want
        out.cases += nq
        for i in np.nonzero(bad)[0]:
            out.fail(f"q={q}, x={box.points[i]}: {acc[i]} != {want[i]}")


def _dft_round_trip(qs, vectors: int, seed: int, tol: float,
                    trip: SuiteResult, parseval: SuiteResult) -> None:
    rng = np.random.default_rng(seed)
    for q in qs:
        box = build_box(q)
        nq = q.norm
        vals = rng.standard_normal((vectors, nq)) + 1j * rng.standard_normal((vectors, nq))
        freq = dft(box, vals)
        back = inverse_dft(box, freq)
        scale = np.linalg.norm(vals, axis=1)
        trip_err = np.linalg.norm(back - vals, axis=1) / scale
        trip.cases += vectors
        for i in np.nonzero(trip_err > tol)[0]:
            trip.fail(f"q={q}, vector {i}: round-trip error {trip_err[i]:.3e}")
        # Plancherel: ||F f||^2 = N(q) ||f||^2
        p_err = np.abs((np.linalg.norm(freq, axis=1) ** 2) - nq * scale**2) / (nq * scale**2)
        parseval.cases += vectors
        for i in np.nonzero(p_err > tol)[0]:
            parseval.fail(f"q={q}, vector {i}: Parseval error {p_err[i]:.3e}")


def run_identity_suite(
    table: ArithmeticTable,
    norm_hi: int = 200,
    vectors_per_q: int = 100,
    seed: int = 0,
    orthogonality_tol: float = 1e-8,
    dft_tol: float = 1e-10,
) -> list[SuiteResult]:
    """Run every identity family over canonical 2 <= N(q) <= norm_hi."""
    qs = canonical_moduli(2, norm_hi + 1)
    sizes = SuiteResult("box-and-reduced-sizes")
    orth = SuiteResult("character-orthogonality")
    routes = SuiteResult("tau-three-routes-and-specials")
    cohen = SuiteResult("cohen-shift-identity")
    trip = SuiteResult("dft-round-trip")
    parseval = SuiteResult("parseval")
    _box_sizes(qs, table, sizes)
    _orthogonality(qs, orthogonality_tol, orth)
    _tau_routes(qs, table, routes)
    _cohen(qs, table, cohen)
    _dft_round_trip(qs, vectors_per_q, seed, dft_tol, trip, parseval)
    return [sizes, orth, routes, cohen, trip, parseval]
