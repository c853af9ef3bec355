"""Command-line interface: configuration, experiment dispatch, reports.

Each subcommand runs one experiment and writes into --outdir:

* ``<command>.json``        versioned report (schema 1, sorted keys);
* ``<command>-*.csv``       plot-ready columns (documented in --help);
* ``<command>-*.png``       rendered figures of the same data;
* ``<command>-config.txt``  the effective configuration, one key=value
  per line, reusable via --config.

Configuration precedence: built-in defaults, then the --config file,
then explicit flags.  Identical configuration and seed produce
byte-identical JSON except for the timestamp field.

Exit codes: 0 success, 1 a named invariant failed, 2 configuration or
capacity error.  Thread count can be pinned with GAUSSGOLD_THREADS or
--threads; it is applied before the numeric libraries load.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from .errors import CapacityError, ConfigError, InvariantViolation, ResolutionError

TWO_PI = 2.0 * math.pi

_THREAD_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
)


def _apply_threads(n: int | None) -> None:
    if n is None:
        env = os.environ.get("GAUSSGOLD_THREADS")
        if not env:
            return
        n = int(env)
    if n < 1:
        raise ConfigError("thread count must be a positive integer")
    for var in _THREAD_VARS:
        os.environ[var] = str(n)


# -- angle / sector / window parsing ------------------------------------

def parse_angle(text: str) -> float:
    """An angle, either a plain float or a multiple of pi ("0.25pi")."""
    t = text.strip().lower().replace(" ", "")
    try:
        if t.endswith("pi"):
            coef = t[:-2].rstrip("*")
            return (float(coef) if coef not in ("", "+", "-") else float(coef + "1")) * math.pi
        return float(t)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}; use e.g. 0.25pi or 0.7853") from None


def parse_sector_spec(text: str):
    """'full' or 'theta0:theta1' with pi-multiple endpoints."""
    from .sectors import full_sector, make_sector

    t = text.strip().lower()
    if t == "full":
        return full_sector()
    if ":" not in t:
        raise ConfigError(f"sector {text!r}: expected 'full' or 'theta0:theta1'")
    a, b = t.split(":", 1)
    th0, th1 = parse_angle(a), parse_angle(b)
    if th0 == th1:
        raise ConfigError(f"sector {text!r} is empty: theta0 == theta1")
    return make_sector(th0, th1)


def parse_window(text: str) -> tuple[float, float]:
    try:
        a, b = text.split(":", 1)
        lo, hi = float(a), float(b)
    except ValueError:
        raise ConfigError(f"window {text!r}: expected 'lo:hi' fractions") from None
    if not 0.0 < lo < hi <= 1.0:
        raise ConfigError(f"window {text!r}: need 0 < lo < hi <= 1")
    return lo, hi


def parse_point(text: str):
    from .core import GaussInt

    try:
        a, b = text.split(",", 1)
        return GaussInt(int(a), int(b))
    except ValueError:
        raise ConfigError(f"point {text!r}: expected 're,im' integers") from None


# -- config file ---------------------------------------------------------

def _load_config_file(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file {path} not found")
    out: dict[str, str] = {}
    for lineno, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(action: argparse.Action, value: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"key {action.dest}: boolean expected, got {value!r}")
    if action.type is not None:
        try:
            return action.type(value)
        except (TypeError, ValueError):
            raise ConfigError(f"key {action.dest}: cannot parse {value!r}") from None
    return value


def _merge_config_file(sub: argparse.ArgumentParser, command: str, overrides: dict[str, str]) -> None:
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    typed = {}
    for key, value in overrides.items():
        if key == "command":
            if value != command:
                raise ConfigError(f"config file is for command {value!r}, not {command!r}")
            continue
        if key not in actions:
            raise ConfigError(f"unknown config key {key!r} for command {command}")
        typed[key] = _coerce(actions[key], value)
    sub.set_defaults(**typed)


def _effective_config(args: argparse.Namespace) -> dict:
    skip = {"config", "func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _write_config_artifact(outdir: Path, command: str, cfg: dict) -> str:
    path = outdir / f"{command}-config.txt"
    lines = [f"{k}={str(v).lower() if isinstance(v, bool) else v}" for k, v in sorted(cfg.items())]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


# -- shared handler plumbing ---------------------------------------------

def _emit(args, results: dict, artifacts: list[str]) -> int:
    from .reporting import write_json_report

    outdir = Path(args.outdir)
    cfg = _effective_config(args)
    artifacts = list(artifacts)
    artifacts.append(_write_config_artifact(outdir, args.command, cfg))
    report_path = outdir / f"{args.command}.json"
    write_json_report(report_path, args.command, cfg, results, artifacts)
    print(f"{args.command}: ok -> {report_path}")
    return 0


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- handlers ------------------------------------------------------------

def _cmd_sieve(args) -> int:
    from .reporting import figure_series, write_csv
    from .tables import build_table

    out = _outdir(args)
    table = build_table(args.n_max)
    n = args.n_max
    r2 = table.r2[: n + 1]
    lattice_points = int(r2.sum())
    circle_ratio = lattice_points / n
    primes = table.gaussian_primes(n + 1)
    lam_total = float(table.lam.sum())

    cap = min(n, 100_000)
    rows = [(int(m), int(r2[m])) for m in range(cap + 1)]
    csv_path = out / "sieve-norms.csv"
    write_csv(csv_path, ["norm", "r2"], rows)

    import numpy as np

    cum = np.cumsum(r2[: cap + 1])
    fig_path = figure_series(
        out / "sieve-circle.png",
        list(range(1, cap + 1, max(1, cap // 400))),
        [float(cum[m]) for m in range(1, cap + 1, max(1, cap // 400))],
        "lattice points of norm <= n",
        "n",
        "cumulative r2",
    )

    if n >= 1000 and abs(circle_ratio - math.pi) > 0.05:
        raise InvariantViolation(
            "gauss-circle-count",
            f"sum r2(n)/n_max = {circle_ratio:.4f}, expected about pi",
        )
    results = {
        "n_max": n,
        "lattice_points_in_disc": lattice_points,
        "circle_ratio": circle_ratio,
        "canonical_prime_count": len(primes),
        "von_mangoldt_octant_total": lam_total,
    }
    return _emit(args, results, [str(csv_path), fig_path])


def _cmd_verify_identities(args) -> int:
    from .identities import run_identity_suite
    from .reporting import figure_histogram, write_csv
    from .tables import build_table

    out = _outdir(args)
    table = build_table(max(args.n_max, 512))
    suites = run_identity_suite(
        table, norm_hi=args.n_max, vectors_per_q=args.vectors, seed=args.seed
    )
    csv_path = out / "verify-identities-suites.csv"
    write_csv(
        csv_path,
        ["suite", "cases", "failures"],
        [(s.name, s.cases, len(s.failures)) for s in suites],
    )
    fig_path = figure_histogram(
        out / "verify-identities-cases.png",
        list(range(len(suites) + 1)),
        [s.cases for s in suites],
        "identity suite case counts",
        "suite index",
    )
    results = {
        "suites": [
            {"name": s.name, "cases": s.cases, "failures": s.failures} for s in suites
        ],
        "all_passed": all(s.passed for s in suites),
    }
    rc = _emit(args, results, [str(csv_path), fig_path])
    for s in suites:
        if not s.passed:
            raise InvariantViolation(s.name, s.failures[0])
    return rc


def _cmd_ramanujan_moments(args) -> int:
    from .ramanujan import bourgain_moment
    from .reporting import figure_series, write_csv
    from .tables import build_table

    out = _outdir(args)
    table = build_table(args.n_bound)
    ks = list(range(1, args.k + 1))
    moments = [bourgain_moment(table, args.n_bound, args.q_bound, k) for k in ks]
    csv_path = out / "ramanujan-moments.csv"
    write_csv(csv_path, ["k", "moment"], list(zip(ks, moments)))
    fig_path = figure_series(
        out / "ramanujan-moments.png",
        ks,
        moments,
        f"|tau| moments, Q={args.q_bound}, N={args.n_bound}",
        "k",
        "mean of (sum |tau_q(x)|)^k",
    )
    results = {
        "k_values": ks,
        "moments": moments,
        "q_bound": args.q_bound,
        "n_bound": args.n_bound,
    }
    return _emit(args, results, [str(csv_path), fig_path])


def _cmd_exp_decay(args) -> int:
    import numpy as np

    from .reporting import figure_series, write_csv
    from .sectors import exp_sum_M
    from .tables import build_table

    out = _outdir(args)
    sector = parse_sector_spec(args.sector)
    if args.scaled_norm_lo <= 0 or args.scaled_norm_hi <= args.scaled_norm_lo:
        raise ConfigError("need 0 < scaled-norm-lo < scaled-norm-hi")
    table = build_table(args.n_bound)
    rng = np.random.default_rng(args.seed)
    log_lo, log_hi = math.log(args.scaled_norm_lo), math.log(args.scaled_norm_hi)
    scaled = np.exp(rng.uniform(log_lo, log_hi, args.samples))
    angles = rng.uniform(0.0, TWO_PI, args.samples)
    radii = np.sqrt(scaled / args.n_bound)
    rows = []
    for s, r, a in zip(scaled, radii, angles):
        beta = complex(r * math.cos(a), r * math.sin(a))
        rows.append((float(s), abs(exp_sum_M(table, args.n_bound, sector, beta))))
    rows.sort()
    xs = np.array([r[0] for r in rows])
    ys = np.maximum([r[1] for r in rows], 1e-300)
    slope, intercept = np.polyfit(np.log2(xs), np.log2(ys), 1)

    csv_path = out / "exp-decay-samples.csv"
    write_csv(csv_path, ["scaled_norm", "abs_exp_sum"], rows)
    fig_path = figure_series(
        out / "exp-decay.png",
        xs.tolist(),
        ys.tolist(),
        f"|M-hat(beta)| vs N*N(beta), N={args.n_bound}",
        "N * N(beta)",
        "|M-hat|",
        loglog=True,
        fit=(float(slope), float(intercept)),
    )
    results = {
        "n_bound": args.n_bound,
        "samples": args.samples,
        "slope": float(slope),
        "intercept": float(intercept),
        "scaled_norm_range": [args.scaled_norm_lo, args.scaled_norm_hi],
    }
    rc = _emit(args, results, [str(csv_path), fig_path])
    if slope > -0.6:
        raise InvariantViolation(
            "exp-decay-slope", f"fitted slope {slope:.3f} > -0.6"
        )
    return rc


def _cmd_highlow_report(args) -> int:
    import numpy as np

    from .highlow import (
        build_A_hat,
        build_Hi,
        build_Lo,
        density_calibration,
        lo_half_width,
        lo_moduli,
    )
    from .reporting import figure_heatmap, write_csv
    from .sectors import build_A
    from .tables import build_table

    out = _outdir(args)
    sector = parse_sector_spec(args.sector)
    table = build_table(args.n_bound)
    a_hat = build_A_hat(table, args.n_bound, sector, args.grid_m)
    lo = build_Lo(table, args.n_bound, sector, args.q_bound, args.grid_m)
    hi = build_Hi(table, args.n_bound, sector, args.q_bound, args.grid_m)

    # grid power identity: mean |A-hat|^2 over the grid equals the
    # lattice sum of squared weights whenever the grid resolves the
    # support without wraparound collisions
    arr = build_A(table, args.n_bound, sector)
    grid_power = float(np.mean(np.abs(a_hat.values) ** 2))
    lattice_power = float(np.sum(arr.values**2))
    power_rel = abs(grid_power - lattice_power) / max(lattice_power, 1e-300)

    stride = args.stride if args.stride > 0 else max(1, args.grid_m // 128)
    hi_bin = out / "highlow-hi.ggf"
    lo_bin = out / "highlow-lo.ggf"
    hi.write_binary(hi_bin)
    lo.write_binary(lo_bin)
    hi_csv = out / "highlow-hi-abs.csv"
    hi.write_csv_abs(hi_csv, stride=stride)
    figs = [
        figure_heatmap(out / "highlow-hi.png", hi.values,
                       f"|Hi-hat|, Q={args.q_bound}", log_scale=False),
        figure_heatmap(out / "highlow-lo.png", lo.values,
                       f"|Lo-hat|, Q={args.q_bound}", log_scale=False),
    ]
    sup_csv = out / "highlow-sups.csv"
    write_csv(
        sup_csv,
        ["grid_function", "sup_abs", "origin_re", "origin_im"],
        [
            ("A_hat", a_hat.sup(), a_hat.at_origin().real, a_hat.at_origin().imag),
            ("Lo_hat", lo.sup(), lo.at_origin().real, lo.at_origin().imag),
            ("Hi_hat", hi.sup(), hi.at_origin().real, hi.at_origin().imag),
        ],
    )
    results = {
        "n_bound": args.n_bound,
        "q_bound": args.q_bound,
        "grid_m": args.grid_m,
        "sup_A_hat": a_hat.sup(),
        "sup_Lo_hat": lo.sup(),
        "sup_Hi_hat": hi.sup(),
        "hi_at_origin": complex(hi.at_origin()),
        "lo_at_origin": complex(lo.at_origin()),
        "density_calibration": density_calibration(table, args.n_bound, sector),
        "lo_window_half_width": lo_half_width(args.q_bound, args.n_bound),
        "lo_moduli_count": len(lo_moduli(table, args.q_bound)),
        "grid_power": grid_power,
        "lattice_power": lattice_power,
        "power_identity_rel_error": power_rel,
    }
    rc = _emit(args, results,
               [str(p) for p in (hi_bin, lo_bin, hi_csv, sup_csv)] + figs)
    # the identity is exact only when the grid resolves the lattice
    # support without wraparound collisions
    if args.grid_m >= 2 * table.W + 1 and power_rel > 0.05:
        raise InvariantViolation(
            "grid-power-identity", f"relative error {power_rel:.3e} > 5%"
        )
    return rc


def _cmd_kernel_error(args) -> int:
    from .highlow import kernel_error, shell_moduli
    from .reporting import figure_series, write_csv
    from .tables import build_table

    out = _outdir(args)
    sector = parse_sector_spec(args.sector)
    table = build_table(args.n_bound)
    errors = [
        kernel_error(table, args.n_bound, sector, args.grid_m, s)
        for s in range(args.s_max + 1)
    ]
    csv_path = out / "kernel-error.csv"
    write_csv(
        csv_path,
        ["s_max", "sup_error", "shell_size"],
        [(s, errors[s], len(shell_moduli(s))) for s in range(args.s_max + 1)],
    )
    fig_path = figure_series(
        out / "kernel-error.png",
        list(range(args.s_max + 1)),
        errors,
        f"kernel approximation error, N={args.n_bound}, m={args.grid_m}",
        "largest shell index s_max",
        "sup |A-hat - sum of shell windows|",
    )
    results = {
        "n_bound": args.n_bound,
        "grid_m": args.grid_m,
        "s_max": args.s_max,
        "errors_by_s_max": errors,
    }
    return _emit(args, results, [str(csv_path), fig_path])


def _cmd_improving_check(args) -> int:
    from .goldbach import improving_check
    from .reporting import figure_scatter, write_csv
    from .tables import build_table

    out = _outdir(args)
    table = build_table(args.n_bound)
    res = improving_check(table, args.n_bound, p=args.p, n_pairs=args.pairs, seed=args.seed)
    csv_path = out / "improving-ratios.csv"
    write_csv(
        csv_path,
        ["pair_index", "ratio"],
        list(enumerate(res.ratios)),
    )
    fig_path = figure_scatter(
        out / "improving-ratios.png",
        list(range(len(res.ratios))),
        res.ratios,
        f"normalized pairing ratios, p={args.p}, N={args.n_bound}",
        "pair index",
        "ratio",
        hline=res.max_ratio,
    )
    results = {
        "n_bound": res.n_bound,
        "p": res.p,
        "n_pairs": res.n_pairs,
        "seed": res.seed,
        "max_ratio": res.max_ratio,
        "mean_ratio": sum(res.ratios) / len(res.ratios),
    }
    rc = _emit(args, results, [str(csv_path), fig_path])
    if res.max_ratio > 50.0:
        raise InvariantViolation(
            "improving-ratio-envelope", f"max ratio {res.max_ratio:.2f} > 50"
        )
    return rc


def _cmd_goldbach_scan(args) -> int:
    import dataclasses

    from .goldbach import scan_binary, scan_ternary
    from .reporting import figure_histogram, figure_series, write_csv

    from .tables import build_table

    out = _outdir(args)
    sector = None if args.sector.strip().lower() == "full" else parse_sector_spec(args.sector)
    if args.order not in (2, 3):
        raise ConfigError("order must be 2 or 3")
    table = build_table(args.n_bound)
    norm_hi = args.norm_hi if args.norm_hi > 0 else args.n_bound
    if args.order == 2:
        norm_lo = args.norm_lo if args.norm_lo > 0 else 4
        report = scan_binary(
            table,
            args.n_bound,
            sector=sector,
            norm_lo=norm_lo,
            norm_hi=norm_hi,
            min_boundary_distance=args.min_boundary_distance,
            use_prime_powers=args.use_prime_powers,
            seed=args.seed,
        )
    else:
        norm_lo = args.norm_lo if args.norm_lo > 0 else 2
        adm = None
        if args.admissibility_form != "none":
            adm = {"form": args.admissibility_form, "C": args.adm_constant, "B": args.adm_exponent}
        report = scan_ternary(
            table,
            args.n_bound,
            sector=sector,
            norm_lo=norm_lo,
            norm_hi=norm_hi,
            admissibility=adm,
            use_prime_powers=args.use_prime_powers,
            seed=args.seed,
        )

    hist_csv = out / "goldbach-scan-histogram.csv"
    write_csv(
        hist_csv,
        ["count_lo", "count_hi", "targets"],
        [
            (report.histogram_edges[i], report.histogram_edges[i + 1], report.histogram_counts[i])
            for i in range(len(report.histogram_counts))
        ],
    )
    artifacts = [str(hist_csv)]
    artifacts.append(
        figure_histogram(
            out / "goldbach-scan-histogram.png",
            report.histogram_edges,
            report.histogram_counts,
            f"order-{args.order} representation counts, N(x) in [{report.norm_lo}, {report.norm_hi}]",
            "representations per target",
            log_x=True,
        )
    )
    if report.boundary_strata:
        strata_csv = out / "goldbach-scan-strata.csv"
        write_csv(
            strata_csv,
            ["dist_lo", "dist_hi", "targets", "unrepresented"],
            report.boundary_strata,
        )
        artifacts.append(str(strata_csv))
        mids = [0.5 * (s[0] + s[1]) for s in report.boundary_strata]
        rates = [s[3] / s[2] if s[2] else 0.0 for s in report.boundary_strata]
        artifacts.append(
            figure_series(
                out / "goldbach-scan-strata.png",
                mids,
                rates,
                "unrepresented rate by distance to sector boundary",
                "angular distance to boundary (bin midpoint)",
                "unrepresented fraction",
            )
        )

    results = dataclasses.asdict(report)
    results["exceptional_density"] = report.exceptional_density
    rc = _emit(args, results, artifacts)
    if args.order == 3 and report.exceptional:
        raise InvariantViolation(
            "ternary-exceptional-empty",
            f"{len(report.exceptional)} admissible targets without representation",
        )
    if args.order == 2 and report.exceptional_density > args.max_exceptional_density:
        raise InvariantViolation(
            "binary-exceptional-density",
            f"density {report.exceptional_density:.4f} > {args.max_exceptional_density}",
        )
    return rc


def _cmd_singular_series(args) -> int:
    import numpy as np

    from .core import GaussInt
    from .goldbach import series_global, singular_series, singular_series_grid
    from .reporting import figure_heatmap, write_csv
    from .tables import build_table

    out = _outdir(args)
    if args.order not in (2, 3):
        raise ConfigError("order must be 2 or 3")
    if args.half_width < 1:
        raise ConfigError("half-width must be >= 1")
    table = build_table(max(args.q_bound, 8))
    hw = args.half_width
    grid = singular_series_grid(table, args.order, args.q_bound, hw)

    coords = np.arange(-hw, hw + 1)
    re = np.repeat(coords, coords.size)
    im = np.tile(coords, coords.size)
    vals = grid.ravel()
    csv_path = out / "singular-series-grid.csv"
    write_csv(csv_path, ["re", "im", "value"],
              list(zip(re.tolist(), im.tolist(), vals.tolist())))
    fig_path = figure_heatmap(
        out / "singular-series.png",
        grid,
        f"order-{args.order} singular series, Q={args.q_bound}",
        extent=(-hw, hw, -hw, hw),
    )

    parity = (re + im) % 2  # odd Gaussian integer <=> re+im odd
    zero = np.abs(vals) < 1e-12
    expect_zero = (parity == 1) if args.order == 2 else (parity == 0)
    parity_ok = bool(np.all(zero == expect_zero))

    results = {
        "order": args.order,
        "q_bound": args.q_bound,
        "half_width": hw,
        "series_global": series_global(table, args.q_bound),
        "grid_max": float(vals.max()),
        "grid_nonzero_min": float(vals[~zero].min()) if np.any(~zero) else 0.0,
        "parity_exact": parity_ok,
    }
    if args.x:
        x = parse_point(args.x)
        results["value_at_x"] = singular_series(table, args.order, args.q_bound, x)
        results["x"] = [x.re, x.im]
    rc = _emit(args, results, [str(csv_path), fig_path])
    if not parity_ok:
        raise InvariantViolation(
            "singular-series-parity",
            "zero set does not match the parity class on the sampled grid",
        )
    return rc


def _cmd_compare_counts(args) -> int:
    from .goldbach import compare_counts
    from .reporting import figure_scatter, write_csv
    from .tables import build_table

    out = _outdir(args)
    sector = parse_sector_spec(args.sector)
    window = parse_window(args.norm_window)
    table = build_table(args.n_bound)
    res = compare_counts(
        table,
        args.n_bound,
        sector,
        args.q_bound,
        order=args.order,
        norm_window=window,
        n_samples=args.samples,
        seed=args.seed,
    )
    csv_path = out / "compare-counts-samples.csv"
    write_csv(
        csv_path,
        ["re", "im", "measured", "predicted", "ratio"],
        res.samples,
    )
    norms = [s[0] ** 2 + s[1] ** 2 for s in res.samples]
    fig_path = figure_scatter(
        out / "compare-counts.png",
        norms,
        [s[4] for s in res.samples],
        f"measured/predicted, order {args.order}, Q={args.q_bound}",
        "N(x)",
        "ratio",
        hline=res.median_ratio,
    )
    results = {
        "order": res.order,
        "n_bound": res.n_bound,
        "q_bound": res.q_bound,
        "n_samples": len(res.samples),
        "median_ratio": res.median_ratio,
        "mean_ratio": res.mean_ratio,
        "deciles": res.deciles,
    }
    rc = _emit(args, results, [str(csv_path), fig_path])
    if not 0.5 <= res.median_ratio <= 2.0:
        raise InvariantViolation(
            "main-term-ratio-band", f"median ratio {res.median_ratio:.3f} outside [0.5, 2.0]"
        )
    return rc


# -- parser --------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--outdir", default="reports",
                     help="output directory for reports, CSV, and figures")
    sub.add_argument("--config", default=None,
                     help="key=value file; flags override it, it overrides defaults")
    sub.add_argument("--threads", type=int, default=None,
                     help="pin numeric thread pools (or set GAUSSGOLD_THREADS)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="gaussgold",
        description="Gaussian-integer Goldbach experiments: sieves, residue "
        "transforms, multiplier decompositions, and representation scans.",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    def sub(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        s = subs.add_parser(name, help=help_text,
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        s.set_defaults(func=handler)
        _add_common(s)
        registry[name] = s
        return s

    s = sub("sieve", _cmd_sieve,
            "build arithmetic tables; CSV columns: norm, r2")
    s.add_argument("--n-max", type=int, default=10_000, help="largest norm sieved")

    s = sub("verify-identities", _cmd_verify_identities,
            "exhaustive exact identity suites; CSV columns: suite, cases, failures")
    s.add_argument("--n-max", type=int, default=200, help="largest modulus norm checked")
    s.add_argument("--vectors", type=int, default=100, help="random vectors per modulus")
    s.add_argument("--seed", type=int, default=0)

    s = sub("ramanujan-moments", _cmd_ramanujan_moments,
            "moments of summed |tau_q|; CSV columns: k, moment")
    s.add_argument("--n-bound", type=int, default=10_000, help="norm range of the average")
    s.add_argument("--q-bound", type=int, default=16, help="moduli norms below this")
    s.add_argument("--k", type=int, default=2, help="largest moment order")

    s = sub("exp-decay", _cmd_exp_decay,
            "decay of the counting exponential sum; CSV columns: scaled_norm, abs_exp_sum")
    s.add_argument("--n-bound", type=int, default=100_000)
    s.add_argument("--sector", default="full", help="'full' or theta0:theta1 (pi-multiples)")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--scaled-norm-lo", type=float, default=100.0, help="min of N*N(beta)")
    s.add_argument("--scaled-norm-hi", type=float, default=10_000.0, help="max of N*N(beta)")
    s.add_argument("--seed", type=int, default=0)

    s = sub("highlow-report", _cmd_highlow_report,
            "high/low multiplier split on the frequency grid; CSV columns: "
            "grid_function, sup_abs, origin_re, origin_im and xi1, xi2, abs_value")
    s.add_argument("--n-bound", type=int, default=10_000)
    s.add_argument("--q-bound", type=int, default=8, help="low part uses moduli smooth below this")
    s.add_argument("--grid-m", type=int, default=256, help="frequency grid side")
    s.add_argument("--sector", default="full")
    s.add_argument("--stride", type=int, default=0,
                   help="CSV subsampling stride; 0 picks grid_m/128")

    s = sub("kernel-error", _cmd_kernel_error,
            "sup error of the shell window approximation; CSV columns: "
            "s_max, sup_error, shell_size")
    s.add_argument("--n-bound", type=int, default=10_000)
    s.add_argument("--grid-m", type=int, default=256)
    s.add_argument("--s-max", type=int, default=1, help="largest dyadic shell index")
    s.add_argument("--sector", default="full")

    s = sub("improving-check", _cmd_improving_check,
            "normalized pairing ratios over random indicator pairs; CSV "
            "columns: pair_index, ratio")
    s.add_argument("--n-bound", type=int, default=10_000)
    s.add_argument("--p", type=float, default=1.5, help="exponent in (1, 2)")
    s.add_argument("--pairs", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)

    s = sub("goldbach-scan", _cmd_goldbach_scan,
            "representation scan; CSV columns: count_lo, count_hi, targets "
            "and dist_lo, dist_hi, targets, unrepresented")
    s.add_argument("--order", type=int, default=2, help="2 = binary, 3 = ternary")
    s.add_argument("--n-bound", type=int, default=100_000)
    s.add_argument("--sector", default="full")
    s.add_argument("--norm-lo", type=int, default=0, help="0 picks 4 (binary) or 2 (ternary)")
    s.add_argument("--norm-hi", type=int, default=0, help="0 means n-bound")
    s.add_argument("--min-boundary-distance", type=float, default=0.0,
                   help="binary sector scans skip targets nearer the boundary")
    s.add_argument("--use-prime-powers", action="store_true",
                   help="count prime powers as summands too")
    s.add_argument("--admissibility-form", choices=["none", "logpow", "sqrt"],
                   default="none", help="ternary sector cutoff shape")
    s.add_argument("--adm-constant", type=float, default=1.0, help="cutoff constant C")
    s.add_argument("--adm-exponent", type=float, default=10.0, help="cutoff exponent B")
    s.add_argument("--max-exceptional-density", type=float, default=0.01,
                   help="binary scans fail above this exceptional fraction")
    s.add_argument("--seed", type=int, default=0)

    s = sub("singular-series", _cmd_singular_series,
            "arithmetic product over small primes; CSV columns: re, im, value")
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--q-bound", type=int, default=16)
    s.add_argument("--half-width", type=int, default=40, help="grid of targets |re|,|im| <= this")
    s.add_argument("--x", default="", help="optional single target 're,im'")

    s = sub("compare-counts", _cmd_compare_counts,
            "measured vs predicted representation mass; CSV columns: re, im, "
            "measured, predicted, ratio")
    s.add_argument("--order", type=int, default=2)
    s.add_argument("--n-bound", type=int, default=100_000)
    s.add_argument("--q-bound", type=int, default=64)
    s.add_argument("--sector", default="full")
    s.add_argument("--norm-window", default="0.5:0.75",
                   help="target norms as fractions 'lo:hi' of n-bound")
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)

    return parser, registry


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            _merge_config_file(registry[args.command], args.command,
                               _load_config_file(args.config))
            args = parser.parse_args(argv)
        _apply_threads(args.threads)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResolutionError as exc:
        hint = f"; rerun with --grid-m >= {exc.required_m}" if exc.required_m else ""
        print(f"config error: {exc}{hint}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        hint = (f"; needs about {exc.required_bytes} bytes, raise the memory "
                f"budget or shrink the bound" if exc.required_bytes else "")
        print(f"config error: {exc}{hint}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant failed: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse errors already printed usage
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
