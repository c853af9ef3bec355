"""Desk-scale Fourier analysis and Goldbach-type scans over the Gaussian integers."""

from .core import (
    GaussInt,
    RationalPoint,
    arg_angle,
    divide_into_box,
    exact_divide,
    gcd,
    pairing,
    pairing_int,
)
from .errors import CapacityError, ConfigError, InvariantViolation, ResolutionError
from .goldbach import (
    ComparisonResult,
    GoldbachReport,
    ImprovingResult,
    admissibility_cutoff,
    compare_counts,
    improving_check,
    is_admissible,
    main_term,
    prime_indicator,
    scan_binary,
    scan_ternary,
    series_global,
    series_sum_form,
    singular_series,
    singular_series_grid,
)
from .highlow import (
    GridFunction,
    build_A_hat,
    build_Hi,
    build_L,
    build_Lo,
    build_M_hat,
    density_calibration,
    eta,
    grid_from_lattice,
    kernel_error,
    lo_half_width,
    lo_moduli,
    lo_spatial,
    load_grid_function,
    shell_moduli,
)
from .identities import SuiteResult, run_identity_suite
from .ramanujan import (
    bourgain_moment,
    canonical_moduli,
    cohen_identity_check,
    gauss_ratio,
    tau_divisor,
    tau_exponential,
    tau_lookup,
    tau_multiplicative,
)
from .residues import ResidueBox, build_box, dft, inverse_dft, orthogonality_sum
from .sectors import (
    ConvolutionResult,
    LatticeArray,
    Sector,
    build_A,
    build_M,
    convolve,
    convolve_power,
    exp_sum_A,
    exp_sum_M,
    full_sector,
    load_lattice_array,
    make_sector,
    sector_boundary_distance,
)
from .tables import ArithmeticTable, Factorization, build_table, load_table, two_squares

__version__ = "0.1.0"

__all__ = [
    "GaussInt",
    "RationalPoint",
    "arg_angle",
    "divide_into_box",
    "exact_divide",
    "gcd",
    "pairing",
    "pairing_int",
    "CapacityError",
    "ConfigError",
    "InvariantViolation",
    "ResolutionError",
    "ArithmeticTable",
    "Factorization",
    "build_table",
    "load_table",
    "two_squares",
    "ResidueBox",
    "build_box",
    "dft",
    "inverse_dft",
    "orthogonality_sum",
    "bourgain_moment",
    "canonical_moduli",
    "cohen_identity_check",
    "gauss_ratio",
    "tau_divisor",
    "tau_exponential",
    "tau_lookup",
    "tau_multiplicative",
    "Sector",
    "LatticeArray",
    "ConvolutionResult",
    "build_M",
    "build_A",
    "convolve",
    "convolve_power",
    "exp_sum_M",
    "exp_sum_A",
    "full_sector",
    "make_sector",
    "sector_boundary_distance",
    "load_lattice_array",
    "GridFunction",
    "load_grid_function",
    "grid_from_lattice",
    "build_M_hat",
    "build_A_hat",
    "build_L",
    "build_Lo",
    "build_Hi",
    "density_calibration",
    "eta",
    "kernel_error",
    "lo_half_width",
    "lo_moduli",
    "lo_spatial",
    "shell_moduli",
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
    "SuiteResult",
    "run_identity_suite",
    "__version__",
]
