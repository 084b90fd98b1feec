"""Experiment harness: round trips, uniqueness probes, spectrum comparison.

A round trip generates the determinant spectrum of a known boundary
polynomial, reconstructs the coefficients from the located eigenvalues,
and reports the coefficient error next to the Vandermonde condition; over
a seeded suite this witnesses that the eigenvalue data determines the
coefficients uniquely.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .char_det import (
    BoundaryPolynomialProblem,
    DetSpectrum,
    SearchBox,
    find_det_eigenvalues,
)
from .core import Polynomial, Spectrum, Tolerances, poly_max_abs_diff, spectra_match
from .errors import InputError, TooFewRootsError
from .fileio import load_potential
from .reconstruct import (
    ReconstructionInput,
    reconstruct_coeffs,
    select_reconstruction_nodes,
)
from .sl_forward import NeumannSpectrum, free_spectrum_verdict, neumann_eigenvalues

__all__ = [
    "ExperimentConfig",
    "RoundTripReport",
    "UniquenessReport",
    "CompareReport",
    "roundtrip",
    "run_seeded_suite",
    "uniqueness_probe",
    "compare_neumann",
    "det_spectrum",
    "neumann_to_spectrum",
]

DEFAULT_BOX = SearchBox(-8.0, 8.0, -30.0, 30.0)

# box widening is capped: factor 4 per retry, at most 3 retries
_WIDEN_FACTOR = 4.0
_MAX_WIDENINGS = 3


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    degree_range: tuple[int, int] = (0, 3)
    coeff_bound: float = 2.0
    search_box: SearchBox = field(default_factory=lambda: DEFAULT_BOX)
    tolerances: Tolerances = field(default_factory=Tolerances)
    trials: int = 1
    max_roots: int = 80

    def __post_init__(self):
        if self.trials < 1:
            raise InputError(f"trials must be >= 1, got {self.trials}")
        if not self.coeff_bound > 0.0:
            raise InputError(f"coeff_bound must be positive, got {self.coeff_bound}")
        lo, hi = self.degree_range
        if lo < 0 or hi < lo:
            raise InputError(f"bad degree range {self.degree_range}")


@dataclass(frozen=True)
class RoundTripReport:
    true_coeffs: Polynomial
    recovered: Polynomial
    max_coeff_error: float
    condition: float
    nodes_used: tuple[complex, ...]
    wall_time_ms: float

    def __post_init__(self):
        expected = poly_max_abs_diff(self.true_coeffs, self.recovered)
        if self.max_coeff_error != expected:
            raise InputError(
                f"max_coeff_error {self.max_coeff_error!r} does not match the "
                f"coefficient difference {expected!r}"
            )


@dataclass(frozen=True)
class UniquenessReport:
    spectra_matched: bool
    max_coeff_error_a: float
    max_coeff_error_b: float
    condition_a: float
    condition_b: float
    passed: bool


@dataclass(frozen=True)
class CompareReport:
    spectrum_a: NeumannSpectrum
    spectrum_b: NeumannSpectrum
    gaps: tuple[float, ...]
    matched: bool
    free_spectrum_a: bool
    free_spectrum_b: bool
    zero_potential_flag: bool


def det_spectrum(roots: DetSpectrum, cluster_radius: float) -> Spectrum:
    """Collapse located determinant roots into a comparable Spectrum value."""
    return Spectrum.from_points(
        [r.value for r in roots],
        cluster_radius,
        multiplicities=[r.multiplicity for r in roots],
    )


def neumann_to_spectrum(spec: NeumannSpectrum) -> Spectrum:
    return Spectrum(tuple((complex(v), 1) for v in spec.values))


def _roots_with_widening(prob, cfg: ExperimentConfig, needed: int):
    box = cfg.search_box
    roots = find_det_eigenvalues(prob, box, cfg.max_roots, cfg.tolerances)
    for _ in range(_MAX_WIDENINGS):
        if len(roots) >= needed:
            return roots, box
        box = box.widened(_WIDEN_FACTOR)
        roots = find_det_eigenvalues(prob, box, cfg.max_roots, cfg.tolerances)
    if len(roots) < needed:
        raise TooFewRootsError(needed, [r.value for r in roots])
    return roots, box


def roundtrip(a: Polynomial, cfg: ExperimentConfig) -> RoundTripReport:
    """Locate determinant eigenvalues of a known polynomial and recover it."""
    lo, hi = cfg.degree_range
    if not lo <= a.degree <= hi:
        raise InputError(
            f"polynomial degree {a.degree} outside configured range [{lo}, {hi}]"
        )
    start = time.perf_counter()
    prob = BoundaryPolynomialProblem(a)
    roots, _ = _roots_with_widening(prob, cfg, a.degree + 1)
    nodes = select_reconstruction_nodes(roots, a.degree)
    rec = reconstruct_coeffs(
        ReconstructionInput(nodes, a.degree, cfg.tolerances.cluster_radius),
        cfg.tolerances,
    )
    err = poly_max_abs_diff(a, rec.coefficients)
    wall_ms = (time.perf_counter() - start) * 1e3
    return RoundTripReport(
        true_coeffs=a,
        recovered=rec.coefficients,
        max_coeff_error=err,
        condition=rec.vandermonde_condition,
        nodes_used=nodes,
        wall_time_ms=wall_ms,
    )


def run_seeded_suite(cfg: ExperimentConfig) -> tuple[RoundTripReport, ...]:
    """cfg.trials independent round trips with seeded random coefficients.

    Coefficients are drawn independently and uniformly from
    [-coeff_bound, coeff_bound]; degrees uniformly from degree_range.
    Identical configs produce identical reports (modulo wall time).
    """
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.degree_range
    reports = []
    for _ in range(cfg.trials):
        degree = int(rng.integers(lo, hi + 1))
        coeffs = tuple(float(c) for c in rng.uniform(-cfg.coeff_bound, cfg.coeff_bound, degree + 1))
        reports.append(roundtrip(Polynomial(coeffs), cfg))
    return tuple(reports)


def uniqueness_probe(a: Polynomial, a_tilde: Polynomial, cfg: ExperimentConfig) -> UniquenessReport:
    """Check injectivity of coefficients -> eigenvalues on one pair.

    Either the two determinant spectra over the search box differ, or each
    spectrum reconstructs its own generator; both outcomes witness that the
    pair cannot share eigenvalue data.
    """
    if a.degree != a_tilde.degree:
        raise InputError(
            f"probe needs equal degrees, got {a.degree} vs {a_tilde.degree}"
        )
    sep = poly_max_abs_diff(a, a_tilde)
    radius = cfg.tolerances.cluster_radius
    if 0.0 < sep < 10.0 * radius:
        raise InputError(
            f"polynomials are distinct but closer than 10x the cluster radius ({sep:.3e})"
        )
    roots_a, _ = _roots_with_widening(BoundaryPolynomialProblem(a), cfg, a.degree + 1)
    roots_b, _ = _roots_with_widening(BoundaryPolynomialProblem(a_tilde), cfg, a.degree + 1)
    matched = spectra_match(
        det_spectrum(roots_a, radius),
        det_spectrum(roots_b, radius),
        cfg.tolerances.match_tol,
    )
    rec_a = reconstruct_coeffs(
        ReconstructionInput(select_reconstruction_nodes(roots_a, a.degree), a.degree, radius),
        cfg.tolerances,
    )
    rec_b = reconstruct_coeffs(
        ReconstructionInput(
            select_reconstruction_nodes(roots_b, a_tilde.degree), a_tilde.degree, radius
        ),
        cfg.tolerances,
    )
    err_a = poly_max_abs_diff(a, rec_a.coefficients)
    err_b = poly_max_abs_diff(a_tilde, rec_b.coefficients)
    own = (
        err_a <= 1e-6 * max(1.0, rec_a.vandermonde_condition)
        and err_b <= 1e-6 * max(1.0, rec_b.vandermonde_condition)
    )
    return UniquenessReport(
        spectra_matched=matched,
        max_coeff_error_a=err_a,
        max_coeff_error_b=err_b,
        condition_a=rec_a.vandermonde_condition,
        condition_b=rec_b.vandermonde_condition,
        passed=(not matched) or own,
    )


def compare_neumann(
    path_a,
    path_b,
    count: int,
    match_tol: float,
    tolerances: Tolerances | None = None,
) -> CompareReport:
    """Compare the Neumann spectra of two potential files.

    Reports per-index gaps and, when both spectra sit on the free spectrum
    within match_tol, raises the zero-potential flag: agreement with the
    free spectrum forces a vanishing potential.
    """
    tol = tolerances or Tolerances()
    qa = load_potential(path_a)
    qb = load_potential(path_b)
    sa = neumann_eigenvalues(qa, count, tol)
    sb = neumann_eigenvalues(qb, count, tol)
    gaps = tuple(abs(x - y) for x, y in zip(sa.values, sb.values))
    matched = spectra_match(neumann_to_spectrum(sa), neumann_to_spectrum(sb), match_tol)
    free_a = free_spectrum_verdict(sa, match_tol)
    free_b = free_spectrum_verdict(sb, match_tol)
    return CompareReport(
        spectrum_a=sa,
        spectrum_b=sb,
        gaps=gaps,
        matched=matched,
        free_spectrum_a=free_a,
        free_spectrum_b=free_b,
        zero_potential_flag=matched and free_a and free_b,
    )
