"""Characteristic determinant of the boundary-polynomial problem and its zeros.

The problem couples a second-order constant-coefficient ODE in x (with the
spectral parameter entering the coefficients) to a boundary condition that
carries a polynomial in the spectral parameter.  Its eigenvalues are the
zeros of an entire function delta(lam); the overflow-safe scaled form

    dhat(lam) = lam * exp(-2 lam) * delta(lam)
              = (1 - exp(-lam)) + lam * A(lam) * (2 exp(-lam) - 1)

shares all zeros of delta away from the origin, with equal multiplicities.
dhat(0) = 0 is an artifact of the scaling and is always discounted.

Zeros are located by the argument principle: adaptive boundary sampling of
a rectangle gives the winding number (= zero count with multiplicity),
recursive quadrisection isolates single zeros, and Newton polishing on
dhat finishes them off.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import Polynomial, Tolerances, as_finite_complex, as_finite_float, poly_eval
from .errors import (
    BoundaryZeroError,
    InputError,
    MaxRootsExceededError,
    NumericalError,
    OverflowRangeError,
)

__all__ = [
    "BoundaryPolynomialProblem",
    "SearchBox",
    "DetEigenvalue",
    "DetSpectrum",
    "y1_eval",
    "y2_eval",
    "ode_residual",
    "delta_eval",
    "delta_scaled_eval",
    "delta_deriv",
    "count_zeros",
    "find_det_eigenvalues",
]

_SERIES_CUT = 1e-6
_HALF_PI = 0.5 * math.pi
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BoundaryPolynomialProblem:
    """The determinant problem for one boundary polynomial."""

    poly: Polynomial

    @property
    def degree(self) -> int:
        return self.poly.degree


@dataclass(frozen=True)
class SearchBox:
    """Closed axis-aligned rectangle in the complex plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        for name in ("re_min", "re_max", "im_min", "im_max"):
            object.__setattr__(self, name, as_finite_float(getattr(self, name), name))
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InputError(
                f"degenerate search box [{self.re_min}, {self.re_max}] x "
                f"[{self.im_min}, {self.im_max}]"
            )

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min - margin <= z.real <= self.re_max + margin
            and self.im_min - margin <= z.imag <= self.im_max + margin
        )

    def strictly_contains_origin(self) -> bool:
        return self.re_min < 0.0 < self.re_max and self.im_min < 0.0 < self.im_max

    def expanded(self, delta: float) -> "SearchBox":
        return SearchBox(
            self.re_min - delta, self.re_max + delta, self.im_min - delta, self.im_max + delta
        )

    def widened(self, factor: float) -> "SearchBox":
        c = self.center
        hw = 0.5 * self.width * factor
        hh = 0.5 * self.height * factor
        return SearchBox(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)

    def split(self, fr: float, fi: float):
        """Four children tiling the box, cut at the given interior fractions."""
        rm = self.re_min + fr * self.width
        im = self.im_min + fi * self.height
        return (
            SearchBox(self.re_min, rm, self.im_min, im),
            SearchBox(rm, self.re_max, self.im_min, im),
            SearchBox(self.re_min, rm, im, self.im_max),
            SearchBox(rm, self.re_max, im, self.im_max),
        )


@dataclass(frozen=True)
class DetEigenvalue:
    """A located determinant zero: value, algebraic multiplicity, residual."""

    value: complex
    multiplicity: int
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "value", as_finite_complex(self.value, "eigenvalue"))
        if self.multiplicity < 1:
            raise InputError(f"multiplicity must be >= 1, got {self.multiplicity}")


DetSpectrum = tuple[DetEigenvalue, ...]


def y1_eval(lam: complex, x: float) -> complex:
    """First fundamental solution: value 1, slope 0 at x=0."""
    lam = complex(lam)
    return -cmath.exp(2.0 * lam * x) + 2.0 * cmath.exp(lam * x)


def y2_eval(lam: complex, x: float) -> complex:
    """Second fundamental solution: value 0, slope 1 at x=0.

    The removable singularity at lam=0 is continued by the truncated series
    x + (3/2) x^2 lam + (7/6) x^3 lam^2 + (5/8) x^4 lam^3 for |lam| < 1e-6.
    """
    lam = complex(lam)
    if abs(lam) < _SERIES_CUT:
        return x + lam * x * x * (1.5 + lam * x * (7.0 / 6.0 + lam * x * (15.0 / 24.0)))
    return (cmath.exp(2.0 * lam * x) - cmath.exp(lam * x)) / lam


def ode_residual(lam: complex, x: float) -> tuple[float, float]:
    """Residuals |y'' - 3 lam y' + 2 lam^2 y| for both fundamental solutions.

    Derivatives come from the closed exponential forms, so the residuals
    measure only floating-point cancellation.
    """
    lam = complex(lam)
    if abs(lam) < _SERIES_CUT:
        raise InputError(f"ode_residual needs |lam| >= {_SERIES_CUT}, got {abs(lam)}")
    if not 0.0 <= x <= 1.0:
        raise InputError(f"x must be in [0,1], got {x}")
    e1 = cmath.exp(lam * x)
    e2 = cmath.exp(2.0 * lam * x)
    lam2 = lam * lam
    y1 = -e2 + 2.0 * e1
    y1p = -2.0 * lam * e2 + 2.0 * lam * e1
    y1pp = -4.0 * lam2 * e2 + 2.0 * lam2 * e1
    r1 = abs(y1pp - 3.0 * lam * y1p + 2.0 * lam2 * y1)
    y2 = (e2 - e1) / lam
    y2p = 2.0 * e2 - e1
    y2pp = 4.0 * lam * e2 - lam * e1
    r2 = abs(y2pp - 3.0 * lam * y2p + 2.0 * lam2 * y2)
    return r1, r2


def delta_eval(prob: BoundaryPolynomialProblem, lam: complex) -> complex:
    """The determinant exactly as assembled from the fundamental solutions.

    delta(lam) = (e^{2 lam} - e^{lam})/lam + A(lam) (-e^{2 lam} + 2 e^{lam}),
    continued through lam=0 by series with delta(0) = 1 + a_0.  Raises
    OverflowRangeError for re(lam) large enough to overflow e^{2 lam};
    use delta_scaled_eval there.
    """
    lam = complex(lam)
    if lam.real > 350.0:
        raise OverflowRangeError(
            f"delta overflows for re(lam) = {lam.real:.3g}; use delta_scaled_eval"
        )
    a_val = poly_eval(prob.poly, lam)
    if abs(lam) < _SERIES_CUT:
        # (e^{2 lam} - e^{lam})/lam = sum_{k>=1} (2^k - 1) lam^{k-1} / k!
        first = 1.0 + lam * (1.5 + lam * (7.0 / 6.0 + lam * (15.0 / 24.0 + lam * (31.0 / 120.0))))
    else:
        first = (cmath.exp(2.0 * lam) - cmath.exp(lam)) / lam
    return first + a_val * (-cmath.exp(2.0 * lam) + 2.0 * cmath.exp(lam))


def delta_scaled_eval(prob: BoundaryPolynomialProblem, lam: complex) -> complex:
    """Overflow-safe scaled determinant dhat = lam e^{-2 lam} delta.

    Zeros in the punctured plane coincide with zeros of delta with equal
    multiplicities; dhat(0) = 0 is artificial and always excluded.
    """
    lam = complex(lam)
    em = cmath.exp(-lam)
    return (1.0 - em) + lam * poly_eval(prob.poly, lam) * (2.0 * em - 1.0)


def _delta_scaled_vec(prob: BoundaryPolynomialProblem, zs: np.ndarray) -> np.ndarray:
    em = np.exp(-zs)
    acc = np.zeros_like(zs)
    for c in reversed(prob.poly.coeffs):
        acc = acc * zs + c
    return (1.0 - em) + zs * acc * (2.0 * em - 1.0)


def delta_deriv(prob: BoundaryPolynomialProblem, lam: complex) -> complex:
    """Analytic derivative of the scaled determinant."""
    lam = complex(lam)
    em = cmath.exp(-lam)
    a_val = poly_eval(prob.poly, lam)
    ap_val = poly_eval(prob.poly.derivative(), lam)
    return em + (a_val + lam * ap_val) * (2.0 * em - 1.0) - 2.0 * lam * a_val * em


def _edge_points(box: SearchBox, samples_per_unit: float):
    """Counterclockwise contour samples, closed (last point equals first)."""
    corners = [
        complex(box.re_min, box.im_min),
        complex(box.re_max, box.im_min),
        complex(box.re_max, box.im_max),
        complex(box.re_min, box.im_max),
        complex(box.re_min, box.im_min),
    ]
    pts = []
    for z0, z1 in zip(corners[:-1], corners[1:]):
        n = max(12, int(abs(z1 - z0) * samples_per_unit) + 1)
        ts = np.linspace(0.0, 1.0, n, endpoint=False)
        pts.append(z0 + ts * (z1 - z0))
    pts.append(np.array([corners[-1]]))
    return np.concatenate(pts)


def _delta_deriv_vec(prob: BoundaryPolynomialProblem, zs: np.ndarray) -> np.ndarray:
    em = np.exp(-zs)
    a_val = np.zeros_like(zs)
    for c in reversed(prob.poly.coeffs):
        a_val = a_val * zs + c
    ap_val = np.zeros_like(zs)
    for k in range(len(prob.poly.coeffs) - 1, 0, -1):
        ap_val = ap_val * zs + k * prob.poly.coeffs[k]
    return em + (a_val + zs * ap_val) * (2.0 * em - 1.0) - 2.0 * zs * a_val * em


def _winding_number(prob: BoundaryPolynomialProblem, box: SearchBox, tol: Tolerances) -> int:
    """Winding number of dhat along the box boundary (argument principle).

    Counts every zero of dhat inside, including the artificial one at the
    origin.  A segment is accepted only when its phase jump is below pi/2
    AND the derivative bound len * max|dhat'| / min|dhat| at its endpoints
    is small: the bound dominates the true phase change, so zeros lurking
    between samples cannot alias a full turn past the jump test.  A sample
    with |dhat| at or below residual_tol raises BoundaryZeroError.
    """
    floor = tol.residual_tol
    pts = _edge_points(box, samples_per_unit=8.0)
    vals = _delta_scaled_vec(prob, pts)
    mags = np.abs(vals)
    if (mags <= floor).any():
        raise BoundaryZeroError(complex(pts[int(np.argmin(mags))]))
    ders = np.abs(_delta_deriv_vec(prob, pts))

    total = 0.0
    stack = []
    for i in range(len(pts) - 1, 0, -1):
        stack.append(
            (
                complex(pts[i - 1]), complex(vals[i - 1]), float(ders[i - 1]),
                complex(pts[i]), complex(vals[i]), float(ders[i]),
            )
        )
    while stack:
        z0, f0, d0, z1, f1, d1 = stack.pop()
        jump = cmath.phase(f1 / f0)
        seg = abs(z1 - z0)
        excursion = seg * max(d0, d1) / min(abs(f0), abs(f1))
        if abs(jump) < _HALF_PI and excursion <= 0.5:
            total += jump
            continue
        if seg < 1e-12 * (1.0 + abs(z0)):
            if abs(jump) < _HALF_PI:
                total += jump
                continue
            raise BoundaryZeroError(0.5 * (z0 + z1))
        zm = 0.5 * (z0 + z1)
        fm = delta_scaled_eval(prob, zm)
        if abs(fm) <= floor:
            raise BoundaryZeroError(zm)
        dm = abs(delta_deriv(prob, zm))
        stack.append((zm, fm, dm, z1, f1, d1))
        stack.append((z0, f0, d0, zm, fm, dm))
    w = total / _TWO_PI
    k = round(w)
    if abs(w - k) > 0.2:
        raise NumericalError(f"winding number {w:.4f} is not close to an integer")
    return int(k)


def count_zeros(
    prob: BoundaryPolynomialProblem, box: SearchBox, tol: Tolerances | None = None
) -> int:
    """Zeros of the determinant inside the box, counted with multiplicity.

    The artificial origin zero introduced by the scaling is discounted when
    the box contains the origin, so a zero-free determinant gives 0.
    """
    tol = tol or Tolerances()
    w = _winding_number(prob, box, tol)
    if box.strictly_contains_origin():
        w -= 1
    if w < 0:
        raise NumericalError(f"negative zero count {w}: inconsistent winding data")
    return w


def _newton_polish(prob, z0: complex, region: SearchBox, tol: Tolerances):
    """Newton on dhat from z0; None when it leaves the region or stalls."""
    z = complex(z0)
    margin = 0.5 * region.diameter + 10.0 * tol.cluster_radius
    for _ in range(100):
        f = delta_scaled_eval(prob, z)
        df = delta_deriv(prob, z)
        if df == 0:
            return None
        step = f / df
        z -= step
        if not region.contains(z, margin):
            return None
        if abs(step) <= 1e-13 * (1.0 + abs(z)):
            # one extra iteration parks the residual at the noise floor
            df = delta_deriv(prob, z)
            if df != 0:
                z -= delta_scaled_eval(prob, z) / df
            return z
    return None


# imaginary fractions stay off 0.5: a symmetric box would otherwise put its
# split line exactly on the real axis, where real-coefficient zeros live
_SPLIT_FRACTIONS = (
    (0.5, 0.511),
    (0.53, 0.489),
    (0.47, 0.523),
    (0.511, 0.477),
    (0.489, 0.533),
    (0.545, 0.461),
)


def _collect_roots(prob, box: SearchBox, max_roots: int, tol: Tolerances):
    """Quadrisection search; returns (value, multiplicity) pairs, origin included."""
    found: list[tuple[complex, int]] = []

    def genuine():
        return sum(m for z, m in found if abs(z) > tol.cluster_radius)

    def visit(bx: SearchBox, count: int, depth: int):
        if count == 0:
            return
        if genuine() + count > max_roots + 1:
            raise MaxRootsExceededError(
                max_roots, [z for z, _ in found if abs(z) > tol.cluster_radius]
            )
        if count == 1:
            z = _newton_polish(prob, bx.center, bx, tol)
            if z is not None and bx.contains(z):
                found.append((z, 1))
                return
        if bx.diameter <= tol.cluster_radius:
            # unresolved cluster: report as one root carrying the full count
            found.append((bx.center, count))
            return
        if depth > 64:
            raise NumericalError(f"quadrisection depth exceeded near {bx.center!r}")
        mismatches = []
        for fr, fi in _SPLIT_FRACTIONS:
            kids = bx.split(fr, fi)
            try:
                counts = [_winding_number(prob, k, tol) for k in kids]
            except BoundaryZeroError:
                continue
            # a zero hugging one of the new edges can corrupt two children at
            # once; a disagreeing sum exposes it, so move the lines and retry
            if sum(counts) == count:
                break
            mismatches.append(sum(counts))
        else:
            if mismatches:
                raise NumericalError(
                    f"winding mismatch persists near {bx.center!r}: parent {count}, "
                    f"children sums {mismatches}"
                )
            raise BoundaryZeroError(bx.center)
        for k, c in zip(kids, counts):
            visit(k, c, depth + 1)

    visit(box, _winding_number(prob, box, tol), 0)
    return found


def find_det_eigenvalues(
    prob: BoundaryPolynomialProblem,
    box: SearchBox,
    max_roots: int,
    tol: Tolerances | None = None,
) -> DetSpectrum:
    """All determinant zeros in the box, polished and sorted by (re, im).

    The origin (an excluded eigenvalue) is filtered from the results.  A
    zero sitting on the outer boundary triggers up to 5 retries with the
    box nudged outward by multiples of the cluster radius.
    """
    tol = tol or Tolerances()
    if max_roots < 1:
        raise InputError(f"max_roots must be >= 1, got {max_roots}")
    eff = box
    last_err: BoundaryZeroError | None = None
    for attempt in range(6):
        try:
            raw = _collect_roots(prob, eff, max_roots, tol)
            break
        except BoundaryZeroError as err:
            last_err = err
            delta = max(tol.cluster_radius, 1e-9) * (attempt + 1) * 1.618
            eff = eff.expanded(delta)
    else:
        assert last_err is not None
        raise last_err

    roots = [(z, m) for z, m in raw if abs(z) > tol.cluster_radius]
    roots.sort(key=lambda e: (e[0].real, e[0].imag))
    out = []
    for z, m in roots:
        residual = abs(delta_scaled_eval(prob, z))
        bound = tol.residual_tol * (1.0 + abs(z * poly_eval(prob.poly, z)))
        if residual > bound:
            raise NumericalError(
                f"root {z!r} has residual {residual:.3e} above its bound {bound:.3e}"
            )
        out.append(DetEigenvalue(z, m, residual))
    return tuple(out)
