"""Shared numeric domain types: polynomials, spectra, tolerances.

Everything here is an immutable value object; all operations are pure
functions of their inputs and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegreeMismatchError, InputError

__all__ = [
    "Polynomial",
    "Spectrum",
    "Tolerances",
    "poly_eval",
    "poly_max_abs_diff",
    "spectra_match",
]


def as_finite_complex(value, what: str = "value") -> complex:
    """Coerce to complex, rejecting NaN/Inf components."""
    try:
        z = complex(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what} is not a number: {value!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(f"{what} must be finite, got {z!r}")
    return z


def as_finite_float(value, what: str = "value") -> float:
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what} is not a real number: {value!r}") from exc
    if not math.isfinite(x):
        raise InputError(f"{what} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class Polynomial:
    """Coefficient vector c_0..c_s in ascending powers.

    The degree is declared by the vector length, never inferred: trailing
    zero coefficients are legitimate data (a zero leading coefficient must
    survive a round trip through reconstruction).
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        coeffs = tuple(as_finite_complex(c, "coefficient") for c in self.coeffs)
        if not coeffs:
            raise InputError("a polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0j,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def __call__(self, z) -> complex:
        return poly_eval(self, z)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))


def poly_eval(p: Polynomial, z) -> complex:
    """Evaluate c_0 + c_1 z + ... + c_s z^s by the Horner recurrence."""
    z = complex(z)
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def poly_max_abs_diff(p: Polynomial, q: Polynomial) -> float:
    """Max coefficient-wise absolute difference of two same-degree polynomials."""
    if p.degree != q.degree:
        raise DegreeMismatchError(
            f"polynomials are incomparable: degrees {p.degree} != {q.degree}"
        )
    return max(abs(a - b) for a, b in zip(p.coeffs, q.coeffs))


@dataclass(frozen=True)
class Tolerances:
    """Numeric knobs shared across the toolkit.

    eig_tol: stop width for eigenvalue refinement.
    residual_tol: floor below which a determinant residual counts as zero.
    cluster_radius: distance under which two roots merge into one entry.
    match_tol: pairwise distance allowed when comparing two spectra.
    """

    eig_tol: float = 1e-10
    residual_tol: float = 1e-9
    cluster_radius: float = 1e-8
    match_tol: float = 1e-6

    def __post_init__(self):
        for name in ("eig_tol", "residual_tol", "cluster_radius", "match_tol"):
            v = as_finite_float(getattr(self, name), name)
            if v <= 0.0:
                raise InputError(f"{name} must be strictly positive, got {v}")
        if self.cluster_radius < self.residual_tol:
            raise InputError(
                "cluster_radius must be >= residual_tol "
                f"({self.cluster_radius} < {self.residual_tol})"
            )


def _sort_key(z: complex):
    return (z.real, z.imag)


@dataclass(frozen=True)
class Spectrum:
    """Sorted (value, multiplicity) pairs, ordered by (re, im)."""

    entries: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        entries = []
        for value, mult in self.entries:
            z = as_finite_complex(value, "spectrum value")
            m = int(mult)
            if m < 1:
                raise InputError(f"multiplicity must be >= 1, got {mult}")
            entries.append((z, m))
        keys = [_sort_key(z) for z, _ in entries]
        if keys != sorted(keys):
            raise InputError("spectrum entries must be sorted by (re, im)")
        object.__setattr__(self, "entries", tuple(entries))

    @classmethod
    def from_points(cls, points, cluster_radius: float = 1e-8, multiplicities=None) -> "Spectrum":
        """Build a spectrum from an unsorted multiset of points.

        Points closer than ``cluster_radius`` (transitively) are merged into
        one entry at their multiplicity-weighted centroid, multiplicities
        summed.  Merging iterates until all representatives are pairwise
        separated by more than the radius.
        """
        pts = [as_finite_complex(z, "point") for z in points]
        if multiplicities is None:
            mults = [1] * len(pts)
        else:
            mults = [int(m) for m in multiplicities]
            if len(mults) != len(pts):
                raise InputError("multiplicities and points must have equal length")
        items = list(zip(pts, mults))
        while True:
            merged = _merge_once(items, cluster_radius)
            if len(merged) == len(items):
                items = merged
                break
            items = merged
        items.sort(key=lambda e: _sort_key(e[0]))
        return cls(tuple(items))

    @property
    def values(self) -> tuple[complex, ...]:
        return tuple(z for z, _ in self.entries)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _merge_once(items, radius):
    """One round of connected-component merging by BFS over the radius graph."""
    n = len(items)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        component = []
        while queue:
            i = queue.pop()
            component.append(i)
            zi = items[i][0]
            for j in range(n):
                if not seen[j] and abs(zi - items[j][0]) <= radius:
                    seen[j] = True
                    queue.append(j)
        total = sum(items[i][1] for i in component)
        centroid = sum(items[i][0] * items[i][1] for i in component) / total
        out.append((centroid, total))
    return out


def spectra_match(s1: Spectrum, s2: Spectrum, tol: float) -> bool:
    """True iff the spectra pair off in order within ``tol`` with equal multiplicities."""
    if len(s1) != len(s2):
        return False
    for (z1, m1), (z2, m2) in zip(s1, s2):
        if m1 != m2 or abs(z1 - z2) > tol:
            return False
    return True
