"""Potential coefficients q(x) on [0,1] for the Neumann problems.

Four representations: constant, piecewise-linear grid, single cosine mode,
and polynomial in x.  All are immutable and evaluate to real values.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .core import as_finite_float
from .errors import InputError

__all__ = [
    "Potential",
    "ConstantPotential",
    "GridPotential",
    "CosinePotential",
    "PolyPotential",
]

TWO_PI = 2.0 * math.pi


class Potential:
    """Common interface: scalar call, vectorized sample, and solver hooks."""

    kind = "abstract"

    def __call__(self, x: float) -> float:
        raise NotImplementedError

    def sample(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on a numpy array of abscissae."""
        raise NotImplementedError

    def evaluator(self):
        """Fast scalar closure for the integrator inner loop."""
        return self.__call__

    def breakpoints(self) -> tuple[float, ...]:
        """Interior kink locations the integrator should land on exactly."""
        return ()

    def total_variation(self) -> float:
        """Integral of |q'| over [0,1]; used only as a loose sanity gate."""
        raise NotImplementedError

    def lower_bound(self) -> float:
        """A value <= min q(x); used to start eigenvalue bracketing."""
        raise NotImplementedError

    def shifted(self, c: float) -> "Potential":
        """The potential q(x) + c."""
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantPotential(Potential):
    value: float

    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "value", as_finite_float(self.value, "constant value"))

    def __call__(self, x: float) -> float:
        return self.value

    def sample(self, xs):
        return np.full_like(np.asarray(xs, dtype=float), self.value)

    def evaluator(self):
        v = self.value
        return lambda x: v

    def total_variation(self) -> float:
        return 0.0

    def lower_bound(self) -> float:
        return self.value

    def shifted(self, c: float) -> "ConstantPotential":
        return ConstantPotential(self.value + c)


@dataclass(frozen=True)
class GridPotential(Potential):
    """Piecewise-linear interpolant through (nodes, values)."""

    nodes: tuple[float, ...]
    values: tuple[float, ...]

    kind = "grid"

    def __post_init__(self):
        nodes = tuple(as_finite_float(x, f"nodes[{i}]") for i, x in enumerate(self.nodes))
        values = tuple(as_finite_float(v, f"values[{i}]") for i, v in enumerate(self.values))
        if len(nodes) != len(values):
            raise InputError(
                f"grid needs equally many nodes and values, got {len(nodes)} vs {len(values)}"
            )
        if len(nodes) < 2:
            raise InputError("grid needs at least two nodes")
        if nodes[0] != 0.0:
            raise InputError(f"nodes[0] must be 0, got {nodes[0]}")
        if nodes[-1] != 1.0:
            raise InputError(f"nodes[{len(nodes) - 1}] must be 1, got {nodes[-1]}")
        for i in range(1, len(nodes)):
            if nodes[i] <= nodes[i - 1]:
                raise InputError(f"nodes[{i}] = {nodes[i]} is not strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    def __call__(self, x: float) -> float:
        nodes, values = self.nodes, self.values
        if x <= 0.0:
            return values[0]
        if x >= 1.0:
            return values[-1]
        i = bisect.bisect_right(nodes, x)
        x0, x1 = nodes[i - 1], nodes[i]
        v0, v1 = values[i - 1], values[i]
        return v0 + (v1 - v0) * (x - x0) / (x1 - x0)

    def sample(self, xs):
        return np.interp(np.asarray(xs, dtype=float), self.nodes, self.values)

    def evaluator(self):
        nodes, values = self.nodes, self.values
        br = bisect.bisect_right

        def q(x: float) -> float:
            if x <= 0.0:
                return values[0]
            if x >= 1.0:
                return values[-1]
            i = br(nodes, x)
            x0 = nodes[i - 1]
            x1 = nodes[i]
            v0 = values[i - 1]
            return v0 + (values[i] - v0) * (x - x0) / (x1 - x0)

        return q

    def breakpoints(self) -> tuple[float, ...]:
        return self.nodes[1:-1]

    def total_variation(self) -> float:
        return float(sum(abs(b - a) for a, b in zip(self.values, self.values[1:])))

    def lower_bound(self) -> float:
        return min(self.values)

    def shifted(self, c: float) -> "GridPotential":
        return GridPotential(self.nodes, tuple(v + c for v in self.values))


@dataclass(frozen=True)
class CosinePotential(Potential):
    """q(x) = amplitude * cos(2*pi*frequency*x)."""

    amplitude: float
    frequency: int

    kind = "cosine"

    def __post_init__(self):
        object.__setattr__(self, "amplitude", as_finite_float(self.amplitude, "amplitude"))
        k = self.frequency
        if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
            raise InputError(f"frequency must be an integer, got {k!r}")
        if k < 0:
            raise InputError(f"frequency must be >= 0, got {k}")
        object.__setattr__(self, "frequency", int(k))

    def __call__(self, x: float) -> float:
        return self.amplitude * math.cos(TWO_PI * self.frequency * x)

    def sample(self, xs):
        return self.amplitude * np.cos(TWO_PI * self.frequency * np.asarray(xs, dtype=float))

    def evaluator(self):
        a = self.amplitude
        w = TWO_PI * self.frequency
        cos = math.cos
        return lambda x: a * cos(w * x)

    def total_variation(self) -> float:
        # integral of |A * 2 pi k sin(2 pi k x)| over one unit = 4 |A| k
        return 4.0 * abs(self.amplitude) * self.frequency

    def lower_bound(self) -> float:
        if self.frequency == 0:
            return self.amplitude
        return -abs(self.amplitude)

    def shifted(self, c: float) -> "Potential":
        if self.frequency == 0:
            return ConstantPotential(self.amplitude + c)
        coeffs_like = _CosinePlusConstant(self.amplitude, self.frequency, c)
        return coeffs_like


@dataclass(frozen=True)
class _CosinePlusConstant(Potential):
    """Internal helper for shift tests: A cos(2 pi k x) + c."""

    amplitude: float
    frequency: int
    offset: float

    kind = "cosine+constant"

    def __call__(self, x: float) -> float:
        return self.amplitude * math.cos(TWO_PI * self.frequency * x) + self.offset

    def sample(self, xs):
        return (
            self.amplitude * np.cos(TWO_PI * self.frequency * np.asarray(xs, dtype=float))
            + self.offset
        )

    def evaluator(self):
        a, w, c = self.amplitude, TWO_PI * self.frequency, self.offset
        cos = math.cos
        return lambda x: a * cos(w * x) + c

    def total_variation(self) -> float:
        return 4.0 * abs(self.amplitude) * self.frequency

    def lower_bound(self) -> float:
        return -abs(self.amplitude) + self.offset

    def shifted(self, c: float) -> "Potential":
        return _CosinePlusConstant(self.amplitude, self.frequency, self.offset + c)


@dataclass(frozen=True)
class PolyPotential(Potential):
    """q(x) = coeffs[0] + coeffs[1] x + ... in ascending powers."""

    coeffs: tuple[float, ...]

    kind = "poly_in_x"

    def __post_init__(self):
        coeffs = tuple(
            as_finite_float(c, f"coeffs[{i}]") for i, c in enumerate(self.coeffs)
        )
        if not coeffs:
            raise InputError("polynomial potential needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sample(self, xs):
        xs = np.asarray(xs, dtype=float)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = acc * xs + c
        return acc

    def evaluator(self):
        coeffs = tuple(reversed(self.coeffs))

        def q(x: float) -> float:
            acc = 0.0
            for c in coeffs:
                acc = acc * x + c
            return acc

        return q

    def total_variation(self) -> float:
        deriv = tuple((k + 1) * c for k, c in enumerate(self.coeffs[1:]))
        if not deriv:
            return 0.0
        xs = np.linspace(0.0, 1.0, 513)
        vals = np.zeros_like(xs)
        for c in reversed(deriv):
            vals = vals * xs + c
        return float(np.trapezoid(np.abs(vals), xs))

    def lower_bound(self) -> float:
        return float(self.sample(np.linspace(0.0, 1.0, 513)).min()) - 1.0

    def shifted(self, c: float) -> "PolyPotential":
        coeffs = (self.coeffs[0] + c,) + self.coeffs[1:]
        return PolyPotential(coeffs)
