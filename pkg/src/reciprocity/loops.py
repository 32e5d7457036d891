"""Sampled C*-valued loops on oriented circles and the pairing T(f, g).

The pairing of two loops is

    T(f, g) = exp( (1/2 pi i) * integral of log f dg/g ) * g(x0) ** (-winding(f))

with the integral taken once around the circle starting and ending at the
base point ``x0`` (sample ``base_index``) along a branch of ``log f`` that
is continuous away from ``x0``.

Quadrature: after rotating the grid so the base point sits at parameter 0,
the branch splits as ``i*nu*theta + p(theta)`` with ``p`` smooth and
periodic. ``p * dlog g`` is summed on the uniform grid (spectrally accurate
for analytic periodic integrands) and ``theta * dlog g`` is integrated in
closed form against the discrete Fourier interpolant of ``dlog g``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, TextIO

import numpy as np

from .errors import (
    AmbiguousWindingError,
    MismatchedGridError,
    OnContourError,
    UnderSampledError,
)
from .gaussian import ONE, GaussianRational
from .rational import FactoredRational
from .symbols import tame_symbol

DEFAULT_SAMPLES = 4096
DEFAULT_TOL = 1e-8
ADJACENCY_MARGIN = 1e-3
WINDING_DEFECT_MAX = 0.25
MIN_SAMPLES = 16

TWO_PI = 2.0 * math.pi


class Orientation(enum.Enum):
    CCW = "CCW"
    CW = "CW"

    @property
    def sign(self) -> int:
        return 1 if self is Orientation.CCW else -1

    def reversed(self) -> Orientation:
        return Orientation.CW if self is Orientation.CCW else Orientation.CCW


@dataclass(frozen=True)
class OrientedCircle:
    center: GaussianRational
    radius: Fraction
    orientation: Orientation = Orientation.CCW

    def __post_init__(self):
        object.__setattr__(self, "center", GaussianRational.coerce(self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if self.radius <= 0:
            raise ValueError(f"circle radius must be positive, got {self.radius}")

    def reversed(self) -> OrientedCircle:
        return OrientedCircle(self.center, self.radius, self.orientation.reversed())

    def with_orientation(self, orientation: Orientation) -> OrientedCircle:
        return OrientedCircle(self.center, self.radius, orientation)

    # exact geometry over Q

    def _dist2(self, p: GaussianRational) -> Fraction:
        return (GaussianRational.coerce(p) - self.center).norm()

    def strictly_inside(self, p) -> bool:
        return self._dist2(p) < self.radius ** 2

    def on_contour(self, p) -> bool:
        return self._dist2(p) == self.radius ** 2

    def strictly_outside(self, p) -> bool:
        return self._dist2(p) > self.radius ** 2

    # sampling

    def parameters(self, n: int) -> np.ndarray:
        return TWO_PI * np.arange(n) / n

    def points(self, n: int) -> np.ndarray:
        """``z(theta_k)`` for ``theta_k = 2 pi k / n`` along the orientation."""
        theta = self.parameters(n)
        return complex(self.center) + float(self.radius) * np.exp(1j * self.orientation.sign * theta)

    def velocity(self, n: int) -> np.ndarray:
        """``dz/dtheta`` at the sample points."""
        return 1j * self.orientation.sign * (self.points(n) - complex(self.center))

    def __str__(self):
        return f"circle(center={self.center}, radius={self.radius}, {self.orientation.value})"


def _check_sample_count(n: int) -> None:
    if n < MIN_SAMPLES or n & (n - 1):
        raise ValueError(f"sample count must be a power of two >= {MIN_SAMPLES}, got {n}")


def _ratio_angles(samples: np.ndarray) -> np.ndarray:
    """Principal arguments of ``samples[k+1] / samples[k]`` (cyclic)."""
    return np.angle(np.roll(samples, -1) / samples)


@dataclass(frozen=True, eq=False)
class SampledLoop:
    """Uniform samples of a C*-valued function along an oriented circle."""

    circle: OrientedCircle
    samples: np.ndarray
    source: Optional[FactoredRational] = None
    margin: float = field(default=ADJACENCY_MARGIN, repr=False)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        _check_sample_count(samples.size)
        if not np.all(np.isfinite(samples)):
            raise ValueError("loop samples must be finite")
        if np.any(samples == 0):
            raise ValueError("loop samples must be nonzero")
        worst = float(np.max(np.abs(_ratio_angles(samples))))
        if worst >= math.pi - self.margin:
            raise UnderSampledError(
                f"under-sampled loop: adjacent argument jump {worst:.4f} at N={samples.size}"
            )

    @property
    def n(self) -> int:
        return self.samples.size

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], circle: OrientedCircle,
                      n: int = DEFAULT_SAMPLES) -> SampledLoop:
        """Sample an arbitrary vectorized function of ``z`` along ``circle``."""
        _check_sample_count(n)
        return cls(circle, np.asarray(func(circle.points(n)), dtype=complex))

    def reversed(self) -> SampledLoop:
        """Same path traversed the other way, sample 0 kept fixed."""
        rev = np.roll(self.samples[::-1], 1)
        return SampledLoop(self.circle.reversed(), rev, self.source, self.margin)


@dataclass(frozen=True, eq=False)
class LogBranch:
    """A branch of ``log f`` continued from ``base_index`` once around the loop.

    ``increments[k]`` is the principal log of ``samples[k+1] / samples[k]``;
    the branch is continuous everywhere except across the base point.
    """

    base_index: int
    values: np.ndarray
    increments: np.ndarray = field(repr=False)

    @property
    def wrap_defect(self) -> complex:
        """Jump across the base point, ``2 pi i`` times the winding number."""
        last = (self.base_index - 1) % self.values.size
        return complex(self.values[last] + self.increments[last] - self.values[self.base_index])


def restrict(f: FactoredRational, circle: OrientedCircle, n: int = DEFAULT_SAMPLES) -> SampledLoop:
    """Sample ``f`` along ``circle`` after an exact check that no root lies on it.

    Besides the principal-argument adjacency test on the samples, the true
    argument change between neighbours is assembled factor by factor, so a
    step that turns by more than pi (which the principal value would hide)
    is rejected as under-sampled.
    """
    _check_sample_count(n)
    for a in f.roots():
        if circle.on_contour(a):
            raise OnContourError(a, circle)
    z = circle.points(n)
    limit = math.pi - ADJACENCY_MARGIN
    turning = np.zeros(n)
    for a, m in f.factors.items():
        step = _ratio_angles(z - complex(a))
        if np.max(np.abs(step)) >= limit:
            raise UnderSampledError(f"under-sampled loop: factor (z - {a}) turns too fast at N={n}")
        turning += m * step
    worst = float(np.max(np.abs(turning))) if f.factors else 0.0
    if worst >= limit:
        raise UnderSampledError(f"under-sampled loop: adjacent argument change {worst:.4f} at N={n}")
    return SampledLoop(circle, f.evaluate_many(z), source=f)


def winding_number(loop: SampledLoop) -> int:
    total = float(np.sum(_ratio_angles(loop.samples))) / TWO_PI
    nearest = round(total)
    if abs(total - nearest) >= WINDING_DEFECT_MAX:
        raise AmbiguousWindingError(f"ambiguous winding: total turning {total:.4f}")
    return int(nearest)


def log_continuation(loop: SampledLoop, base_index: int = 0) -> LogBranch:
    """Continue the principal log at ``base_index`` along the loop.

    The real part is ``log|f|`` sample by sample (the ratio logs telescope);
    the imaginary part accumulates principal ratio arguments.
    """
    s = loop.samples
    n = s.size
    b = base_index % n
    ratio = np.roll(s, -1) / s
    increments = np.log(np.abs(ratio)) + 1j * np.angle(ratio)
    order = (b + np.arange(n)) % n
    arg = np.empty(n)
    arg[order] = np.angle(s[b]) + np.concatenate(([0.0], np.cumsum(np.angle(ratio[order[:-1]]))))
    values = np.log(np.abs(s)) + 1j * arg
    return LogBranch(b, values, increments)


def dlog_exact(f: FactoredRational, circle: OrientedCircle, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    """``d(log f)/dtheta`` along ``circle`` from the factored form of ``f``."""
    _check_sample_count(n)
    for a in f.roots():
        if circle.on_contour(a):
            raise OnContourError(a, circle)
    z = circle.points(n)
    dz = circle.velocity(n)
    out = np.zeros(n, dtype=complex)
    for a, m in f.factors.items():
        out += m * dz / (z - complex(a))
    return out


def _wavenumbers(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, d=1.0 / n)


def dlog_spectral(loop: SampledLoop) -> np.ndarray:
    """``d(log f)/dtheta`` by spectral differentiation of the periodic part of a log branch."""
    n = loop.n
    nu = winding_number(loop)
    theta = TWO_PI * np.arange(n) / n
    periodic = log_continuation(loop, 0).values - 1j * nu * theta
    k = _wavenumbers(n)
    k[n // 2] = 0.0
    return np.fft.ifft(1j * k * np.fft.fft(periodic)) + 1j * nu


def _theta_moment(v: np.ndarray) -> complex:
    """Integral over [0, 2 pi) of ``theta * v(theta)`` for the trigonometric interpolant of ``v``."""
    n = v.size
    c = np.fft.fft(v) / n
    k = _wavenumbers(n)
    nz = k != 0
    return complex(c[0] * 2.0 * math.pi ** 2 + np.sum(c[nz] * TWO_PI / (1j * k[nz])))


def t_pairing(f_loop: SampledLoop, g_loop: SampledLoop, g_dlog: Optional[np.ndarray] = None,
              base_index: int = 0) -> complex:
    """Numerical value of T(f, g) on the common circle of the two loops.

    ``g_dlog`` is ``d(log g)/dtheta`` at the samples; when omitted it comes
    from the exact factored formula if ``g_loop`` has rational provenance,
    else from spectral differentiation.
    """
    if f_loop.circle != g_loop.circle or f_loop.n != g_loop.n:
        raise MismatchedGridError("mismatched grids: loops must share circle and sample count")
    n = f_loop.n
    if g_dlog is None:
        if g_loop.source is not None:
            g_dlog = dlog_exact(g_loop.source, g_loop.circle, n)
        else:
            g_dlog = dlog_spectral(g_loop)
    g_dlog = np.asarray(g_dlog, dtype=complex)
    if g_dlog.shape != (n,):
        raise MismatchedGridError("mismatched grids: dlog array has the wrong length")

    nu = winding_number(f_loop)
    branch = log_continuation(f_loop, base_index)
    b = branch.base_index
    u = np.roll(branch.values, -b)
    v = np.roll(g_dlog, -b)
    theta = TWO_PI * np.arange(n) / n
    periodic = u - 1j * nu * theta
    integral = TWO_PI / n * np.sum(periodic * v) + 1j * nu * _theta_moment(v)
    return complex(np.exp(integral / (2j * math.pi)) * g_loop.samples[b] ** (-nu))


def t_pairing_oracle(f: FactoredRational, g: FactoredRational, circle: OrientedCircle) -> GaussianRational:
    """Exact value of T on ``circle``: product of tame symbols at enclosed divisor points."""
    points = []
    for a in list(f.roots()) + [r for r in g.roots() if r not in f.factors]:
        if circle.on_contour(a):
            raise OnContourError(a, circle)
        if circle.strictly_inside(a):
            points.append(a)
    value = ONE
    for p in points:
        value = value * tame_symbol(f, g, p)
    return value if circle.orientation is Orientation.CCW else value.inverse()


def enclosed_winding(f: FactoredRational, circle: OrientedCircle) -> int:
    """Exact argument-principle count: signed multiplicities strictly inside ``circle``."""
    for a in f.roots():
        if circle.on_contour(a):
            raise OnContourError(a, circle)
    total = sum(m for a, m in f.factors.items() if circle.strictly_inside(a))
    return total * circle.orientation.sign


def write_loop_csv(loop: SampledLoop, stream: TextIO) -> None:
    """Dump ``theta, re, im, unwrapped argument`` rows for plotting."""
    branch = log_continuation(loop, 0)
    theta = loop.circle.parameters(loop.n)
    writer = csv.writer(stream)
    writer.writerow(["theta", "re", "im", "arg_unwrapped"])
    for th, s, lv in zip(theta, loop.samples, branch.values):
        writer.writerow([repr(float(th)), repr(float(s.real)), repr(float(s.imag)), repr(float(lv.imag))])
