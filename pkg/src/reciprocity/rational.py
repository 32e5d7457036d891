"""Rational functions on the Riemann sphere kept in factored normal form.

A :class:`FactoredRational` is ``unit * prod (z - a)**m`` over distinct
Gaussian-rational roots ``a`` with nonzero integer multiplicities. Keeping the
factored form means divisors, valuations and local expansions are exact and
no root finding is ever needed. The point at infinity is reached only through
the chart ``z = 1/w`` (:func:`substitute_infinity`).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction
from types import MappingProxyType
from typing import Union

import numpy as np

from .errors import PoleOrZeroError
from .gaussian import ONE, ZERO, GaussianRational, Scalar, format_scalar


class _Infinity:
    """The point at infinity of the Riemann sphere (singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Point = Union[GaussianRational, _Infinity]


def _root_key(a: GaussianRational):
    return (a.re, a.im)


class FactoredRational:
    """``unit * prod (z - root)**mult`` in normal form.

    Normal form: ``unit != 0``, every multiplicity nonzero, roots distinct.
    Instances are immutable; every operation returns a new normal-form value.
    """

    __slots__ = ("_unit", "_factors")

    def __init__(self, unit: Scalar = 1, factors: Mapping | Iterable = ()):
        unit = GaussianRational.coerce(unit)
        if not unit:
            raise ValueError("zero unit: the zero function has no divisor")
        merged: dict[GaussianRational, int] = {}
        items = factors.items() if isinstance(factors, Mapping) else factors
        for root, mult in items:
            root = GaussianRational.coerce(root)
            if int(mult) != mult:
                raise ValueError(f"non-integer multiplicity {mult!r}")
            merged[root] = merged.get(root, 0) + int(mult)
        clean = {a: m for a, m in sorted(merged.items(), key=lambda kv: _root_key(kv[0])) if m}
        object.__setattr__(self, "_unit", unit)
        object.__setattr__(self, "_factors", clean)

    def __setattr__(self, name, value):
        raise AttributeError("FactoredRational is immutable")

    @classmethod
    def constant(cls, c: Scalar) -> FactoredRational:
        return cls(c)

    @classmethod
    def identity(cls) -> FactoredRational:
        """The coordinate function ``z``."""
        return cls(1, {ZERO: 1})

    @classmethod
    def linear(cls, root: Scalar, mult: int = 1) -> FactoredRational:
        return cls(1, {GaussianRational.coerce(root): mult})

    @property
    def unit(self) -> GaussianRational:
        return self._unit

    @property
    def factors(self) -> Mapping[GaussianRational, int]:
        return MappingProxyType(self._factors)

    def roots(self) -> list[GaussianRational]:
        return list(self._factors)

    def is_constant(self) -> bool:
        return not self._factors

    def degree(self) -> int:
        """Sum of multiplicities (numerator degree minus denominator degree)."""
        return sum(self._factors.values())

    # group operations on C(z)^*

    def __mul__(self, other):
        if isinstance(other, FactoredRational):
            merged = dict(self._factors)
            for a, m in other._factors.items():
                merged[a] = merged.get(a, 0) + m
            return FactoredRational(self._unit * other._unit, merged)
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return FactoredRational(self._unit * c, self._factors)

    __rmul__ = __mul__

    def inverse(self) -> FactoredRational:
        return FactoredRational(self._unit.inverse(), {a: -m for a, m in self._factors.items()})

    def __truediv__(self, other):
        if isinstance(other, FactoredRational):
            return self * other.inverse()
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return FactoredRational(self._unit / c, self._factors)

    def __rtruediv__(self, other):
        try:
            c = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.inverse() * c

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return FactoredRational(1)
        return FactoredRational(self._unit ** n, {a: m * n for a, m in self._factors.items()})

    def __neg__(self):
        return FactoredRational(-self._unit, self._factors)

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self._unit == other._unit and self._factors == other._factors

    def __hash__(self):
        return hash((self._unit, tuple(self._factors.items())))

    def __repr__(self):
        return f"FactoredRational({format_rational(self)!r})"

    def __str__(self):
        return format_rational(self)

    def __call__(self, p: Scalar) -> GaussianRational:
        return evaluate(self, p)

    def evaluate_many(self, z: np.ndarray) -> np.ndarray:
        """Floating-point values at the complex points ``z``."""
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, complex(self._unit), dtype=complex)
        for a, m in self._factors.items():
            out *= (z - complex(a)) ** m
        return out


def format_rational(f: FactoredRational) -> str:
    """Render ``f`` in the factored expression grammar (parse round-trips)."""
    parts = []
    if f.unit != ONE or not f.factors:
        parts.append(format_scalar(f.unit))
    for a, m in f.factors.items():
        if not a:
            term = "z"
        elif a.is_real() and a.re < 0:
            term = f"(z + {format_scalar(-a)})"
        else:
            term = f"(z - {format_scalar(a)})"
        if m != 1:
            term += f"^{m}"
        parts.append(term)
    return " * ".join(parts)


class Divisor:
    """Formal sum of points of the sphere with nonzero integer multiplicities."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[Point, int] | None = None):
        clean = {p: int(m) for p, m in (entries or {}).items() if m}
        object.__setattr__(self, "_entries", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Divisor is immutable")

    @property
    def entries(self) -> Mapping[Point, int]:
        return MappingProxyType(self._entries)

    def support(self) -> list[Point]:
        return list(self._entries)

    def degree(self) -> int:
        return sum(self._entries.values())

    def __getitem__(self, p: Point) -> int:
        return self._entries.get(p, 0)

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other):
        if isinstance(other, Divisor):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __repr__(self):
        body = ", ".join(f"{p}: {m}" for p, m in self._entries.items())
        return f"Divisor({{{body}}})"


def valuation(f: FactoredRational, p: Point) -> int:
    """Order of zero of ``f`` at ``p`` (negative for a pole)."""
    if p is INFINITY:
        return -f.degree()
    return f.factors.get(GaussianRational.coerce(p), 0)


def evaluate(f: FactoredRational, p: Scalar) -> GaussianRational:
    p = GaussianRational.coerce(p)
    if valuation(f, p) != 0:
        raise PoleOrZeroError(f"pole or zero at evaluation point {p}")
    value = f.unit
    for a, m in f.factors.items():
        value = value * (p - a) ** m
    return value


def divisor(f: FactoredRational) -> Divisor:
    entries: dict[Point, int] = dict(f.factors)
    at_infinity = -f.degree()
    if at_infinity:
        entries[INFINITY] = at_infinity
    return Divisor(entries)


def substitute_infinity(f: FactoredRational) -> FactoredRational:
    """Return ``w -> f(1/w)`` in factored form.

    Uses ``1/w - a = -a (w - 1/a) / w`` for ``a != 0``.
    """
    unit = f.unit
    factors: dict[GaussianRational, int] = {ZERO: -f.degree()}
    for a, m in f.factors.items():
        if a:
            unit = unit * (-a) ** m
            factors[a.inverse()] = factors.get(a.inverse(), 0) + m
    return FactoredRational(unit, factors)


# exact truncated power series in t = z - p, as coefficient lists

def _binomial_series(c: GaussianRational, m: int, order: int) -> list[GaussianRational]:
    """Coefficients of ``(c + t)**m`` up to ``t**(order-1)``; requires c != 0."""
    coeffs = []
    lead = c ** m
    inv_c = c.inverse()
    binom = Fraction(1)
    power = ONE
    for j in range(order):
        coeffs.append(lead * binom * power)
        binom = binom * (m - j) / (j + 1)
        power = power * inv_c
    return coeffs


def _series_mul(a: list, b: list, order: int) -> list:
    out = [ZERO] * order
    for i, ai in enumerate(a[:order]):
        if not ai:
            continue
        for j in range(order - i):
            if b[j]:
                out[i + j] = out[i + j] + ai * b[j]
    return out


def _finite_residue(f: FactoredRational, p: GaussianRational) -> GaussianRational:
    pole_order = -valuation(f, p)
    if pole_order <= 0:
        return ZERO
    series = [f.unit] + [ZERO] * (pole_order - 1)
    for a, m in f.factors.items():
        if a == p:
            continue
        series = _series_mul(series, _binomial_series(p - a, m, pole_order), pole_order)
    return series[pole_order - 1]


def residue(f: FactoredRational, p: Point) -> GaussianRational:
    """Residue of the 1-form ``f(z) dz`` at ``p``.

    At infinity this is the residue at ``w = 0`` of ``-f(1/w) / w**2 dw``.
    """
    if p is INFINITY:
        g = -substitute_infinity(f) * FactoredRational(1, {ZERO: -2})
        return _finite_residue(g, ZERO)
    return _finite_residue(f, GaussianRational.coerce(p))
