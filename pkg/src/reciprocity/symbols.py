"""Tame symbols, Weil products and residue sums on the Riemann sphere."""

from __future__ import annotations

from .gaussian import ONE, ZERO, GaussianRational
from .rational import (
    INFINITY,
    FactoredRational,
    Point,
    divisor,
    evaluate,
    residue,
    substitute_infinity,
    valuation,
)


def tame_symbol(f: FactoredRational, g: FactoredRational, p: Point) -> GaussianRational:
    """``(-1)**(v_f v_g) * [f**v_g / g**v_f](p)`` with ``v = valuation at p``.

    At infinity both functions are pulled back along ``z = 1/w`` and the
    symbol is taken at ``w = 0``.
    """
    if p is INFINITY:
        return tame_symbol(substitute_infinity(f), substitute_infinity(g), ZERO)
    p = GaussianRational.coerce(p)
    vf = valuation(f, p)
    vg = valuation(g, p)
    bracket = f ** vg / g ** vf
    if valuation(bracket, p) != 0:
        raise AssertionError("tame-symbol bracket has nonzero valuation")
    sign = -1 if (vf * vg) % 2 else 1
    return evaluate(bracket, p) * sign


def symbol_support(f: FactoredRational, g: FactoredRational) -> list[Point]:
    """Finite divisor points of ``f`` and ``g`` (deterministic order), then infinity."""
    points: list[Point] = []
    seen = set()
    for h in (f, g):
        for p in divisor(h):
            if p is not INFINITY and p not in seen:
                seen.add(p)
                points.append(p)
    points.append(INFINITY)
    return points


def weil_product(f: FactoredRational, g: FactoredRational) -> GaussianRational:
    """Product of all tame symbols of ``f`` and ``g``; equals 1 on the sphere."""
    total = ONE
    for p in symbol_support(f, g):
        total = total * tame_symbol(f, g, p)
    return total


def residue_sum_check(f: FactoredRational) -> GaussianRational:
    """Sum of residues of ``f dz`` over all its poles including infinity (always 0)."""
    total = ZERO
    for p in list(f.factors) + [INFINITY]:
        total = total + residue(f, p)
    return total
