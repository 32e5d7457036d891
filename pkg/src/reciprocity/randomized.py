"""Seeded generators of random exact test configurations.

Everything returned here is exact (Gaussian-rational roots, rational radii)
and reproducible from the ``numpy.random.Generator`` passed in. Circle
configurations keep every divisor point at distance at least a quarter radius
from every contour so that sampled quadratures converge quickly.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .bordered import BorderedDomain, tame_circle_oracle
from .gaussian import GaussianRational
from .loops import OrientedCircle, t_pairing_oracle
from .rational import FactoredRational
from .symbols import tame_symbol

ROOT_POOL = tuple(
    GaussianRational(re, im)
    for re, im in [
        (0, 0), (1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1),
        (1, 1), (1, -1), (Fraction(1, 2), 0), (3, 0),
    ]
)

UNITS = tuple(
    GaussianRational(re, im)
    for re, im in [(1, 0), (-1, 0), (2, 0), (Fraction(1, 3), 0), (0, 1), (1, 1), (Fraction(-3, 2), Fraction(1, 2))]
)


# |T| beyond this loses absolute accuracy in double precision
MAX_MAGNITUDE = 1e3


def moderate(values, bound: float = MAX_MAGNITUDE) -> bool:
    """True if every exact value has modulus within [1/bound, bound]."""
    for v in values:
        n = float(GaussianRational.coerce(v).norm())
        if not bound ** -2 <= n <= bound ** 2:
            return False
    return True


def _choice(rng: np.random.Generator, seq):
    return seq[int(rng.integers(len(seq)))]


def random_unit(rng: np.random.Generator) -> GaussianRational:
    return _choice(rng, UNITS)


def random_rational(rng: np.random.Generator, pool=ROOT_POOL, max_factors: int = 4,
                    max_mult: int = 3) -> FactoredRational:
    """Random ``unit * prod (z - a)**m`` with roots from ``pool`` and |m| <= max_mult."""
    k = int(rng.integers(0, max_factors + 1))
    factors: dict[GaussianRational, int] = {}
    for _ in range(k):
        a = _choice(rng, pool)
        factors[a] = factors.get(a, 0) + int(rng.integers(-max_mult, max_mult + 1))
    return FactoredRational(random_unit(rng), factors)


def _grid_point(rng: np.random.Generator, scale: Fraction, steps: int = 8) -> GaussianRational:
    """Point ``scale * (a + b i) / steps`` with integer |a|, |b| <= steps."""
    a, b = (int(x) for x in rng.integers(-steps, steps + 1, size=2))
    return GaussianRational(Fraction(a, steps) * scale, Fraction(b, steps) * scale)


def point_inside(rng: np.random.Generator, circle: OrientedCircle, ratio=Fraction(3, 4)) -> GaussianRational:
    """Random point at distance <= ratio * radius from the center."""
    while True:
        u = _grid_point(rng, ratio * circle.radius)
        if u.norm() <= (ratio * circle.radius) ** 2:
            return circle.center + u


def point_outside(rng: np.random.Generator, circle: OrientedCircle, ratio=Fraction(5, 4),
                  reach=Fraction(3)) -> GaussianRational:
    """Random point at distance in [ratio * r, reach * r] from the center."""
    r = circle.radius
    while True:
        u = _grid_point(rng, reach * r)
        if (ratio * r) ** 2 <= u.norm() <= (reach * r) ** 2:
            return circle.center + u


def rational_from_points(rng: np.random.Generator, points, max_mult: int = 2) -> FactoredRational:
    factors = {}
    for a in points:
        m = 0
        while m == 0:
            m = int(rng.integers(-max_mult, max_mult + 1))
        factors[a] = factors.get(a, 0) + m
    return FactoredRational(random_unit(rng), factors)


def random_circle(rng: np.random.Generator) -> OrientedCircle:
    center = _grid_point(rng, Fraction(1), steps=4)
    radius = Fraction(int(rng.integers(1, 9)), 4)
    return OrientedCircle(center, radius)


def random_loop_pair(rng: np.random.Generator, max_points: int = 3):
    """``(f, g, circle)`` with all divisor points well away from the circle.

    Rejects pairs whose exact pairing values in either order are not moderate.
    """
    while True:
        f, g, circle = _loop_pair(rng, max_points)
        if moderate([t_pairing_oracle(f, g, circle), t_pairing_oracle(g, f, circle)]):
            return f, g, circle


def _loop_pair(rng, max_points):
    circle = random_circle(rng)

    def pts():
        out = []
        for _ in range(int(rng.integers(0, max_points + 1))):
            out.append(point_inside(rng, circle) if rng.random() < 0.5 else point_outside(rng, circle))
        return out

    return rational_from_points(rng, pts()), rational_from_points(rng, pts()), circle


def random_triple(rng: np.random.Generator, max_points: int = 3):
    """``(f1, f2, g, circle)`` on one circle, for bimultiplicativity checks."""
    while True:
        f1, g, circle = _loop_pair(rng, max_points)
        pts = [point_inside(rng, circle) if rng.random() < 0.5 else point_outside(rng, circle)
               for _ in range(int(rng.integers(0, max_points + 1)))]
        f2 = rational_from_points(rng, pts)
        values = [t_pairing_oracle(h, g, circle) for h in (f1, f2, f1 * f2)]
        if moderate(values):
            return f1, f2, g, circle


def random_single_point_config(rng: np.random.Generator):
    """``(f, g, p, circle)`` where ``circle`` encloses exactly the divisor point ``p``.

    ``p`` is a zero or pole of at least one of the functions.
    """
    while True:
        f = random_rational(rng)
        g = random_rational(rng)
        support = sorted(set(f.roots()) | set(g.roots()), key=lambda a: (a.re, a.im))
        if not support:
            continue
        p = _choice(rng, support)
        if moderate([tame_symbol(f, g, p)]):
            break
    others = [a for a in support if a != p]
    radius = Fraction(1, 2)
    # every other divisor point stays at distance >= 2 * radius from p
    while others and min((a - p).norm() for a in others) < (2 * radius) ** 2:
        radius /= 2
    offset = _grid_point(rng, radius / 4, steps=2)
    return f, g, p, OrientedCircle(p + offset, radius)


def random_domain(rng: np.random.Generator, max_holes: int = 3) -> BorderedDomain:
    """Disk minus up to ``max_holes`` holes; holes are separated by a margin."""
    radius = Fraction(int(rng.integers(2, 5)))
    outer = OrientedCircle(0, radius)
    n_holes = int(rng.integers(0, max_holes + 1))
    holes: list[OrientedCircle] = []
    tries = 0
    while len(holes) < n_holes and tries < 200:
        tries += 1
        r = Fraction(int(rng.integers(1, 5)), 4)
        c = _grid_point(rng, radius, steps=8)
        margin = Fraction(3, 2)
        gap = radius - margin * r
        if gap <= 0 or c.norm() >= gap ** 2:
            continue
        if any((c - h.center).norm() <= (margin * (r + h.radius)) ** 2 for h in holes):
            continue
        holes.append(OrientedCircle(c, r))
    return BorderedDomain(outer, tuple(holes))


def random_admissible_pair(rng: np.random.Generator, domain: BorderedDomain, max_points: int = 4):
    """Functions whose divisor points sit inside holes or outside the outer circle.

    Rejects pairs whose exact per-circle values are not moderate.
    """
    while True:
        f, g = _admissible_pair(rng, domain, max_points)
        if moderate(tame_circle_oracle(f, g, domain)):
            return f, g


def _admissible_pair(rng, domain, max_points):
    def pts():
        out = []
        for _ in range(int(rng.integers(0, max_points + 1))):
            if domain.holes and rng.random() < 0.6:
                out.append(point_inside(rng, _choice(rng, domain.holes)))
            else:
                out.append(point_outside(rng, domain.outer))
        return out

    return rational_from_points(rng, pts()), rational_from_points(rng, pts())
