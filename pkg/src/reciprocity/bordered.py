"""Planar bordered domains (a disk minus disjoint holes) and reciprocity checks.

For functions with no zeros or poles on the closed domain, the pairings T
taken over the boundary circles with their induced orientation (outer circle
counterclockwise, holes clockwise) multiply to 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, TextIO, Union

import numpy as np

from .errors import DomainError, InadmissibleError, OnContourError, ReciprocityError
from .gaussian import ONE, GaussianRational
from .loops import (
    DEFAULT_SAMPLES,
    DEFAULT_TOL,
    Orientation,
    OrientedCircle,
    restrict,
    t_pairing,
    t_pairing_oracle,
)
from .parser import parse_rational, parse_real, parse_scalar
from .rational import FactoredRational


@dataclass(frozen=True)
class BorderedDomain:
    outer: OrientedCircle
    holes: tuple[OrientedCircle, ...] = ()

    def __post_init__(self):
        outer = self.outer.with_orientation(Orientation.CCW)
        holes = tuple(h.with_orientation(Orientation.CCW) for h in self.holes)
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "holes", holes)
        for k, h in enumerate(holes):
            gap = outer.radius - h.radius
            if gap <= 0 or (h.center - outer.center).norm() >= gap ** 2:
                raise DomainError(f"hole not inside outer: hole {k} ({h}) vs outer ({outer})")
        for j in range(len(holes)):
            for k in range(j + 1, len(holes)):
                a, b = holes[j], holes[k]
                if (a.center - b.center).norm() <= (a.radius + b.radius) ** 2:
                    raise DomainError(f"holes overlap: hole {j} ({a}) and hole {k} ({b})")

    @classmethod
    def disk(cls, center, radius, holes: Sequence[tuple] = ()) -> BorderedDomain:
        return cls(OrientedCircle(center, radius), tuple(OrientedCircle(c, r) for c, r in holes))


def induced_boundary(domain: BorderedDomain) -> list[OrientedCircle]:
    """Boundary circles with the orientation induced from the domain."""
    return [domain.outer] + [h.with_orientation(Orientation.CW) for h in domain.holes]


def check_admissible(f: FactoredRational, domain: BorderedDomain) -> None:
    """Raise unless every divisor point of ``f`` is off the closed domain.

    A point on a boundary circle raises :class:`OnContourError`; a point in
    the interior raises :class:`InadmissibleError`.
    """
    circles = [domain.outer, *domain.holes]
    for a in f.roots():
        for c in circles:
            if c.on_contour(a):
                raise OnContourError(a, c)
        if not domain.outer.strictly_inside(a):
            continue
        if not any(h.strictly_inside(a) for h in domain.holes):
            raise InadmissibleError(a, "inside domain body")


def admissible(f: FactoredRational, domain: BorderedDomain) -> bool:
    try:
        check_admissible(f, domain)
    except (InadmissibleError, OnContourError):
        return False
    return True


def tame_circle_oracle(f: FactoredRational, g: FactoredRational,
                       domain: BorderedDomain) -> list[GaussianRational]:
    check_admissible(f, domain)
    check_admissible(g, domain)
    return [t_pairing_oracle(f, g, c) for c in induced_boundary(domain)]


@dataclass
class ReciprocityReport:
    circles: list[OrientedCircle]
    values: list[complex]
    oracle: list[GaussianRational]
    product: complex
    defect: float
    tol: float
    passed: bool
    oracle_product: GaussianRational = ONE
    t: Optional[Fraction] = None
    error: Optional[str] = None

    @property
    def oracle_errors(self) -> list[float]:
        return [abs(v - complex(o)) for v, o in zip(self.values, self.oracle)]

    def to_dict(self) -> dict:
        return {
            "t": None if self.t is None else str(self.t),
            "passed": self.passed,
            "error": self.error,
            "defect": self.defect,
            "tol": self.tol,
            "product": [self.product.real, self.product.imag],
            "oracle_product": str(self.oracle_product),
            "circles": [
                {
                    "center": str(c.center),
                    "radius": str(c.radius),
                    "orientation": c.orientation.value,
                    "T": [v.real, v.imag],
                    "oracle": str(o),
                    "oracle_error": err,
                }
                for c, v, o, err in zip(self.circles, self.values, self.oracle, self.oracle_errors)
            ],
        }

    @classmethod
    def failure(cls, t, message: str, tol: float) -> ReciprocityReport:
        return cls([], [], [], complex("nan"), float("inf"), tol, False, ONE, t, message)


def deligne_check(f: FactoredRational, g: FactoredRational, domain: BorderedDomain,
                  n: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL) -> ReciprocityReport:
    """Compute T over each boundary circle and compare the product with 1."""
    oracle = tame_circle_oracle(f, g, domain)
    circles = induced_boundary(domain)
    values = []
    for c in circles:
        values.append(t_pairing(restrict(f, c, n), restrict(g, c, n)))
    product = complex(np.prod(values))
    oracle_product = ONE
    for o in oracle:
        oracle_product = oracle_product * o
    defect = abs(product - 1)
    return ReciprocityReport(circles, values, oracle, product, defect, tol, defect <= tol, oracle_product)


RationalSchedule = Union[str, Callable[[Fraction], FactoredRational]]


@dataclass(frozen=True)
class FamilySpec:
    """A finite grid of parameter values with a domain attached to each.

    ``domain_at`` maps an exact parameter value to its fiber's domain.
    """

    t_grid: tuple[Fraction, ...]
    domain_at: Callable[[Fraction], BorderedDomain] = field(compare=False)

    @classmethod
    def affine(cls, t_grid: Sequence, outer: tuple[str, str],
               holes: Sequence[tuple[str, str]] = ()) -> FamilySpec:
        """Build from ``(center, radius)`` literals that may be affine in ``t``."""
        grid = tuple(parse_real(str(t)) for t in t_grid)

        def domain_at(t: Fraction) -> BorderedDomain:
            return BorderedDomain(
                OrientedCircle(parse_scalar(outer[0], t), parse_real(outer[1], t)),
                tuple(OrientedCircle(parse_scalar(c, t), parse_real(r, t)) for c, r in holes),
            )

        return cls(grid, domain_at)


def _at(schedule: RationalSchedule, t: Fraction) -> FactoredRational:
    if isinstance(schedule, str):
        return parse_rational(schedule, t)
    return schedule(t)


def family_sweep(spec: FamilySpec, f: RationalSchedule, g: RationalSchedule,
                 n: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL) -> list[ReciprocityReport]:
    """Run :func:`deligne_check` on every fiber; failing fibers do not stop the sweep."""
    reports = []
    for t in spec.t_grid:
        try:
            report = deligne_check(_at(f, t), _at(g, t), spec.domain_at(t), n, tol)
            report.t = t
        except OnContourError as exc:
            report = ReciprocityReport.failure(t, f"on-contour: {exc}", tol)
        except ReciprocityError as exc:
            report = ReciprocityReport.failure(t, str(exc), tol)
        reports.append(report)
    return reports


def sweep_passed(reports: Sequence[ReciprocityReport]) -> bool:
    return all(r.passed for r in reports)


CSV_COLUMNS = ["t", "circle", "re_T", "im_T", "oracle_re", "oracle_im", "defect"]


def write_reports_csv(reports: Sequence[ReciprocityReport], stream: TextIO) -> None:
    """One row per (fiber, boundary circle); failed fibers get a single empty row."""
    writer = csv.writer(stream)
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        t = "" if r.t is None else str(r.t)
        if not r.values:
            writer.writerow([t, "", "", "", "", "", ""])
            continue
        for k, (v, o) in enumerate(zip(r.values, r.oracle)):
            writer.writerow([t, k, repr(v.real), repr(v.imag),
                             repr(float(o.re)), repr(float(o.im)), repr(r.defect)])
