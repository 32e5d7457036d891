"""JSON scenario files: loading, validation, and check dispatch.

Example::

    {"functions": {"f": "z", "g": "(z-3)"},
     "domain": {"outer": {"center": "0", "radius": "2"},
                "holes": [{"center": "0", "radius": "1/2"}]},
     "checks": [{"type": "deligne", "f": "f", "g": "g"}],
     "numeric": {"samples": 4096, "tol": "1e-8"}}

Geometric literals are exact rational strings. With a ``"family"`` block,
function texts and circle literals may use ``t`` (affine, ``a+b*t``) and
``sweep`` checks run one reciprocity check per grid value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .bordered import (
    BorderedDomain,
    FamilySpec,
    ReciprocityReport,
    check_admissible,
    deligne_check,
    family_sweep,
    sweep_passed,
)
from .errors import ExpressionSyntaxError, ReciprocityError, ScenarioError, UnderSampledError
from .gaussian import ONE
from .loops import DEFAULT_SAMPLES, DEFAULT_TOL, Orientation, OrientedCircle, restrict, t_pairing
from .parser import parse_rational, parse_real, parse_scalar
from .rational import INFINITY, FactoredRational, Point
from . import randomized
from .symbols import residue_sum_check, tame_symbol, weil_product

CHECK_TYPES = ("residue_sum", "weil", "deligne", "sweep", "tame", "property")
PROPERTY_SUITES = ("weil", "residue", "tame", "deligne")

# defects below this are round-off; refinement cannot be resolved further
CONVERGED_FLOOR = 1e-14

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass
class Scenario:
    functions: dict[str, str]
    checks: list[dict[str, Any]]
    domain: Optional[dict[str, Any]] = None
    family: Optional[dict[str, Any]] = None
    samples: int = DEFAULT_SAMPLES
    tol: float = DEFAULT_TOL
    seed: int = 0
    parsed: dict[str, FactoredRational] = field(default_factory=dict, repr=False)
    bordered: Optional[BorderedDomain] = field(default=None, repr=False)
    family_spec: Optional[FamilySpec] = field(default=None, repr=False)
    source: Optional[str] = None

    def function(self, name: str) -> FactoredRational:
        if name not in self.parsed:
            raise ScenarioError(f"function {name} depends on t; use it only in sweep checks")
        return self.parsed[name]


@dataclass
class CheckResult:
    index: int
    kind: str
    passed: bool
    summary: str
    defect: Optional[float] = None
    details: dict[str, Any] = field(default_factory=dict)
    reports: list[ReciprocityReport] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "index": self.index,
            "type": self.kind,
            "passed": self.passed,
            "summary": self.summary,
            "defect": self.defect,
            **self.details,
        }
        if self.reports:
            out["reports"] = [r.to_dict() for r in self.reports]
        return out


def _circle(spec: Any, where: str, t=None) -> OrientedCircle:
    if not isinstance(spec, dict) or "center" not in spec or "radius" not in spec:
        raise ScenarioError(f"{where}: expected an object with 'center' and 'radius'")
    for key in ("center", "radius"):
        if not isinstance(spec[key], str):
            raise ScenarioError(f"{where}.{key}: geometric literals must be exact strings, e.g. \"1/2\"")
    try:
        radius = parse_real(spec["radius"], t)
        if radius <= 0:
            raise ScenarioError(f"{where}.radius: must be positive")
        return OrientedCircle(parse_scalar(spec["center"], t), radius)
    except ExpressionSyntaxError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _domain(spec: Any, t=None) -> BorderedDomain:
    if not isinstance(spec, dict) or "outer" not in spec:
        raise ScenarioError("domain: expected an object with 'outer'")
    outer = _circle(spec["outer"], "domain.outer", t)
    holes = tuple(_circle(h, f"domain.holes[{k}]", t) for k, h in enumerate(spec.get("holes", [])))
    return BorderedDomain(outer, holes)


def _family_spec(scenario: Scenario) -> FamilySpec:
    fam = scenario.family
    grid = fam.get("t_grid")
    if not isinstance(grid, list) or not grid:
        raise ScenarioError("family.t_grid: expected a nonempty list of exact literals")
    try:
        t_values = tuple(parse_real(str(t)) for t in grid)
    except ExpressionSyntaxError as exc:
        raise ScenarioError(f"family.t_grid: {exc}") from exc
    dom = scenario.domain
    if fam.get("substitute", True):
        return FamilySpec(t_values, lambda t: _domain(dom, t))
    fixed = _domain(dom)
    return FamilySpec(t_values, lambda t: fixed)


def _point(text: str) -> Point:
    if str(text).strip() in ("oo", "inf", "infinity"):
        return INFINITY
    return parse_scalar(str(text))


def scenario_from_dict(data: Any, source: Optional[str] = None) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    functions = data.get("functions")
    if not isinstance(functions, dict) or not functions:
        raise ScenarioError("functions: expected a nonempty object of expression strings")
    checks = data.get("checks")
    if not isinstance(checks, list) or not checks:
        raise ScenarioError("checks: expected a nonempty list")
    numeric = data.get("numeric", {}) or {}
    try:
        samples = int(numeric.get("samples", DEFAULT_SAMPLES))
        tol = float(numeric.get("tol", DEFAULT_TOL))
        seed = int(numeric.get("seed", 0))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"numeric: {exc}") from exc
    sc = Scenario(dict(functions), list(checks), data.get("domain"), data.get("family"),
                  samples, tol, seed, source=source)
    validate(sc)
    return sc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return scenario_from_dict(data, str(path))


def validate(sc: Scenario) -> None:
    """Parse every expression and check geometry and references exactly."""
    if sc.samples < 16 or sc.samples & (sc.samples - 1):
        raise ScenarioError(f"numeric.samples: must be a power of two >= 16, got {sc.samples}")
    family_grid = None
    if sc.family is not None:
        if sc.domain is None:
            raise ScenarioError("family requires a domain")
        sc.family_spec = _family_spec(sc)
        family_grid = sc.family_spec.t_grid
    for name, text in sc.functions.items():
        if not isinstance(text, str):
            raise ScenarioError(f"functions.{name}: expected an expression string")
        try:
            sc.parsed[name] = parse_rational(text)
        except ExpressionSyntaxError as exc:
            if family_grid is None or "parameter 't'" not in str(exc):
                raise ScenarioError(f"functions.{name}: {exc}") from exc
            for t in family_grid:
                try:
                    parse_rational(text, t)
                except ExpressionSyntaxError as exc2:
                    raise ScenarioError(f"functions.{name} at t={t}: {exc2}") from exc2
        except ValueError as exc:
            raise ScenarioError(f"functions.{name}: {exc}") from exc
    if sc.domain is not None:
        if sc.family is None:
            sc.bordered = _domain(sc.domain)
        elif not sc.family.get("substitute", True):
            sc.bordered = _domain(sc.domain)
        else:
            for t in family_grid:
                sc.family_spec.domain_at(t)
            try:
                sc.bordered = _domain(sc.domain)
            except (ReciprocityError, ExpressionSyntaxError):
                sc.bordered = None
    for k, check in enumerate(sc.checks):
        _validate_check(sc, k, check)


def _validate_check(sc: Scenario, k: int, check: Any) -> None:
    where = f"checks[{k}]"
    if not isinstance(check, dict):
        raise ScenarioError(f"{where}: expected an object")
    kind = check.get("type")
    if kind not in CHECK_TYPES:
        raise ScenarioError(f"{where}: unknown check type {kind!r}")
    if kind == "property":
        if check.get("suite") not in PROPERTY_SUITES:
            raise ScenarioError(f"{where}: property suite must be one of {', '.join(PROPERTY_SUITES)}")
        return
    names = ["f"] if kind == "residue_sum" else ["f", "g"]
    for key in names:
        name = check.get(key)
        if name not in sc.functions:
            raise ScenarioError(f"unknown function {name}")
        if kind != "sweep" and name not in sc.parsed:
            raise ScenarioError(f"{where}: function {name} depends on t; use it only in sweep checks")
    if kind in ("deligne", "sweep") and sc.domain is None:
        raise ScenarioError(f"{where}: a domain is required for {kind} checks")
    if kind == "sweep" and sc.family_spec is None:
        raise ScenarioError(f"{where}: a family block is required for sweep checks")
    if kind == "deligne":
        if sc.bordered is None:
            raise ScenarioError(f"{where}: domain depends on t; use a sweep check")
        for key in names:
            check_admissible(sc.parsed[check[key]], sc.bordered)
    if kind == "tame":
        try:
            _point(check.get("point", "0"))
            if "expected" in check:
                parse_scalar(str(check["expected"]))
        except ExpressionSyntaxError as exc:
            raise ScenarioError(f"{where}: {exc}") from exc


# running

def _small_circle(f: FactoredRational, g: FactoredRational, p: Point) -> OrientedCircle:
    """Circle isolating ``p`` from every other divisor point (a large CW circle at infinity)."""
    roots = set(f.roots()) | set(g.roots())
    if p is INFINITY:
        radius = Fraction(1)
        while any((2 * radius) ** 2 <= a.norm() for a in roots):
            radius *= 2
        return OrientedCircle(0, 4 * radius, Orientation.CW)
    others = [a for a in roots if a != p]
    radius = Fraction(1)
    while others and min((a - p).norm() for a in others) <= (2 * radius) ** 2:
        radius /= 2
    return OrientedCircle(p, radius)


def _tame_numeric(f, g, p, n: int):
    circle = _small_circle(f, g, p)
    return t_pairing(restrict(f, circle, n), restrict(g, circle, n)), circle


def _run_check(sc: Scenario, k: int, check: dict, n: int, tol: float) -> CheckResult:
    kind = check["type"]
    if kind == "residue_sum":
        total = residue_sum_check(sc.function(check["f"]))
        ok = total == 0
        return CheckResult(k, kind, ok, f"sum of residues = {total}", None, {"value": str(total)})
    if kind == "weil":
        prod = weil_product(sc.function(check["f"]), sc.function(check["g"]))
        ok = prod == ONE
        return CheckResult(k, kind, ok, f"product of tame symbols = {prod}", None, {"value": str(prod)})
    if kind == "tame":
        f, g = sc.function(check["f"]), sc.function(check["g"])
        p = _point(check.get("point", "0"))
        symbol = tame_symbol(f, g, p)
        ok = True
        details = {"point": str(p), "value": str(symbol)}
        if "expected" in check:
            expected = parse_scalar(str(check["expected"]))
            ok = symbol == expected
            details["expected"] = str(expected)
        value, circle = _tame_numeric(f, g, p, n)
        defect = abs(value - complex(symbol))
        ok = ok and defect <= tol
        details.update(T=[value.real, value.imag], circle=str(circle))
        return CheckResult(k, kind, ok, f"symbol {symbol}, |T - symbol| = {defect:.3e}", defect, details)
    if kind == "deligne":
        r = deligne_check(sc.function(check["f"]), sc.function(check["g"]), sc.bordered, n, tol)
        return CheckResult(k, kind, r.passed, f"|prod T - 1| = {r.defect:.3e}", r.defect, reports=[r])
    if kind == "sweep":
        reports = family_sweep(sc.family_spec, _schedule(sc, check["f"]), _schedule(sc, check["g"]), n, tol)
        ok = sweep_passed(reports)
        bad = [str(r.t) for r in reports if not r.passed]
        worst = max((r.defect for r in reports if r.values), default=None)
        summary = f"{len(reports) - len(bad)}/{len(reports)} fibers pass"
        if bad:
            summary += f" (failing t: {', '.join(bad)})"
        return CheckResult(k, kind, ok, summary, worst, reports=reports)
    return _run_property(sc, k, check, n, tol)


def _schedule(sc: Scenario, name: str):
    text = sc.functions[name]
    return lambda t: parse_rational(text, t)


def _run_property(sc: Scenario, k: int, check: dict, n: int, tol: float) -> CheckResult:
    suite = check["suite"]
    count = int(check.get("count", 200 if suite in ("weil", "residue") else 50))
    seed = int(check.get("seed", sc.seed))
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(count):
        if suite == "weil":
            failures += weil_product(randomized.random_rational(rng), randomized.random_rational(rng)) != ONE
        elif suite == "residue":
            failures += residue_sum_check(randomized.random_rational(rng)) != 0
        elif suite == "tame":
            f, g, p, circle = randomized.random_single_point_config(rng)
            d = abs(t_pairing(restrict(f, circle, n), restrict(g, circle, n)) - complex(tame_symbol(f, g, p)))
            worst = max(worst, d)
            failures += d > tol
        else:
            domain = randomized.random_domain(rng)
            f, g = randomized.random_admissible_pair(rng, domain)
            r = deligne_check(f, g, domain, n, tol)
            d = max([r.defect, *r.oracle_errors])
            worst = max(worst, d)
            failures += d > tol
    exact = suite in ("weil", "residue")
    summary = f"{count - failures}/{count} random cases pass (seed {seed})"
    if not exact:
        summary += f", worst defect {worst:.3e}"
    details = {"suite": suite, "count": count, "seed": seed, "failures": int(failures)}
    return CheckResult(k, "property", failures == 0, summary, None if exact else worst, details)


def run(sc: Scenario, samples: Optional[int] = None, tol: Optional[float] = None,
        seed: Optional[int] = None) -> tuple[int, list[CheckResult]]:
    """Execute every check in declaration order; return (exit code, results)."""
    n = samples or sc.samples
    tol = sc.tol if tol is None else tol
    if seed is not None:
        sc.seed = seed
    results = []
    for k, check in enumerate(sc.checks):
        try:
            results.append(_run_check(sc, k, check, n, tol))
        except ReciprocityError as exc:
            results.append(CheckResult(k, check["type"], False, f"error: {exc}"))
    code = EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL
    return code, results


def report_dict(sc: Scenario, results: list[CheckResult], samples: int, tol: float) -> dict:
    return {
        "scenario": sc.source,
        "samples": samples,
        "tol": tol,
        "seed": sc.seed,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=True)


# convergence

@dataclass
class ConvergenceRow:
    samples: int
    check: int
    kind: str
    defect: Optional[float]
    error: Optional[str] = None


def convergence_study(sc: Scenario, grid: list[int]) -> tuple[list[ConvergenceRow], dict[int, bool]]:
    """Defect of every deligne/tame check at each sample count.

    Returns the rows and, per check, whether the computed defects are
    nonincreasing along the grid (defects under ``CONVERGED_FLOOR`` count as
    equal). Rows that fail to sample record the error and are skipped by the
    monotonicity flag.
    """
    targets = [(k, c) for k, c in enumerate(sc.checks) if c["type"] in ("deligne", "tame")]
    if not targets:
        raise ScenarioError("convergence study needs a deligne or tame check")
    rows = []
    for n in grid:
        for k, check in targets:
            try:
                if check["type"] == "deligne":
                    f, g = sc.function(check["f"]), sc.function(check["g"])
                    defect = deligne_check(f, g, sc.bordered, n, sc.tol).defect
                else:
                    f, g = sc.function(check["f"]), sc.function(check["g"])
                    p = _point(check.get("point", "0"))
                    value, _ = _tame_numeric(f, g, p, n)
                    defect = abs(value - complex(tame_symbol(f, g, p)))
                rows.append(ConvergenceRow(n, k, check["type"], defect))
            except UnderSampledError as exc:
                rows.append(ConvergenceRow(n, k, check["type"], None, str(exc)))
    monotone = {}
    for k, _ in targets:
        seq = [r.defect for r in rows if r.check == k and r.defect is not None]
        monotone[k] = all(b <= max(a, CONVERGED_FLOOR) for a, b in zip(seq, seq[1:]))
    return rows, monotone


def convergence_csv(rows: list[ConvergenceRow], monotone: dict[int, bool]) -> str:
    lines = ["samples,check,type,defect,monotone,error"]
    for r in rows:
        defect = "" if r.defect is None else repr(r.defect)
        err = "" if r.error is None else '"' + r.error.replace('"', "'") + '"'
        lines.append(f"{r.samples},{r.check},{r.kind},{defect},{str(monotone[r.check]).lower()},{err}")
    return "\n".join(lines) + "\n"
