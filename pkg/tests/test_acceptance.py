"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary."""

import json
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from reciprocity.bordered import BorderedDomain, FamilySpec, deligne_check, family_sweep
from reciprocity.gaussian import ONE
from reciprocity.loops import enclosed_winding, restrict, t_pairing, winding_number
from reciprocity.parser import parse_rational as P
from reciprocity.randomized import (
    random_admissible_pair,
    random_domain,
    random_loop_pair,
    random_rational,
    random_single_point_config,
    random_triple,
)
from reciprocity.symbols import residue_sum_check, tame_symbol, weil_product

from conftest import ACCEPTANCE_LINES

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"
SEED = 20261017
N = 4096
TOL = 1e-8
HALF = Fraction(1, 2)


def record(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
    assert ok, detail


def test_1_exact_weil_reciprocity():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    count = 300
    bad = sum(weil_product(random_rational(rng), random_rational(rng)) != ONE for _ in range(count))
    elapsed = time.perf_counter() - start
    record(1, "exact Weil reciprocity", bad == 0 and elapsed < 5,
           f"{count - bad}/{count} pairs give exactly 1 in {elapsed:.2f}s (limit 5s)")


def test_2_exact_residue_theorem():
    rng = np.random.default_rng(SEED + 1)
    start = time.perf_counter()
    count = 300
    bad = sum(residue_sum_check(random_rational(rng)) != 0 for _ in range(count))
    elapsed = time.perf_counter() - start
    record(2, "exact residue theorem", bad == 0 and elapsed < 5,
           f"{count - bad}/{count} functions sum to exactly 0 in {elapsed:.2f}s (limit 5s)")


def test_3_pairing_equals_tame_symbol_on_small_circles():
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    count = 60
    worst = 0.0
    for _ in range(count):
        f, g, p, circle = random_single_point_config(rng)
        enclosed = [a for a in set(f.roots()) | set(g.roots()) if circle.strictly_inside(a)]
        assert enclosed == [p]
        value = t_pairing(restrict(f, circle, N), restrict(g, circle, N))
        worst = max(worst, abs(value - complex(tame_symbol(f, g, p))))
    elapsed = time.perf_counter() - start
    record(3, "T equals the tame symbol on small circles", worst <= TOL and elapsed < 30,
           f"{count} circles, max |T - symbol| = {worst:.2e} (tol {TOL:g}) in {elapsed:.2f}s (limit 30s)")


def test_4_analytic_reciprocity_law():
    start = time.perf_counter()
    annulus = BorderedDomain.disk(0, 2, [(0, HALF)])
    pants = BorderedDomain.disk(0, 4, [(0, HALF), (2, HALF)])
    cases = [(P("z"), P("(z-3)"), annulus), (P("z"), P("(z-2)"), pants)]
    rng = np.random.default_rng(SEED + 3)
    count = 60
    for _ in range(count):
        domain = random_domain(rng)
        cases.append((*random_admissible_pair(rng, domain), domain))
    worst_product = worst_circle = 0.0
    for f, g, domain in cases:
        r = deligne_check(f, g, domain, N, TOL)
        worst_product = max(worst_product, r.defect)
        worst_circle = max(worst_circle, *r.oracle_errors)
    holes = {len(d.holes) for _, _, d in cases}
    elapsed = time.perf_counter() - start
    ok = worst_product <= TOL and worst_circle <= TOL and elapsed < 60 and 3 in holes
    record(4, "analytic reciprocity on bordered domains", ok,
           f"2 fixtures + {count} random domains (hole counts {sorted(holes)}): "
           f"max |prod T - 1| = {worst_product:.2e}, max |T - oracle| = {worst_circle:.2e} "
           f"in {elapsed:.2f}s (limit 60s)")


def test_5_pairing_algebra():
    rng = np.random.default_rng(SEED + 4)
    count = 60
    anti = bimult = rebase = 0.0
    for _ in range(count):
        f1, f2, g, c = random_triple(rng)
        F1, F2, G = restrict(f1, c, N), restrict(f2, c, N), restrict(g, c, N)
        t12 = t_pairing(F1, G)
        anti = max(anti, abs(t12 * t_pairing(G, F1) - 1))
        bimult = max(bimult, abs(t_pairing(restrict(f1 * f2, c, N), G) - t12 * t_pairing(F2, G)))
        for b in rng.integers(1, N, size=3):
            rebase = max(rebase, abs(t_pairing(F1, G, base_index=int(b)) - t12))
    ok = anti <= TOL and bimult <= TOL and rebase <= 1e-9
    record(5, "pairing antisymmetry, bimultiplicativity, base-point independence", ok,
           f"{count} loop pairs: antisymmetry {anti:.2e}, bimultiplicativity {bimult:.2e} (tol {TOL:g}); "
           f"re-basing {rebase:.2e} (tol 1e-9)")


def test_6_winding_exactness():
    rng = np.random.default_rng(SEED + 5)
    count = 150
    bad = 0
    for k in range(count):
        f, _, circle = random_loop_pair(rng)
        if k % 2:
            circle = circle.reversed()
        bad += winding_number(restrict(f, circle, N)) != enclosed_winding(f, circle)
    record(6, "winding number equals the enclosed divisor count", bad == 0,
           f"{count - bad}/{count} exact integer matches")


def test_7_convergence():
    annulus = BorderedDomain.disk(0, 2, [(0, HALF)])
    f, g = P("z"), P("(z-3)")
    d256, d2048, d4096 = (deligne_check(f, g, annulus, n).defect for n in (256, 2048, 4096))
    ok = d2048 <= d256 and d4096 <= 1e-10
    record(7, "convergence on the annulus fixture", ok,
           f"defect N=256 {d256:.2e}, N=2048 {d2048:.2e}, N=4096 {d4096:.2e} (limit 1e-10)")


def test_8_family_sweep():
    spec = FamilySpec.affine(["0", "1/4", "1/2"], ("0", "2"), [("0", "1/2")])
    reports = family_sweep(spec, "z", "(z - 3+1*t)", N, TOL)
    sweep_ok = all(r.passed for r in reports) and all(
        abs(r.values[0] + 1 / (3 + float(r.t))) <= TOL for r in reports)
    # root 4 - 2t crosses the outer circle exactly at t = 1
    crossing = FamilySpec.affine(["0", "1", "15/8"], ("0", "2"), [("0", "1/2")])
    fibers = family_sweep(crossing, "z", "(z - 4-2*t)", N, TOL)
    reject_ok = [r.passed for r in fibers] == [True, False, True] and fibers[1].error.startswith("on-contour")
    record(8, "fiberwise reciprocity over a family", sweep_ok and reject_ok,
           f"annulus sweep {sum(r.passed for r in reports)}/3 fibers pass; crossing sweep "
           f"flags {[str(r.t) for r in fibers if not r.passed]} as on-contour, others pass")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "reciprocity", *args], capture_output=True, text=True)


def test_9_cli_contract(tmp_path):
    names = ["annulus", "weil", "inadmissible"]
    codes, outputs = [], []
    for attempt in range(2):
        run_codes, run_out = [], []
        for name in names:
            report = tmp_path / f"{name}-{attempt}.json"
            proc = _cli("verify", str(SCENARIOS / f"{name}.json"), "--seed", "1", "--report", str(report))
            run_codes.append(proc.returncode)
            run_out.append((proc.stdout, proc.stderr, report.read_bytes() if report.exists() else b""))
        codes.append(run_codes)
        outputs.append(run_out)
    deterministic = outputs[0] == outputs[1]
    ok = codes[0] == [0, 0, 2] and deterministic
    record(9, "CLI exit codes and determinism", ok,
           f"exit codes {codes[0]} (want [0, 0, 2]); repeated runs identical: {deterministic}")
    assert json.loads(outputs[0][0][2])["passed"]
