import json
from pathlib import Path

import pytest

from reciprocity.cli import main
from reciprocity.errors import DomainError, InadmissibleError, ScenarioError
from reciprocity.scenario import convergence_study, load_scenario, run

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"

ANNULUS = {
    "functions": {"f": "z", "g": "(z-3)"},
    "domain": {"outer": {"center": "0", "radius": "2"}, "holes": [{"center": "0", "radius": "1/2"}]},
    "checks": [{"type": "deligne", "f": "f", "g": "g"}],
    "numeric": {"samples": 4096, "tol": "1e-8"},
}


def write(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def variant(**changes):
    data = json.loads(json.dumps(ANNULUS))
    data.update(changes)
    return data


class TestLoad:
    def test_annulus(self, tmp_path):
        sc = load_scenario(write(tmp_path, ANNULUS))
        assert len(sc.functions) == 2 and len(sc.checks) == 1
        assert sc.bordered is not None and len(sc.bordered.holes) == 1
        assert sc.samples == 4096 and sc.tol == 1e-8

    def test_hole_outside_outer(self, tmp_path):
        data = variant(domain={"outer": {"center": "0", "radius": "2"},
                               "holes": [{"center": "5", "radius": "1/2"}]})
        with pytest.raises(DomainError, match="hole not inside outer"):
            load_scenario(write(tmp_path, data))

    def test_unknown_function(self, tmp_path):
        data = variant(checks=[{"type": "deligne", "f": "f", "g": "h"}])
        with pytest.raises(ScenarioError, match="unknown function h"):
            load_scenario(write(tmp_path, data))

    def test_inadmissible(self, tmp_path):
        data = variant(functions={"f": "(z-1)", "g": "(z-3)"})
        with pytest.raises(InadmissibleError, match="inadmissible: divisor point 1 inside domain body"):
            load_scenario(write(tmp_path, data))

    @pytest.mark.parametrize(
        "data, fragment",
        [
            (variant(domain={"outer": {"center": "0", "radius": 2.0}}), "exact strings"),
            (variant(functions={"f": "z +", "g": "z"}), "functions.f"),
            (variant(checks=[{"type": "bogus"}]), "unknown check type"),
            (variant(checks=[]), "checks"),
            (variant(numeric={"samples": 1000}), "power of two"),
            ({"functions": {"f": "z"}, "checks": [{"type": "deligne", "f": "f", "g": "f"}]}, "domain is required"),
            (variant(functions={"f": "(z - t)", "g": "z"}), "parameter 't'"),
        ],
    )
    def test_validation_errors(self, tmp_path, data, fragment):
        with pytest.raises(ScenarioError, match=fragment):
            load_scenario(write(tmp_path, data))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{ nope")
        with pytest.raises(ScenarioError, match="invalid JSON at line 1"):
            load_scenario(path)


class TestRun:
    def test_annulus_passes(self, tmp_path):
        code, results = run(load_scenario(write(tmp_path, ANNULUS)))
        assert code == 0
        assert results[0].passed and results[0].defect < 1e-8

    def test_weil_exact(self):
        code, results = run(load_scenario(SCENARIOS / "weil.json"))
        assert code == 0 and results[0].details["value"] == "1"

    def test_failing_check_exits_one(self, tmp_path):
        data = {"functions": {"f": "z"},
                "checks": [{"type": "tame", "f": "f", "g": "f", "point": "0", "expected": "1"},
                           {"type": "residue_sum", "f": "f"}]}
        code, results = run(load_scenario(write(tmp_path, data)))
        assert code == 1
        assert [r.passed for r in results] == [False, True]

    def test_tame_check_at_infinity(self, tmp_path):
        data = {"functions": {"f": "(z-2)^2 * (z+i)", "g": "(z - 1/2)^-1 * 3"},
                "checks": [{"type": "tame", "f": "f", "g": "g", "point": "oo"}]}
        code, results = run(load_scenario(write(tmp_path, data)))
        assert code == 0
        assert results[0].defect < 1e-8
        assert results[0].details["circle"].endswith("CW)")

    def test_sweep_with_failing_fiber(self, tmp_path):
        data = variant(functions={"f": "z", "g": "(z - 4-2*t)"}, family={"t_grid": ["0", "1", "2"]},
                       checks=[{"type": "sweep", "f": "f", "g": "g"}])
        code, results = run(load_scenario(write(tmp_path, data)))
        assert code == 1
        assert "2/3 fibers pass" in results[0].summary and "failing t: 1" in results[0].summary

    def test_property_suites(self, tmp_path):
        data = {"functions": {"f": "z"},
                "checks": [{"type": "property", "suite": s, "count": 10} for s in
                           ("weil", "residue", "tame", "deligne")],
                "numeric": {"seed": 4}}
        code, results = run(load_scenario(write(tmp_path, data)))
        assert code == 0
        assert all(r.details["seed"] == 4 for r in results)


class TestCli:
    def test_exit_codes(self, capsys):
        assert main(["verify", str(SCENARIOS / "annulus.json")]) == 0
        assert "[PASS] #0 deligne" in capsys.readouterr().out
        assert main(["verify", str(SCENARIOS / "weil.json")]) == 0
        assert main(["verify", str(SCENARIOS / "inadmissible.json")]) == 2
        assert "inadmissible: divisor point 1 inside domain body" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["verify", str(tmp_path / "nope.json")]) == 2

    def test_report_and_csv(self, tmp_path):
        report, table = tmp_path / "r.json", tmp_path / "t.csv"
        assert main(["verify", str(SCENARIOS / "sweep.json"), "--report", str(report), "--csv", str(table)]) == 0
        data = json.loads(report.read_text())
        assert data["passed"] and data["checks"][0]["type"] == "sweep"
        assert len(data["checks"][0]["reports"]) == 3
        lines = table.read_text().splitlines()
        assert lines[0] == "t,circle,re_T,im_T,oracle_re,oracle_im,defect"
        assert len(lines) == 7

    def test_overrides(self, tmp_path, capsys):
        report = tmp_path / "r.json"
        assert main(["verify", str(SCENARIOS / "annulus.json"), "--samples", "256", "--tol", "1e-12",
                     "--report", str(report)]) == 0
        data = json.loads(report.read_text())
        assert data["samples"] == 256 and data["tol"] == 1e-12
        assert main(["verify", str(SCENARIOS / "annulus.json"), "--samples", "300"]) == 2

    def test_deterministic_reports(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            main(["verify", str(SCENARIOS / "showcase.json"), "--seed", "5", "--report", str(path)])
        assert a.read_bytes() == b.read_bytes()
        c = tmp_path / "c.json"
        main(["verify", str(SCENARIOS / "showcase.json"), "--seed", "6", "--report", str(c)])
        assert c.read_bytes() != a.read_bytes()


class TestConvergence:
    def test_annulus_monotone(self, capsys):
        assert main(["convergence", str(SCENARIOS / "annulus.json"), "--grid", "256,1024,4096"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "samples,check,type,defect,monotone,error"
        assert "monotone refinement" in out

    def test_constants_have_zero_defect(self, tmp_path):
        data = variant(functions={"f": "3", "g": "-1/2"})
        rows, monotone = convergence_study(load_scenario(write(tmp_path, data)), [16, 64, 256])
        assert all(r.defect < 1e-15 for r in rows) and monotone[0]

    def test_under_sampled_row(self, tmp_path):
        data = variant(functions={"f": "z", "g": "(z - 21/10)^3"})
        rows, _ = convergence_study(load_scenario(write(tmp_path, data)), [16, 1024, 4096])
        assert rows[0].defect is None and "under-sampled loop" in rows[0].error
        assert rows[1].defect is not None and rows[2].defect <= 1e-8

    def test_csv_file(self, tmp_path):
        out = tmp_path / "conv.csv"
        assert main(["convergence", str(SCENARIOS / "annulus.json"), "--grid", "64,128", "--csv", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 3

    def test_requires_numeric_check(self, tmp_path):
        data = {"functions": {"f": "z"}, "checks": [{"type": "residue_sum", "f": "f"}]}
        assert main(["convergence", str(write(tmp_path, data))]) == 2
