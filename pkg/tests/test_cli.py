import json
from pathlib import Path

import pytest

from relfuzz import __version__
from relfuzz.cli import main
from relfuzz.failure import state_mode_rates
from relfuzz.config import load_config
from relfuzz.markov import mttf_closed_form
from relfuzz.mission import MissionState
from relfuzz.pipeline import HOURS_PER_YEAR
from relfuzz.redundancy import equivalent_rate

DATA = Path(__file__).resolve().parents[1] / "data"

BASE_CONFIG = {
    "schema": 1,
    "converter": {"v_in_v": 100.0, "v_out_v": 200.0},
    "device": {"r_ds_on_ohm": 0.1, "r_th_ja_c_per_w": 1.0},
    "failure": {"lambda_b_per_1e6h": [20.0, 20.0, 20.0]},
    "redundancy": [{"kind": "parallel", "coverage": [0.9, 0.9, 0.9]},
                   {"kind": "standby", "coverage": [0.9, 0.9, 0.9]}],
    "simulation": {"trials": 20000, "seed": 3},
}

PUBLISHED_OVERRIDE = json.dumps({"unit": "per_year",
                                 "parallel": {"lambda_mode2": [1.0335, 1.8564, 3.2574],
                                              "lambda_mode1": [1.6696, 2.9605, 5.1197]}})


def run(capsys, *args):
    with pytest.raises(SystemExit) as exc:
        main([str(a) for a in args])
    out, err = capsys.readouterr()
    return exc.value.code, out, err


def write_json(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


@pytest.fixture
def config_path(tmp_path):
    return write_json(tmp_path / "config.json", BASE_CONFIG)


@pytest.fixture
def profile_path(tmp_path):
    path = tmp_path / "profile.csv"
    path.write_text("t_ambient_c,power_w,probability\n25,1000,1.0\n", encoding="utf-8")
    return path


class TestAnalyze:
    def test_single_state_matches_closed_form(self, capsys, config_path, profile_path):
        code, out, err = run(capsys, "analyze", "--config", config_path, "--profile", profile_path)
        assert code == 0
        report = json.loads(out)
        cfg = load_config(config_path)
        state = MissionState(25.0, 1000.0, 1.0)
        for entry, red in zip(report["configurations"], cfg.redundancy):
            l2, l1 = (equivalent_rate(state_mode_rates(cfg.failure_model, state, k, red.kind), red).b
                      * HOURS_PER_YEAR / 1e6 for k in (2, 1))
            expected = mttf_closed_form(l2, l1, 0.9)
            m = entry["mttf_years"]
            assert m["lowest"] == m["defuzzified"] == m["highest"] == pytest.approx(expected, rel=1e-5)
            assert entry["monte_carlo"]["analytic_mttf_years"] == pytest.approx(expected, rel=1e-5)
        assert "not reproducible" in err

    def test_override_reproduces_published_peak(self, capsys, tmp_path):
        doc = dict(BASE_CONFIG, redundancy=[{"kind": "parallel", "coverage": [1, 1, 1]}])
        cfg = write_json(tmp_path / "c.json", doc)
        code, out, _ = run(capsys, "analyze", "--config", cfg, "--rates-override", PUBLISHED_OVERRIDE)
        assert code == 0
        entry = json.loads(out)["configurations"][0]
        assert entry["rates_source"] == "override"
        assert entry["mttf_years"]["tfn"][1] == pytest.approx(0.6071, abs=1e-4)

    def test_override_from_file_and_unit(self, capsys, tmp_path):
        doc = dict(BASE_CONFIG, redundancy=[{"kind": "parallel", "coverage": [1, 1, 1]}])
        cfg = write_json(tmp_path / "c.json", doc)
        per_1e6h = {"unit": "per_1e6h", "parallel": {k: [v * 1e6 / HOURS_PER_YEAR for v in vals]
                                                     for k, vals in json.loads(PUBLISHED_OVERRIDE)["parallel"].items()}}
        rates = write_json(tmp_path / "rates.json", per_1e6h)
        code, out, _ = run(capsys, "analyze", "--config", cfg, "--rates-override", rates)
        assert code == 0
        assert json.loads(out)["configurations"][0]["mttf_years"]["tfn"][1] == pytest.approx(0.6071, abs=1e-4)

    def test_row_shape(self, capsys, tmp_path):
        code, out, _ = run(capsys, "analyze", "--config", DATA / "config.json", "--profile", DATA / "profile.csv",
                           "--trials", 5000)
        assert code == 0
        report = json.loads(out)
        for entry in report["configurations"]:
            for key in ("mttf_years", "mttf_years_alternate"):
                m = entry[key]
                a, b, c = m["tfn"]
                assert m["lowest"] == a and m["highest"] == c
                assert a <= m["defuzzified"] <= c
                assert m["defuzzified"] == pytest.approx((a + b + c) / 3, rel=1e-5)
        prov = report["provenance"]
        assert prov["seed"] == 2024 and len(prov["config_sha256"]) == 64 and len(prov["profile_sha256"]) == 64
        assert report["reference_comparison"]["reproducible"] is False

    def test_report_round_trips_byte_identical(self, capsys, tmp_path, config_path, profile_path):
        from relfuzz.pipeline import canonical_json
        out_path = tmp_path / "r.json"
        code, _, _ = run(capsys, "analyze", "--config", config_path, "--profile", profile_path, "--out", out_path)
        assert code == 0
        text = out_path.read_text(encoding="utf-8")
        assert canonical_json(json.loads(text)) == text

    def test_variant_and_method_flags(self, capsys, config_path, profile_path):
        code, out, _ = run(capsys, "analyze", "--config", config_path, "--profile", profile_path,
                           "--variant", "as-printed", "--method", "vertex")
        assert code == 0
        report = json.loads(out)
        assert report["configurations"][0]["formula_variant"] == "as-printed"
        assert report["provenance"]["fuzzy_method"] == "vertex"
        assert report["configurations"][0]["mttf_years_alternate"]["method"] == "alpha-cut"

    def test_plot_and_svg(self, capsys, tmp_path):
        plots = tmp_path / "plots"
        code, _, _ = run(capsys, "analyze", "--config", DATA / "config.json", "--profile", DATA / "profile.csv",
                         "--trials", 2000, "--out", tmp_path / "r.json", "--plot", plots, "--svg")
        assert code == 0
        csvs = sorted(p.name for p in plots.glob("*.csv"))
        assert csvs == ["membership_0_parallel.csv", "membership_1_standby.csv"]
        rows = (plots / csvs[0]).read_text().splitlines()
        assert rows[0] == "x_years,mu"
        mu = [float(r.split(",")[1]) for r in rows[1:]]
        assert mu[0] == 0.0 and max(mu) == 1.0 and mu[-1] == 0.0
        assert (plots / "membership_0_parallel.svg").read_text().startswith("<svg")


class TestExitCodes:
    def test_missing_config(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "--config", tmp_path / "absent.json")
        assert code == 1 and "not found" in err

    def test_schema_violation_names_field(self, capsys, tmp_path, profile_path):
        bad = dict(BASE_CONFIG, device={"r_ds_on_ohm": -1.0, "r_th_ja_c_per_w": 1.0})
        code, _, err = run(capsys, "analyze", "--config", write_json(tmp_path / "c.json", bad),
                           "--profile", profile_path)
        assert code == 1 and "device.r_ds_on_ohm" in err

    def test_invalid_coverage_tfn(self, capsys, tmp_path, profile_path):
        bad = dict(BASE_CONFIG, redundancy=[{"kind": "parallel", "coverage": [0.9, 0.8, 1.0]}])
        code, _, err = run(capsys, "analyze", "--config", write_json(tmp_path / "c.json", bad),
                           "--profile", profile_path)
        assert code == 1 and "redundancy.0.coverage" in err

    def test_bad_override(self, capsys, config_path):
        code, _, err = run(capsys, "analyze", "--config", config_path, "--rates-override", "{not json")
        assert code == 1 and "rates-override" in err

    def test_usage_error(self, capsys):
        assert run(capsys, "analyze")[0] == 1
        assert run(capsys, "frobnicate")[0] == 1

    def test_profile_error(self, capsys, tmp_path, config_path):
        bad = tmp_path / "p.csv"
        bad.write_text("t_ambient_c,power_w,probability\n25,500,0.3\n30,500,0.3\n35,500,0.3\n")
        code, _, err = run(capsys, "analyze", "--config", config_path, "--profile", bad)
        assert code == 2 and "0.9" in err

    def test_missing_profile(self, capsys, config_path):
        assert run(capsys, "analyze", "--config", config_path)[0] == 2

    def test_numeric_failure(self, capsys, config_path):
        tiny = json.dumps({"parallel": {"lambda_mode2": [1e-320] * 3, "lambda_mode1": [1, 1, 1]},
                           "standby": {"lambda_mode2": [1, 1, 1], "lambda_mode1": [1, 1, 1]}})
        code, _, err = run(capsys, "analyze", "--config", config_path, "--rates-override", tiny)
        assert code == 3 and "overflow" in err


def telemetry(path, rows):
    path.write_text("timestamp,t_ambient_c,power_w\n" + "".join(f"{i},{t},{p}\n" for i, (t, p) in enumerate(rows)))
    return path


class TestCluster:
    def test_constant(self, capsys, tmp_path):
        code, out, _ = run(capsys, "cluster", telemetry(tmp_path / "t.csv", [(30, 400)] * 6))
        assert code == 0
        assert out.splitlines() == ["t_ambient_c,power_w,probability", "32.5,450.0,1.0"]

    def test_empty(self, capsys, tmp_path):
        assert run(capsys, "cluster", telemetry(tmp_path / "t.csv", []))[0] == 2

    def test_two_by_two(self, capsys, tmp_path):
        rows = [(t, p) for t in (1, 6) for p in (50, 150)] * 25
        out_path = tmp_path / "p.csv"
        code, _, _ = run(capsys, "cluster", telemetry(tmp_path / "t.csv", rows), "--t-edges", "0:10:5",
                         "--p-edges", "0,100,200", "--out", out_path)
        assert code == 0
        lines = out_path.read_text().splitlines()[1:]
        assert len(lines) == 4 and all(line.endswith(",0.25") for line in lines)

    def test_bad_edges(self, capsys, tmp_path):
        assert run(capsys, "cluster", telemetry(tmp_path / "t.csv", [(1, 1)]), "--t-edges", "a,b")[0] == 1

    def test_out_of_range_and_clamp(self, capsys, tmp_path):
        path = telemetry(tmp_path / "t.csv", [(1, 50), (12, 50)])
        assert run(capsys, "cluster", path, "--t-edges", "0,5,10", "--p-edges", "0,100")[0] == 2
        assert run(capsys, "cluster", path, "--t-edges", "0,5,10", "--p-edges", "0,100", "--clamp")[0] == 0


def sim_config(tmp_path, coverage):
    doc = dict(BASE_CONFIG, redundancy=[{"kind": "parallel", "coverage": [coverage] * 3}])
    return write_json(tmp_path / "c.json", doc)


UNIT_RATES = json.dumps({"parallel": {"lambda_mode2": [1, 1, 1], "lambda_mode1": [1, 1, 1]}})


class TestSimulate:
    def test_full_coverage(self, capsys, tmp_path):
        code, out, err = run(capsys, "simulate", "--config", sim_config(tmp_path, 1.0), "--rates-override",
                             UNIT_RATES, "--trials", 10**6, "--seed", 5)
        assert code == 0
        entry = json.loads(out)["configurations"][0]
        assert entry["analytic_mttf_years"] == 1.5
        sim = entry["simulation"]
        assert abs(sim["mean_mttf_years"] - 1.5) < 3 * sim["std_error_years"]
        assert entry["within_3se"] and "ok" in err

    def test_zero_coverage(self, capsys, tmp_path):
        code, out, _ = run(capsys, "simulate", "--config", sim_config(tmp_path, 0.0), "--rates-override",
                           UNIT_RATES, "--trials", 200000)
        sim = json.loads(out)["configurations"][0]["simulation"]
        assert abs(sim["mean_mttf_years"] - 0.5) < 3 * sim["std_error_years"]
        assert sim["absorbed_from"]["mode1"] == 0

    def test_deterministic(self, capsys, tmp_path):
        cfg = sim_config(tmp_path, 0.9)
        first = run(capsys, "simulate", "--config", cfg, "--rates-override", UNIT_RATES, "--seed", 9)[1]
        second = run(capsys, "simulate", "--config", cfg, "--rates-override", UNIT_RATES, "--seed", 9,
                     "--workers", 3)[1]
        assert first == second


class TestSmallCommands:
    @pytest.mark.parametrize("args, expected, tol", [
        (("1", "2", "3"), 2.0, 0.0),
        (("0.3144", "1.8469", "10.7"), 4.2871, 1e-3),
        (("0.7954", "1.3614", "3.404"), 1.8536, 1e-3),
    ])
    def test_defuzzify(self, capsys, args, expected, tol):
        code, out, _ = run(capsys, "defuzzify", *args)
        assert code == 0
        assert float(out) == pytest.approx(expected, abs=tol)

    def test_defuzzify_invalid(self, capsys):
        assert run(capsys, "defuzzify", "3", "2", "1")[0] == 1

    def test_version(self, capsys):
        code, out, _ = run(capsys, "version")
        assert code == 0 and out.strip() == __version__
