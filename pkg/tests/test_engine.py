import json

import numpy as np
import pytest

from engine.cache import ResultCache, cache_key
from engine.cli import main
from engine.config import DEFAULT_TOLERANCES
from engine.parsing import must_parse_json, try_parse_json
from engine.pipeline import energies_of, exit_code, run, run_text, summary_line
from engine.report import REPORT_KEYS, dumps_report, report_to_csv, strip_volatile, to_jsonable
from engine.schemas import ConfigError, check_config, parse_config

VERIFY_N1 = {"command": "verify", "N": 1, "p": 2, "q": 3, "xi": 0.5, "theta": [0.2]}
SOLVE_N1 = {"command": "solve-bae", "params": {"N": 1, "p": 1.3, "q": 2.1, "xi": 0.5, "theta": "homogeneous"}}


class TestParsing:
    def test_comments_and_trailing_commas(self):
        raw = """
        // hand-written
        {
          "command": "verify",  # inline
          "N": 2,
          /* block */ "theta": [0.2, -0.4,],
        }
        """
        data = must_parse_json(raw)
        assert data == {"command": "verify", "N": 2, "theta": [0.2, -0.4]}

    def test_comment_marker_inside_string(self):
        assert must_parse_json('{"note": "a # b // c"}') == {"note": "a # b // c"}

    def test_python_literals(self):
        assert must_parse_json("{'use_cache': False, 'M': None}") == {"use_cache": False, "M": None}

    def test_smart_quotes(self):
        assert must_parse_json("{\u201cN\u201d: \u22121}") == {"N": -1}

    def test_failure_is_reported(self):
        res = try_parse_json("[1, 2]")
        assert res.data is None
        assert res.error


class TestSchemas:
    def test_defaults(self):
        cfg = parse_config(VERIFY_N1)
        assert cfg.branch == "both"
        assert cfg.M == "default"
        assert cfg.rng_seed == 0
        assert cfg.seed_count == 64
        assert dict(cfg.tolerances) == DEFAULT_TOLERANCES
        assert cfg.strategy == "homotopy_xi"

    def test_functional_seed_default(self):
        cfg = parse_config(dict(VERIFY_N1, command="solve-functional"))
        assert cfg.seed_count == 200

    def test_nested_params(self):
        cfg = parse_config(SOLVE_N1)
        assert cfg.params.homogeneous
        assert cfg.params.N == 1

    def test_theta_comma_string(self):
        cfg = parse_config(dict(VERIFY_N1, N=2, theta="0.2, -0.4"))
        assert cfg.params.theta == (0.2, -0.4)

    def test_overrides_win(self):
        cfg = parse_config(VERIFY_N1, overrides={"p": "1.5", "branch": "minus", "xi": None})
        assert cfg.params.p == 1.5
        assert cfg.params.xi == 0.5
        assert cfg.branch == "-"

    def test_round_trip(self):
        cfg = parse_config(dict(VERIFY_N1, seed_count=7, tolerances={"match": 1e-5}))
        assert parse_config(cfg.to_dict()).to_dict() == cfg.to_dict()

    @pytest.mark.parametrize(
        "change, field",
        [
            ({"command": "plot"}, "command"),
            ({"theta": [0.2, 0.3]}, "theta"),
            ({"N": 0}, "N"),
            ({"p": "abc"}, "p"),
            ({"M": 2}, "M"),
            ({"branch": "left"}, "branch"),
            ({"seed_count": 0}, "seed_count"),
            ({"xi_steps": 60}, "xi_steps"),
            ({"strategy": "annealing"}, "strategy"),
            ({"format": "xml"}, "format"),
            ({"tolerances": {"solver": -1}}, "tolerances.solver"),
            ({"tolerances": {"speed": 1}}, "tolerances.speed"),
        ],
    )
    def test_rejections_name_the_field(self, change, field):
        with pytest.raises(ConfigError) as e:
            parse_config(dict(VERIFY_N1, **change))
        assert e.value.field == field

    def test_pole_rule_text(self):
        with pytest.raises(ConfigError) as e:
            parse_config(dict(VERIFY_N1, N=2, theta=[0.5, 0.1]))
        assert e.value.field == "theta"
        assert "1-2theta_j" in str(e.value)

    def test_oracle_seeded_any_sector(self):
        cfg = parse_config(dict(SOLVE_N1, strategy="oracle_seeded", params={**SOLVE_N1["params"], "N": 2}, M=1))
        assert cfg.strategy == "oracle_seeded"
        assert cfg.M == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as e:
            parse_config(tmp_path / "nope.json")
        assert e.value.field == "config"

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"command": "spectrum", "N": 1, "p": 2, "q": 3, "theta": [0.2],}  // xi defaults to 0\n')
        cfg = parse_config(path)
        assert cfg.command == "spectrum"
        assert cfg.params.xi == 0

    def test_check_config(self):
        assert check_config(VERIFY_N1) is None
        assert check_config(dict(VERIFY_N1, N=-3)).field == "N"


class TestReport:
    def test_to_jsonable(self):
        out = to_jsonable({"z": 1 + 2j, "bad": float("nan"), "t": (1, 2)})
        assert out == {"z": [1.0, 2.0], "bad": "nan", "t": [1, 2]}

    def test_csv_table(self):
        report = {"results": {"table": [{"identity": "qybe", "residual": 1e-15, "passed": True}]}}
        lines = report_to_csv(report).splitlines()
        assert lines[0] == "identity,residual,passed"
        assert lines[1].startswith("qybe,")

    def test_csv_without_table(self):
        assert report_to_csv({"results": {}}).strip() == ""


class TestPipeline:
    def test_verify_report(self):
        report = run(parse_config(dict(VERIFY_N1, use_cache=False)))
        assert tuple(sorted(report)) == tuple(sorted(REPORT_KEYS))
        assert report["failures"] == []
        assert report["results"]["passed"] is True
        assert exit_code(report) == 0
        assert "checks=" in summary_line(report)

    def test_uncached_runs_agree(self):
        cfg = parse_config(dict(VERIFY_N1, use_cache=False))
        assert strip_volatile(run(cfg)) == strip_volatile(run(cfg))

    def test_report_reproduces_from_its_config(self):
        cfg = parse_config(dict(VERIFY_N1, use_cache=False))
        report = run(cfg)
        again = parse_config(report["config"], overrides={"use_cache": False})
        assert strip_volatile(run(again)) == strip_volatile(report)

    def test_cache_is_byte_identical(self, cache_dir):
        cfg = parse_config(VERIFY_N1)
        cache = ResultCache()
        _, first = run_text(cfg, cache=cache)
        assert cache.path_for(cfg).parent == cache_dir
        _, second = run_text(cfg, cache=cache)
        assert first == second
        assert cache.path_for(cfg).read_text(encoding="utf-8") == first

    def test_cache_key_ignores_output(self):
        a = parse_config(dict(VERIFY_N1, output_path="a.json", format="csv"))
        b = parse_config(VERIFY_N1)
        assert cache_key(a) == cache_key(b)
        assert cache_key(parse_config(dict(VERIFY_N1, rng_seed=1))) != cache_key(b)

    def test_corrupt_cache_entry_is_ignored(self, cache_dir):
        cfg = parse_config(VERIFY_N1)
        cache = ResultCache()
        cache_dir.mkdir(parents=True)
        cache.path_for(cfg).write_text("{not json", encoding="utf-8")
        assert cache.load_text(cfg) is None

    def test_solve_bae_homogeneous_n1(self):
        report = run(parse_config(dict(SOLVE_N1, use_cache=False)))
        match = report["results"]["spectrum_match"]
        assert match["matched_fraction"] == 1.0
        assert match["completeness_confirmed"] is True
        assert match["unmatched_count"] == 0
        assert {s["M"] for s in report["results"]["solves"]} == {0, 1}
        exact = np.array([complex(*e) for e in match["exact"]])
        energies = energies_of(report)
        assert len(energies) >= 2
        for e in energies:
            assert np.min(np.abs(exact - e)) < 1e-6
        assert report["failures"] == []

    def test_solve_bae_inhomogeneous_skips_matching(self):
        cfg = parse_config({"command": "solve-bae", "N": 1, "p": 1.3, "q": 2.1, "xi": 0.5, "theta": [0.2],
                            "use_cache": False})
        res = run(cfg)["results"]
        assert res["spectrum_match"] is None
        assert "homogeneous" in res["note"]

    def test_spectrum_counts(self):
        report = run(parse_config(dict(VERIFY_N1, command="spectrum", use_cache=False)))
        assert report["results"]["count"] == 2
        assert report["failures"] == []

    def test_functional_recovers(self):
        report = run(parse_config(dict(VERIFY_N1, command="solve-functional", seed_count=40, use_cache=False)))
        assert report["results"]["oracle"]["complete"] is True

    def test_stage_error_becomes_failure(self, monkeypatch):
        import engine.pipeline as pipeline

        def boom(*_a, **_k):
            raise RuntimeError("solver exploded")

        monkeypatch.setattr(pipeline, "lambda_from_oracle", boom)
        report = run(parse_config(dict(VERIFY_N1, command="spectrum", use_cache=False)))
        assert exit_code(report) == 1
        assert report["failures"][0]["stage"] == "oracle"
        assert report["failures"][0]["message"] == "solver exploded"
        assert report["timing"]["stages"][0]["status"] == "error"


class TestCli:
    def test_verify_to_file(self, tmp_path, cache_dir):
        out = tmp_path / "report.json"
        code = main(["verify", "--N", "1", "--p", "2", "--q", "3", "--xi", "0.5", "--theta", "0.2",
                     "--no-cache", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["config"]["command"] == "verify"
        assert not cache_dir.exists()

    def test_csv_output(self, tmp_path, cache_dir):
        out = tmp_path / "report.csv"
        code = main(["verify", "--N", "1", "--p", "2", "--q", "3", "--theta", "0.2",
                     "--format", "csv", "--out", str(out)])
        assert code == 0
        assert out.read_text(encoding="utf-8").startswith("identity,")

    def test_config_file_with_flag_override(self, tmp_path, cache_dir, capsys):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(dict(VERIFY_N1, N=3)), encoding="utf-8")
        code = main(["verify", "--config", str(path), "--N", "1", "--no-cache"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["config"]["params"]["N"] == 1

    def test_config_error_exit_code(self, capsys, cache_dir):
        code = main(["verify", "--N", "2", "--p", "2", "--q", "3", "--theta", "0.5,0.1"])
        assert code == 2
        assert "theta" in capsys.readouterr().err

    def test_report_text_matches_dumps(self, tmp_path, cache_dir):
        out = tmp_path / "r.json"
        main(["verify", "--N", "1", "--p", "2", "--q", "3", "--theta", "0.2", "--out", str(out)])
        text = out.read_text(encoding="utf-8")
        assert dumps_report(json.loads(text)) == text
