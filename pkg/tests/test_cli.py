"""Testes para a CLI."""

import json

import pytest
from typer.testing import CliRunner

from recimap import cli
from recimap.analysis import SCHEMA_VERSION, AnalysisReport
from recimap.exceptions import InvariantViolation
from recimap.fixtures import FIXTURES, emit_fixtures

runner = CliRunner()


@pytest.fixture
def fixture_dir(tmp_path):
    directory = tmp_path / "fixtures"
    emit_fixtures(directory)
    return directory


def _analyze(fixture_dir, fast_config, name, tmp_path, *extra):
    out = tmp_path / f"{name}-report.json"
    result = runner.invoke(
        cli.app,
        ["analyze", str(fixture_dir / f"{name}.json"), "--out", str(out), "-c", str(fast_config), *extra],
    )
    return result, out


def _unknown_report() -> AnalysisReport:
    return AnalysisReport(
        system={},
        first_return={"return_times": {}},
        conservativity={"kind": "unknown"},
        rotation={"is_rotation": False},
        ergodicity={"kind": "unknown"},
        maharam={"diagnostic": {"claimed_non_ergodic": False, "krieger": "inconclusive"}},
        oracle={},
    )


class TestAnalyze:
    def test_wandering(self, fixture_dir, fast_config, tmp_path):
        result, out = _analyze(fixture_dir, fast_config, "wandering", tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["schema_version"] == SCHEMA_VERSION
        assert report["first_return"]["return_times"] == {"1": "2/9", "3": "1/9"}
        assert report["conservativity"]["kind"] == "wandering_set_found"
        assert report["conservativity"]["wandering"] == {"lo": "1/9", "hi": "2/9"}
        assert report["maharam"]["diagnostic"]["claimed_non_ergodic"] is True

    def test_nonsurjective(self, fixture_dir, fast_config, tmp_path):
        result, out = _analyze(fixture_dir, fast_config, "nonsurjective", tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["first_return"]["surjectivity"]["missing"] == [{"lo": "0", "hi": "1/12"}]

    def test_quadratic_pair_rotation(self, fixture_dir, fast_config, tmp_path):
        result, out = _analyze(fixture_dir, fast_config, "pair_rotation_sqrt2", tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["rotation"]["rotation_number"] == "-3/8+3/4*sqrt(2)"
        assert report["ergodicity"]["kind"] == "ergodic_certified"
        assert report["oracle"]["agreed"] == report["oracle"]["checked"]
        assert report["maharam"]["level_range"]["max_level"] <= 2

    def test_identity_partition(self, fixture_dir, fast_config, tmp_path):
        result, out = _analyze(fixture_dir, fast_config, "identity", tmp_path)
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["first_return"]["return_times"] == {"2": "1/4"}
        assert report["first_return"]["entry_times"]["measures"] == {"1": "3/4", "2": "1/4"}
        assert report["ergodicity"]["proportion"]["kind"] == "consistent"

    def test_budget_override_leaves_residual(self, fixture_dir, fast_config, tmp_path):
        result, out = _analyze(fixture_dir, fast_config, "wandering", tmp_path, "--budget", "2")
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["first_return"]["return_times"] == {"1": "2/9", "unresolved": "1/9"}
        assert report["first_return"]["surjectivity"]["exact"] is False

    def test_deterministic_apart_from_timing(self, fixture_dir, fast_config, tmp_path):
        _, first = _analyze(fixture_dir, fast_config, "figure1", tmp_path)
        first_report = json.loads(first.read_text(encoding="utf-8"))
        _, second = _analyze(fixture_dir, fast_config, "figure1", tmp_path)
        second_report = json.loads(second.read_text(encoding="utf-8"))
        first_report.pop("timing")
        second_report.pop("timing")
        assert first_report == second_report

    def test_stdout_report(self, fixture_dir, fast_config):
        result = runner.invoke(
            cli.app, ["analyze", str(fixture_dir / "identity.json"), "-c", str(fast_config)]
        )
        assert result.exit_code == 0
        assert '"schema_version": "1.0"' in result.output

    def test_missing_system_file(self, tmp_path, fast_config):
        result = runner.invoke(cli.app, ["analyze", str(tmp_path / "nope.json"), "-c", str(fast_config)])
        assert result.exit_code == 1

    def test_malformed_system_file(self, tmp_path, fast_config):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        result = runner.invoke(cli.app, ["analyze", str(path), "-c", str(fast_config)])
        assert result.exit_code == 1

    def test_invalid_system(self, tmp_path, fast_config):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps({"lengths": ["1/2", "1/2"], "permutation": [1, 0], "involution_s": "1/2"}),
            encoding="utf-8",
        )
        result = runner.invoke(cli.app, ["analyze", str(path), "-c", str(fast_config)])
        assert result.exit_code == 1

    def test_strict_with_unknown_verdict(self, fixture_dir, fast_config, monkeypatch):
        monkeypatch.setattr(cli, "run_analysis", lambda *args, **kwargs: _unknown_report())
        path = str(fixture_dir / "identity.json")
        assert runner.invoke(cli.app, ["analyze", path, "-c", str(fast_config)]).exit_code == 0
        assert runner.invoke(cli.app, ["analyze", path, "--strict", "-c", str(fast_config)]).exit_code == 2

    def test_invariant_violation(self, fixture_dir, fast_config, monkeypatch):
        def fail(*args, **kwargs):
            raise InvariantViolation("F_S não injetivo")

        monkeypatch.setattr(cli, "run_analysis", fail)
        result = runner.invoke(cli.app, ["analyze", str(fixture_dir / "identity.json"), "-c", str(fast_config)])
        assert result.exit_code == 3


class TestRender:
    @pytest.mark.parametrize(
        "name, figure",
        [
            ("figure1", "map"),
            ("figure1", "suspension"),
            ("pair_rotation", "composition"),
            ("nonsurjective", "first-return"),
            ("pair_rotation", "maharam"),
        ],
    )
    def test_figures(self, fixture_dir, fast_config, tmp_path, name, figure):
        out = tmp_path / f"{name}-{figure}.svg"
        result = runner.invoke(
            cli.app,
            ["render", str(fixture_dir / f"{name}.json"), "--figure", figure, "--out", str(out), "-c", str(fast_config)],
        )
        assert result.exit_code == 0, result.output
        svg = out.read_text(encoding="utf-8")
        assert svg.startswith("<?xml")
        assert svg.rstrip().endswith("</svg>")

    def test_maharam_levels(self, fixture_dir, fast_config, tmp_path):
        out = tmp_path / "levels.svg"
        result = runner.invoke(
            cli.app,
            [
                "render", str(fixture_dir / "wandering.json"), "-f", "maharam",
                "--min-level", "-2", "--max-level", "2", "-o", str(out), "-c", str(fast_config),
            ],
        )
        assert result.exit_code == 0, result.output
        assert out.read_text(encoding="utf-8").count('class="level"') == 5

    def test_suspension_without_zeta(self, fixture_dir, fast_config):
        result = runner.invoke(
            cli.app, ["render", str(fixture_dir / "identity.json"), "-f", "suspension", "-c", str(fast_config)]
        )
        assert result.exit_code == 1


class TestFixturesCommand:
    def test_list(self):
        result = runner.invoke(cli.app, ["fixtures", "--list"])
        assert result.exit_code == 0
        for name in FIXTURES:
            assert name in result.output

    def test_emit(self, tmp_path):
        result = runner.invoke(cli.app, ["fixtures", "--emit", str(tmp_path / "out")])
        assert result.exit_code == 0
        assert sorted(path.stem for path in (tmp_path / "out").glob("*.json")) == sorted(FIXTURES)

    def test_requires_an_option(self):
        result = runner.invoke(cli.app, ["fixtures"])
        assert result.exit_code == 1
