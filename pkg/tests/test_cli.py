import json

import pytest
from click.testing import CliRunner

from solarscan.cli import main
from solarscan.config import Config

from conftest import FIXTURES


@pytest.fixture()
def runner():
    return CliRunner()


def base_args(tmp_path):
    return ["--fixtures", str(FIXTURES), "--data-dir", str(tmp_path / "data")]


def run_scan(runner, tmp_path, name="toy"):
    args = base_args(tmp_path) + [
        "scan", "--place", "Bülach", "--name", name,
    ]
    result = runner.invoke(main, args, env={"SOLARSCAN_IMAGE_SIZE": "512",
                                            "SOLARSCAN_IMAGE_ZOOM": "19"})
    assert result.exit_code == 0, result.output
    return result


class TestScanCommand:
    def test_scan_reports_progress_and_summary(self, runner, tmp_path):
        result = run_scan(runner, tmp_path)
        assert "3/3 buildings" in result.output
        assert "2 panels from 3 buildings, 0 failures" in result.output
        assert "3 buildings" in result.output

    def test_scan_requires_area(self, runner, tmp_path):
        result = runner.invoke(main, base_args(tmp_path) + ["scan"])
        assert result.exit_code == 1
        assert "--place or --bbox" in result.output

    def test_scan_by_bbox(self, runner, tmp_path, e2e_expected):
        s, w, n, e = e2e_expected["bbox"]
        args = base_args(tmp_path) + ["scan", "--bbox", f"{s},{w},{n},{e}", "--name", "bb"]
        result = runner.invoke(main, args, env={"SOLARSCAN_IMAGE_SIZE": "512",
                                                "SOLARSCAN_IMAGE_ZOOM": "19"})
        assert result.exit_code == 0, result.output
        assert "2 panels" in result.output


class TestDetectCommand:
    def test_detect_prints_feature_collection(self, runner, tmp_path):
        args = base_args(tmp_path) + ["detect", "--lat", "47.5190", "--lon", "8.5400"]
        result = runner.invoke(main, args, env={"SOLARSCAN_IMAGE_SIZE": "512",
                                                "SOLARSCAN_IMAGE_ZOOM": "19"})
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["type"] == "FeatureCollection"
        assert len(doc["features"]) == 1

    def test_detect_open_field_fails(self, runner, tmp_path, e2e_expected):
        lat, lon = e2e_expected["open_field"]
        args = base_args(tmp_path) + ["detect", "--lat", str(lat), "--lon", str(lon)]
        result = runner.invoke(main, args, env={"SOLARSCAN_IMAGE_SIZE": "512",
                                                "SOLARSCAN_IMAGE_ZOOM": "19"})
        assert result.exit_code == 1
        assert "no building" in result.output


class TestExportAndCurate:
    def test_export_after_scan(self, runner, tmp_path):
        run_scan(runner, tmp_path)
        out = tmp_path / "export.geojson"
        args = base_args(tmp_path) + ["export", "--scan", "toy", "--out", str(out)]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert len(doc["features"]) == 2

    def test_export_unknown_scan_fails(self, runner, tmp_path):
        result = runner.invoke(main, base_args(tmp_path) + ["export", "--scan", "nope"])
        assert result.exit_code == 1

    def test_curate_apply_decisions_file(self, runner, tmp_path):
        run_scan(runner, tmp_path)
        export = runner.invoke(main, base_args(tmp_path) + ["export", "--scan", "toy"])
        ids = [f["properties"]["panel_id"] for f in json.loads(export.output)["features"]]
        decisions = tmp_path / "decisions.txt"
        decisions.write_text(f"{ids[0]} rejected\n{ids[1]} accepted\n", encoding="utf-8")
        args = base_args(tmp_path) + [
            "curate", "--scan", "toy", "--apply", str(decisions), "--operator", "qa",
        ]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        assert "applied 2 decisions" in result.output

        export2 = runner.invoke(
            main, base_args(tmp_path) + ["export", "--scan", "toy", "--status", "accepted"]
        )
        assert len(json.loads(export2.output)["features"]) == 1


class TestProfileCommand:
    def test_profile_csv_to_stdout(self, runner, tmp_path):
        args = base_args(tmp_path) + [
            "profile", "--lat", "47.37", "--lon", "8.54", "--area", "1.0",
        ]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "timestamp,power_w"
        assert len(lines) == 8761

    def test_profile_with_explicit_tmy_file(self, runner, tmp_path):
        out = tmp_path / "profile.csv"
        args = [
            "--data-dir", str(tmp_path / "data"),
            "--tmy-file", str(FIXTURES / "tmy.csv"),
            "profile", "--lat", "47.37", "--lon", "8.54", "--area", "2.5",
            "--out", str(out),
        ]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        assert out.read_text(encoding="utf-8").startswith("timestamp,power_w\n")

    def test_profile_requires_area_or_scan(self, runner, tmp_path):
        result = runner.invoke(
            main, base_args(tmp_path) + ["profile", "--lat", "1", "--lon", "2"]
        )
        assert result.exit_code == 1


class TestConfigPrecedence:
    def test_env_overrides_defaults(self, monkeypatch):
        monkeypatch.setenv("SOLARSCAN_TILES_URL", "https://example.test/{z}/{x}/{y}.png")
        monkeypatch.setenv("SOLARSCAN_DETECTOR_THRESHOLD", "0.42")
        cfg = Config()
        assert cfg.get("tiles.url") == "https://example.test/{z}/{x}/{y}.png"
        assert cfg.get("detector.threshold") == 0.42

    def test_file_under_env(self, monkeypatch, tmp_path):
        cfg_file = tmp_path / "cfg.yaml"
        cfg_file.write_text("detector:\n  threshold: 0.9\nimage:\n  size: 640\n")
        monkeypatch.setenv("SOLARSCAN_DETECTOR_THRESHOLD", "0.33")
        cfg = Config.load(cfg_file)
        assert cfg.get("detector.threshold") == 0.33  # env beats file
        assert cfg.get("image.size") == 640  # file beats defaults
        assert cfg.get("image.zoom") == 21  # defaults
