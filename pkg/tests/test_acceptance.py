"""Acceptance suite: every criterion runs offline against bundled fixtures
at its stated tolerance and reports one PASS/FAIL line in the terminal
summary."""

import json
import math
import time
from contextlib import contextmanager
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from fastapi.testclient import TestClient

from solarscan import detection, georef, inventory, pvmodel
from solarscan.config import Config
from solarscan.geotypes import BoundingBox, GeoPoint
from solarscan.service import create_app

from conftest import FIXTURES, load_test_fixture, make_image, record_acceptance

UTC = timezone.utc
ZURICH = GeoPoint(47.37, 8.54)


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        record_acceptance(name, False)
        raise
    record_acceptance(name, True)


def test_air_mass_oracle_and_monotonicity():
    with criterion("air mass: closed-form values and monotone grid (<1s)"):
        start = time.perf_counter()
        assert pvmodel.air_mass(0.0) == pytest.approx(0.99971, abs=1e-5)
        assert pvmodel.air_mass(60.0) == pytest.approx(1.9943, abs=1e-3)
        grid = np.arange(0.0, 89.95, 0.1)
        m = pvmodel.air_mass(grid)
        assert np.all(np.diff(m) > 0.0)
        assert time.perf_counter() - start < 1.0


def test_zenith_altitude_identity_exact():
    with criterion("solar position: zenith + altitude == 90 exactly, 1000 samples"):
        rng = np.random.default_rng(2026)
        t0 = datetime(1955, 1, 1, tzinfo=UTC)
        for _ in range(1000):
            site = GeoPoint(float(rng.uniform(-90, 90)), float(rng.uniform(-180, 180)))
            t = t0 + timedelta(hours=float(rng.uniform(0, 90 * 8760)))
            sp = pvmodel.solar_position(t, site)
            assert sp.zenith + sp.altitude == 90.0


def test_solar_position_pinned_oracle():
    with criterion("solar position: 12 pinned cases within 0.2 deg (<1s)"):
        start = time.perf_counter()
        cases = load_test_fixture("solar_position_cases.json")
        assert len(cases) == 12
        for case in cases:
            t = datetime.strptime(case["time"], "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=UTC)
            sp = pvmodel.solar_position(t, GeoPoint(case["lat"], case["lon"]))
            assert sp.altitude == pytest.approx(case["altitude"], abs=0.2)
            az_diff = abs((sp.azimuth - case["azimuth"] + 180.0) % 360.0 - 180.0)
            assert az_diff <= 0.2
        assert time.perf_counter() - start < 1.0


def test_perez_horizontal_reduction():
    with criterion("Perez: at tilt 0, sky diffuse == G_dh (1e-9 rel), reflected == 0, 500 rows"):
        tmy = pvmodel.load_tmy(FIXTURES / "tmy.csv", year=2023)
        cfg = pvmodel.ArrayConfig(tilt=0.0)
        rng = np.random.default_rng(17)
        records = tmy.records
        order = rng.permutation(len(records))
        checked = 0
        for i in order:
            rec = records[i]
            if rec.g_dh <= 0.0:
                continue
            sp = pvmodel.solar_position(rec.t, ZURICH)
            if sp.zenith >= 85.0:
                continue
            poa = pvmodel.poa_irradiance(cfg, sp, rec, pvmodel.air_mass(sp.zenith))
            assert poa.sky_diffuse == pytest.approx(rec.g_dh, rel=1e-9)
            assert poa.ground_reflected == 0.0
            checked += 1
            if checked == 500:
                break
        assert checked == 500


def test_faiman_point_check():
    with criterion("Faiman: (20C, 800W, 5m/s, U0=25, U1=6.84) -> 33.51C +/- 0.01"):
        cfg = pvmodel.ArrayConfig(tilt=30.0, u0=25.0, u1=6.84)
        rec = pvmodel.TmyRecord(
            t=datetime(2023, 6, 1, 12, tzinfo=UTC),
            g_bn=0, g_h=0, g_dh=0, t_amb=20.0, v_w=5.0,
        )
        assert pvmodel.module_temperature(rec, 800.0, cfg) == pytest.approx(33.51, abs=0.01)


def test_adr_reference_normalization_and_oracle():
    with criterion("ADR: eta(1000, 25C) == k_a +/- 1e-5; 20 toolkit-oracle points within 1e-4"):
        cfg = pvmodel.ArrayConfig(tilt=30.0)
        assert pvmodel.adr_efficiency(1000.0, 25.0, cfg) == pytest.approx(0.99924, abs=1e-5)
        doc = load_test_fixture("adr_oracle.json")
        assert len(doc["cases"]) == 20
        for case in doc["cases"]:
            eta = pvmodel.adr_efficiency(case["g_poa"], case["t_pv"], cfg)
            assert eta == pytest.approx(case["eta"], abs=1e-4)


def test_profile_shape_on_bundled_tmy():
    with criterion(
        "profile: 8760 rows, dark where zenith >= 90, capacity factor in [8%, 20%], "
        "bit-identical CSV (<10s)"
    ):
        start = time.perf_counter()
        tmy = pvmodel.load_tmy(FIXTURES / "tmy.csv", year=2023)
        cfg = pvmodel.default_array_config(ZURICH)
        assert cfg.p_stc == 200.0 and cfg.g_stc == 1000.0
        prof = pvmodel.power_profile(ZURICH, cfg, tmy)
        csv_text = prof.to_csv()
        assert len(prof.times) == 8760
        assert len(csv_text.splitlines()) == 8761

        _, _, zen = pvmodel._solar_position_arrays(tmy.times, ZURICH.lat, ZURICH.lon)
        assert np.all(prof.watts[zen >= 90.0] == 0.0)

        cf = prof.annual_energy_wh() / (cfg.p_stc * 8760)
        assert 0.08 <= cf <= 0.20

        assert pvmodel.power_profile(ZURICH, cfg, tmy).to_csv() == csv_text
        assert time.perf_counter() - start < 10.0


def test_georeferencing_exactness_and_roundtrip():
    with criterion(
        "georef: anchors exact at corners, midpoint = coordinate means, "
        "0.5px round trip x1000, vertex == exhaustive mapping"
    ):
        img = make_image()
        assert georef.pixel_to_geo((0, 0), img) == img.anchor_nw
        assert georef.pixel_to_geo((img.width - 1, img.height - 1), img) == img.anchor_se
        mid = georef.pixel_to_geo(((img.width - 1) / 2, (img.height - 1) / 2), img)
        assert mid.lat == pytest.approx((img.anchor_nw.lat + img.anchor_se.lat) / 2, abs=1e-12)
        assert mid.lon == pytest.approx((img.anchor_nw.lon + img.anchor_se.lon) / 2, abs=1e-12)

        rng = np.random.default_rng(31)
        for _ in range(5):
            lat0 = float(rng.uniform(-60, 60))
            lon0 = float(rng.uniform(-170, 170))
            size = int(rng.integers(100, 1600))
            rimg = make_image(
                nw=GeoPoint(lat0 + float(rng.uniform(0.001, 0.02)), lon0),
                se=GeoPoint(lat0, lon0 + float(rng.uniform(0.001, 0.02))),
                width=size,
                height=size,
            )
            for _ in range(200):
                x = float(rng.uniform(0, rimg.width - 1))
                y = float(rng.uniform(0, rimg.height - 1))
                x2, y2 = georef.geo_to_pixel(georef.pixel_to_geo((x, y), rimg), rimg)
                assert abs(x2 - x) <= 0.5 and abs(y2 - y) <= 0.5

        small = make_image(width=50, height=50)
        x0, y0, x1, y1 = 3, 5, 46, 41
        via_vertices = [
            georef.pixel_to_geo(v, small)
            for v in [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
        ]
        pts = [
            georef.pixel_to_geo((x, y), small)
            for x in range(x0, x1 + 1)
            for y in range(y0, y1 + 1)
        ]
        assert via_vertices[0] == GeoPoint(max(p.lat for p in pts), min(p.lon for p in pts))
        assert via_vertices[2] == GeoPoint(min(p.lat for p in pts), max(p.lon for p in pts))


def test_geodesic_area_oracle():
    with criterion("geodesic area: equator 0.0001 deg square within 0.5% of 123.6 m^2; "
                   "reversal invariant to 1e-9"):
        ring = BoundingBox(south=0.0, west=0.0, north=0.0001, east=0.0001).ring()
        area = georef.geodesic_area(ring)
        assert area == pytest.approx(123.6, rel=0.005)
        assert georef.geodesic_area(list(reversed(ring))) == pytest.approx(area, rel=1e-9)


def test_end_to_end_offline_pipeline(tmp_path, e2e_expected):
    with criterion(
        "end-to-end: offline 3-building scan done 3/3, areas within 0.5% of "
        "hand-computed, exact counts, byte-identical re-run (<30s)"
    ):
        start = time.perf_counter()
        cfg = Config({
            "image": {"size": e2e_expected["image_size"], "zoom": e2e_expected["zoom"]},
            "storage": {"dir": str(tmp_path / "data")},
        })
        app = create_app(cfg, fixtures_dir=FIXTURES)
        with TestClient(app) as client:
            resp = client.post("/v1/scans", json={"place": e2e_expected["place"], "name": "e2e"})
            assert resp.status_code == 202
            job_id = resp.json()["id"]
            while True:
                body = client.get(f"/v1/scans/{job_id}").json()
                if body["state"] in ("done", "failed"):
                    break
                time.sleep(0.05)
            assert body["state"] == "done"
            assert body["progress"] == {"done": 3, "total": 3}

            pipe = client.app.state.pipeline
            store = pipe.store("e2e")
            records = store.records("all")
            assert len(records) == len(e2e_expected["panels"])
            by_building = {r.building_id: r for r in records}
            for exp in e2e_expected["panels"]:
                rec = by_building[exp["building_id"]]
                assert rec.confidence == exp["confidence"]
                assert rec.polygon.area_m2 == pytest.approx(exp["area_m2"], rel=0.005)

            s, w, n, e = e2e_expected["bbox"]
            summary = store.summarize(BoundingBox(south=s, west=w, north=n, east=e), "all")
            assert summary.n_panels == len(e2e_expected["panels"])
            assert summary.n_buildings == 3

            before = store.path.read_bytes()
            resp2 = client.post("/v1/scans", json={"place": e2e_expected["place"], "name": "e2e"})
            job2 = resp2.json()["id"]
            while True:
                body2 = client.get(f"/v1/scans/{job2}").json()
                if body2["state"] in ("done", "failed"):
                    break
                time.sleep(0.05)
            assert body2["state"] == "done"
            assert store.path.read_bytes() == before
        assert time.perf_counter() - start < 30.0


def test_paper_artifact_replay(tmp_path):
    with criterion(
        "artifact replay: cleaned inventories summarize to 507 / 18,947.17 m^2 "
        "and 14 / 956.29 m^2 (0.1%)"
    ):
        bulach = inventory.PanelStore(tmp_path, "bulach")
        bulach.upsert_panels(
            inventory.ingest_geojson(
                json.loads((FIXTURES / "artifacts" / "bulach_cleaned.geojson").read_text())
            )
        )
        summary = bulach.summarize(
            BoundingBox(south=47.40, west=8.40, north=47.70, east=8.80), "all"
        )
        assert summary.n_panels == 507
        assert summary.panel_area_m2 == pytest.approx(18947.17, rel=1e-3)

        berg = inventory.PanelStore(tmp_path, "berg")
        berg.upsert_panels(
            inventory.ingest_geojson(
                json.loads((FIXTURES / "artifacts" / "berg_cleaned.geojson").read_text())
            )
        )
        summary = berg.summarize(
            BoundingBox(south=47.50, west=8.55, north=47.70, east=8.70), "all"
        )
        assert summary.n_panels == 14
        assert summary.panel_area_m2 == pytest.approx(956.29, rel=1e-3)


def test_threshold_monotonicity_inclusion():
    with criterion("thresholding: kept-set inclusion for every t1 <= t2 on 200 random detections"):
        rng = np.random.default_rng(99)
        dets = []
        for i in range(200):
            x0 = float(rng.uniform(0, 400))
            y0 = float(rng.uniform(0, 400))
            w = float(rng.uniform(5, 80))
            h = float(rng.uniform(5, 80))
            poly = detection.PixelPolygon(
                vertices=(
                    (x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h), (x0, y0),
                )
            )
            dets.append(
                detection.Detection(confidence=float(rng.uniform(0, 1)), region=poly)
            )
        ds = detection.DetectionSet(
            image_width=512, image_height=512, detector_name="r", detections=tuple(dets)
        )
        thresholds = sorted(float(t) for t in rng.uniform(0, 1, size=15)) + [0.0, 1.0]
        kept = {
            t: {d.region.vertices for d in detection.filter_by_confidence(ds, t).detections}
            for t in thresholds
        }
        for t1 in thresholds:
            for t2 in thresholds:
                if t1 <= t2:
                    assert kept[t2] <= kept[t1]
