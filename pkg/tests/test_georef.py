import logging
import math

import numpy as np
import pytest

from solarscan import georef
from solarscan.detection import Detection, DetectionSet, PixelPolygon
from solarscan.geotypes import BoundingBox, GeoPoint

from conftest import load_test_fixture, make_image


class TestPixelToGeo:
    def test_nw_corner_is_exact_anchor(self):
        img = make_image()
        assert georef.pixel_to_geo((0, 0), img) == img.anchor_nw

    def test_se_corner_is_exact_anchor(self):
        img = make_image()
        assert georef.pixel_to_geo((img.width - 1, img.height - 1), img) == img.anchor_se

    def test_midpoint_is_coordinate_mean(self):
        img = make_image()
        p = georef.pixel_to_geo((500, 500), img)
        assert p.lat == pytest.approx((47.0 + 46.99) / 2, abs=1e-12)
        assert p.lon == pytest.approx((8.0 + 8.01) / 2, abs=1e-12)

    def test_hand_evaluated_interior_point(self):
        # y=750 of 1000 -> 75% toward SE in lat; x=250 -> 25% in lon
        img = make_image()
        p = georef.pixel_to_geo((250, 750), img)
        assert p.lat == pytest.approx(47.0 + 0.75 * (-0.01), abs=1e-12)
        assert p.lon == pytest.approx(8.0 + 0.25 * 0.01, abs=1e-12)

    def test_linearity_midpoint_of_two_pixels(self):
        img = make_image()
        rng = np.random.default_rng(7)
        for _ in range(50):
            x1, y1, x2, y2 = rng.uniform(0, 1000, size=4)
            g1 = georef.pixel_to_geo((x1, y1), img)
            g2 = georef.pixel_to_geo((x2, y2), img)
            gm = georef.pixel_to_geo(((x1 + x2) / 2, (y1 + y2) / 2), img)
            assert gm.lat == pytest.approx((g1.lat + g2.lat) / 2, abs=1e-12)
            assert gm.lon == pytest.approx((g1.lon + g2.lon) / 2, abs=1e-12)

    def test_monotonicity(self):
        img = make_image()
        lats = [georef.pixel_to_geo((0, y), img).lat for y in range(0, 1001, 100)]
        lons = [georef.pixel_to_geo((x, 0), img).lon for x in range(0, 1001, 100)]
        assert all(a > b for a, b in zip(lats, lats[1:]))
        assert all(a < b for a, b in zip(lons, lons[1:]))

    def test_out_of_bounds_pixel_rejected(self):
        img = make_image()
        for bad in [(-1, 0), (0, -1), (1001, 0), (0, 1001), (2000, 2000)]:
            with pytest.raises(ValueError):
                georef.pixel_to_geo(bad, img)


class TestGeoToPixel:
    def test_anchor_se_maps_to_corner(self):
        img = make_image()
        assert georef.geo_to_pixel(img.anchor_se, img) == (1000.0, 1000.0)

    def test_round_trip_within_half_pixel(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            lat0 = rng.uniform(-60, 60)
            lon0 = rng.uniform(-170, 170)
            dlat = rng.uniform(0.001, 0.02)
            dlon = rng.uniform(0.001, 0.02)
            size = int(rng.integers(50, 2000))
            img = make_image(
                nw=GeoPoint(lat0 + dlat, lon0),
                se=GeoPoint(lat0, lon0 + dlon),
                width=size,
                height=size,
            )
            for _ in range(100):
                x = rng.uniform(0, img.width - 1)
                y = rng.uniform(0, img.height - 1)
                g = georef.pixel_to_geo((x, y), img)
                x2, y2 = georef.geo_to_pixel(g, img)
                assert abs(x2 - x) <= 0.5 and abs(y2 - y) <= 0.5

    def test_point_outside_extent_rejected(self):
        img = make_image()
        with pytest.raises(ValueError):
            georef.geo_to_pixel(GeoPoint(48.0, 8.0), img)


class TestGeoreferenceDetections:
    def _ds(self, polys, w=1001, h=1001):
        dets = tuple(
            Detection(confidence=0.9, region=PixelPolygon(vertices=tuple(p)))
            for p in polys
        )
        return DetectionSet(image_width=w, image_height=h, detector_name="t", detections=dets)

    def test_square_maps_to_interpolated_corners(self):
        img = make_image()
        square = [(100, 100), (200, 100), (200, 200), (100, 200), (100, 100)]
        polys = georef.georeference_detections(self._ds([square]), img)
        assert len(polys) == 1
        expected = [georef.pixel_to_geo(v, img) for v in square]
        assert list(polys[0].ring) == expected

    def test_empty_detection_set(self):
        img = make_image()
        assert georef.georeference_detections(self._ds([]), img) == []

    def test_dimension_mismatch_rejected(self):
        img = make_image()
        with pytest.raises(ValueError):
            georef.georeference_detections(self._ds([], w=500, h=500), img)

    def test_sliver_dropped_with_warning(self, caplog):
        # image spanning ~1.1 m so a 1-px sliver is far below 0.05 m^2
        img = make_image(
            nw=GeoPoint(47.00001, 8.0), se=GeoPoint(47.0, 8.0000147), width=101, height=101
        )
        sliver = [(10, 10), (90, 10), (90, 10.4), (10, 10.4), (10, 10)]
        keep = [(10, 20), (90, 20), (90, 90), (10, 90), (10, 20)]
        with caplog.at_level(logging.WARNING, logger="solarscan.georef"):
            polys = georef.georeference_detections(self._ds([sliver, keep], 101, 101), img)
        assert len(polys) == 1
        assert "sliver" in caplog.text

    def test_collinear_pixel_ring_rejected_at_type_level(self):
        with pytest.raises(ValueError):
            PixelPolygon(vertices=((100, 100), (200, 100), (300, 100), (100, 100)))

    def test_vertex_mapping_equals_exhaustive_pixel_mapping(self):
        # On a 50x50 grid, mapping the rectangle's vertices must give the
        # same polygon as mapping every covered pixel and taking extremes.
        img = make_image(width=50, height=50)
        x0, y0, x1, y1 = 5, 7, 41, 33
        rect = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
        via_vertices = [georef.pixel_to_geo(v, img) for v in rect]

        pts = [
            georef.pixel_to_geo((x, y), img)
            for x in range(x0, x1 + 1)
            for y in range(y0, y1 + 1)
        ]
        lat_max = max(p.lat for p in pts)
        lat_min = min(p.lat for p in pts)
        lon_min = min(p.lon for p in pts)
        lon_max = max(p.lon for p in pts)
        exhaustive = [
            GeoPoint(lat_max, lon_min),
            GeoPoint(lat_max, lon_max),
            GeoPoint(lat_min, lon_max),
            GeoPoint(lat_min, lon_min),
            GeoPoint(lat_max, lon_min),
        ]
        assert via_vertices == exhaustive


class TestGeodesicArea:
    def test_matches_high_precision_quadrature(self):
        for case in load_test_fixture("geodesic_oracle.json"):
            ring = BoundingBox(
                south=case["south"], west=case["west"],
                north=case["north"], east=case["east"],
            ).ring()
            area = georef.geodesic_area(ring)
            assert area == pytest.approx(case["area_m2"], rel=1e-6)

    def test_equator_small_square_magnitude(self):
        ring = BoundingBox(south=0, west=0, north=0.0001, east=0.0001).ring()
        assert georef.geodesic_area(ring) == pytest.approx(123.6, rel=0.005)

    def test_cosine_latitude_scaling(self):
        eq = BoundingBox(south=0, west=0, north=0.0001, east=0.0001).ring()
        at47 = BoundingBox(south=47, west=8, north=47.0001, east=8.0001).ring()
        ratio = georef.geodesic_area(at47) / georef.geodesic_area(eq)
        assert ratio == pytest.approx(math.cos(math.radians(47.0)), rel=0.01)

    def test_orientation_reversal_invariance(self):
        ring = [
            GeoPoint(47.0, 8.0),
            GeoPoint(47.0, 8.001),
            GeoPoint(47.0008, 8.0012),
            GeoPoint(47.001, 8.0),
            GeoPoint(47.0, 8.0),
        ]
        fwd = georef.geodesic_area(ring)
        rev = georef.geodesic_area(list(reversed(ring)))
        assert rev == pytest.approx(fwd, rel=1e-9)

    def test_degenerate_ring_rejected(self):
        # exactly collinear (along a meridian): zero area
        flat = [GeoPoint(47, 8), GeoPoint(47.001, 8), GeoPoint(47.002, 8), GeoPoint(47, 8)]
        with pytest.raises(ValueError):
            georef.geodesic_area(flat)

    def test_self_intersecting_ring_rejected(self):
        bowtie = [
            GeoPoint(47.0, 8.0),
            GeoPoint(47.001, 8.001),
            GeoPoint(47.0, 8.001),
            GeoPoint(47.001, 8.0),
            GeoPoint(47.0, 8.0),
        ]
        with pytest.raises(ValueError):
            georef.geodesic_area(bowtie)

    def test_unclosed_and_short_rings_rejected(self):
        with pytest.raises(ValueError):
            georef.geodesic_area([GeoPoint(0, 0), GeoPoint(0, 1), GeoPoint(1, 1)])
        with pytest.raises(ValueError):
            georef.geodesic_area(
                [GeoPoint(0, 0), GeoPoint(0, 1), GeoPoint(1, 1), GeoPoint(1, 0)]
            )


class TestGeoPolygon:
    def test_from_ring_computes_area(self):
        poly = georef.GeoPolygon.from_ring(
            BoundingBox(south=47, west=8, north=47.0001, east=8.0001).ring()
        )
        assert poly.area_m2 == pytest.approx(84.55, rel=1e-3)

    def test_zero_area_rejected(self):
        ring = BoundingBox(south=47, west=8, north=47.0001, east=8.0001).ring()
        with pytest.raises(ValueError):
            georef.GeoPolygon(ring=tuple(ring), area_m2=0.0)
