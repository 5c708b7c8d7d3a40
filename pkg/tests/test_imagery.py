import io
import math

import numpy as np
import pytest
import requests
from PIL import Image

from solarscan import georef, imagery
from solarscan.errors import FootprintTooLargeError, TileFetchError
from solarscan.geodata import BuildingFootprint
from solarscan.geotypes import BoundingBox, GeoPoint

from conftest import make_image


def slippy_tile(lat, lon, z):
    """Independent reference formula (OSM wiki slippy-map tilenames)."""
    n = 2.0**z
    x = int((lon + 180.0) / 360.0 * n)
    y = int((1.0 - math.asinh(math.tan(math.radians(lat))) / math.pi) / 2.0 * n)
    return x, y


def png_bytes(color, size=256):
    buf = io.BytesIO()
    Image.new("RGB", (size, size), color).save(buf, format="PNG")
    return buf.getvalue()


class TestTilesForBbox:
    def test_origin_quadrant_at_z1(self):
        # the tile whose NW corner is (0, 0): x=1, y=1 at z=1
        area = BoundingBox(south=-1e-3, west=1e-4, north=-1e-4, east=1e-3)
        assert imagery.tiles_for_bbox(area, 1) == [imagery.TileAddress(z=1, x=1, y=1)]

    def test_whole_world_at_z0(self):
        area = BoundingBox(south=-85.0, west=-180.0, north=85.0, east=180.0)
        assert imagery.tiles_for_bbox(area, 0) == [imagery.TileAddress(z=0, x=0, y=0)]

    def test_bulach_z21_matches_reference_formula(self):
        lat, lon = 47.519, 8.540
        area = BoundingBox(south=lat - 1e-6, west=lon - 1e-6, north=lat + 1e-6, east=lon + 1e-6)
        tiles = imagery.tiles_for_bbox(area, 21)
        assert slippy_tile(lat, lon, 21) == (1098325, 733168)
        for t in tiles:
            assert abs(t.x - 1098325) <= 1 and abs(t.y - 733168) <= 1
        assert imagery.TileAddress(z=21, x=1098325, y=733168) in tiles

    def test_count_and_corner_coverage(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            z = int(rng.integers(3, 18))
            lat0 = float(rng.uniform(-80, 79))
            lon0 = float(rng.uniform(-179, 178))
            area = BoundingBox(
                south=lat0, west=lon0,
                north=lat0 + float(rng.uniform(1e-4, 1.0)),
                east=lon0 + float(rng.uniform(1e-4, 1.0)),
            )
            tiles = imagery.tiles_for_bbox(area, z)
            xs = sorted({t.x for t in tiles})
            ys = sorted({t.y for t in tiles})
            assert len(tiles) == len(xs) * len(ys)
            addresses = {(t.x, t.y) for t in tiles}
            for lat, lon in [
                (area.south, area.west), (area.south, area.east),
                (area.north, area.west), (area.north, area.east),
            ]:
                tx, ty = slippy_tile(lat, lon, z)
                tx = min(tx, (1 << z) - 1)
                ty = min(ty, (1 << z) - 1)
                assert (tx, ty) in addresses

    def test_latitude_limits(self):
        with pytest.raises(ValueError):
            imagery.tiles_for_bbox(BoundingBox(south=80, west=0, north=88, east=1), 5)
        with pytest.raises(ValueError):
            imagery.tiles_for_bbox(BoundingBox(south=0, west=0, north=1, east=1), 23)

    def test_tile_address_invariants(self):
        with pytest.raises(ValueError):
            imagery.TileAddress(z=2, x=4, y=0)
        with pytest.raises(ValueError):
            imagery.TileAddress(z=2, x=-1, y=0)


class CountingSession:
    def __init__(self, table):
        self.table = table  # url -> bytes | Exception list
        self.calls = []

    def get(self, url, **kw):
        self.calls.append(url)
        item = self.table[url]
        if isinstance(item, list):
            item = item.pop(0)
        if isinstance(item, Exception):
            raise item
        resp = requests.models.Response()
        resp.status_code = 200
        resp._content = item
        return resp


def corner_square_footprint(z=10, corner_x=512, corner_y=340, size_m=20.0):
    """Square footprint whose centroid sits exactly on a tile corner."""
    corner = imagery._world_px_to_geo(corner_x * 256.0, corner_y * 256.0, z)
    dlat = size_m / 111132.0
    dlon = size_m / (111320.0 * math.cos(math.radians(corner.lat)))
    ring = (
        GeoPoint(corner.lat - dlat, corner.lon - dlon),
        GeoPoint(corner.lat - dlat, corner.lon + dlon),
        GeoPoint(corner.lat + dlat, corner.lon + dlon),
        GeoPoint(corner.lat + dlat, corner.lon - dlon),
        GeoPoint(corner.lat - dlat, corner.lon - dlon),
    )
    return BuildingFootprint(id="way/corner", ring=ring)


class TestStitching:
    def _checkerboard_fetcher(self, tmp_path, z=10):
        colors = {
            (511, 339): (255, 0, 0),
            (512, 339): (0, 255, 0),
            (511, 340): (0, 0, 255),
            (512, 340): (255, 255, 0),
        }
        for (x, y), color in colors.items():
            p = tmp_path / str(z) / str(x) / f"{y}.png"
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_bytes(png_bytes(color))
        return imagery.TileFetcher(fixtures_dir=tmp_path), colors

    def test_checkerboard_quadrants(self, tmp_path):
        fetcher, colors = self._checkerboard_fetcher(tmp_path)
        fp = corner_square_footprint()
        img = imagery.fetch_anchored_image(fp, fetcher, z=10, size=512)
        assert tuple(img.pixel_data[10, 10]) == colors[(511, 339)]
        assert tuple(img.pixel_data[10, 500]) == colors[(512, 339)]
        assert tuple(img.pixel_data[500, 10]) == colors[(511, 340)]
        assert tuple(img.pixel_data[500, 500]) == colors[(512, 340)]

    def test_anchor_ordering_at_tile_corner(self, tmp_path):
        fetcher, _ = self._checkerboard_fetcher(tmp_path)
        img = imagery.fetch_anchored_image(corner_square_footprint(), fetcher, z=10, size=512)
        assert img.anchor_nw.lat > img.anchor_se.lat
        assert img.anchor_nw.lon < img.anchor_se.lon

    def test_deterministic_stitching(self, tmp_path):
        fetcher, _ = self._checkerboard_fetcher(tmp_path)
        fp = corner_square_footprint()
        a = imagery.fetch_anchored_image(fp, fetcher, z=10, size=512)
        b = imagery.fetch_anchored_image(fp, fetcher, z=10, size=512)
        assert np.array_equal(a.pixel_data, b.pixel_data)
        assert a.anchor_nw == b.anchor_nw and a.anchor_se == b.anchor_se

    def test_footprint_too_large(self, tmp_path):
        fetcher, _ = self._checkerboard_fetcher(tmp_path)
        # 512 px at z10 spans ~74 km E-W at this latitude; 100 km footprint cannot fit
        fp = corner_square_footprint(size_m=50000.0)
        with pytest.raises(FootprintTooLargeError):
            imagery.fetch_anchored_image(fp, fetcher, z=10, size=512)

    def test_footprint_contained_in_extent(self, tmp_path):
        fetcher, _ = self._checkerboard_fetcher(tmp_path)
        fp = corner_square_footprint()
        img = imagery.fetch_anchored_image(fp, fetcher, z=10, size=512)
        ext = img.extent()
        assert ext.south <= fp.bbox.south and fp.bbox.north <= ext.north

    def test_missing_fixture_tile_is_error(self, tmp_path):
        fetcher = imagery.TileFetcher(fixtures_dir=tmp_path)
        with pytest.raises(TileFetchError):
            imagery.fetch_anchored_image(corner_square_footprint(), fetcher, z=10, size=512)


class TestTileFetcher:
    def test_cache_reuse_byte_exact(self, tmp_path):
        url = "https://tiles.test/10/512/340.png"
        payload = png_bytes((1, 2, 3))
        session = CountingSession({url: payload})
        fetcher = imagery.TileFetcher(
            url_template="https://tiles.test/{z}/{x}/{y}.png",
            session=session,
            cache_dir=tmp_path,
        )
        addr = imagery.TileAddress(z=10, x=512, y=340)
        first = fetcher.get_tile_bytes(addr)
        second = fetcher.get_tile_bytes(addr)
        assert first == second == payload
        assert session.calls == [url]  # second hit from cache
        assert (tmp_path / "10" / "512" / "340.png").read_bytes() == payload

    def test_retry_then_success(self):
        url = "https://tiles.test/10/1/1.png"
        session = CountingSession(
            {url: [requests.ConnectionError("a"), requests.ConnectionError("b"), png_bytes((9, 9, 9))]}
        )
        fetcher = imagery.TileFetcher(
            url_template="https://tiles.test/{z}/{x}/{y}.png", session=session,
            retries=3, backoff=0.0,
        )
        data = fetcher.get_tile_bytes(imagery.TileAddress(z=10, x=1, y=1))
        assert len(session.calls) == 3 and data == png_bytes((9, 9, 9))

    def test_retries_exhausted(self):
        url = "https://tiles.test/10/1/1.png"
        session = CountingSession({url: [requests.ConnectionError(str(i)) for i in range(3)]})
        fetcher = imagery.TileFetcher(
            url_template="https://tiles.test/{z}/{x}/{y}.png", session=session,
            retries=3, backoff=0.0,
        )
        with pytest.raises(TileFetchError):
            fetcher.get_tile_bytes(imagery.TileAddress(z=10, x=1, y=1))
        assert len(session.calls) == 3

    def test_alpha_composited_over_white(self, tmp_path):
        buf = io.BytesIO()
        Image.new("RGBA", (256, 256), (0, 0, 0, 0)).save(buf, format="PNG")
        p = tmp_path / "5" / "1" / "1.png"
        p.parent.mkdir(parents=True)
        p.write_bytes(buf.getvalue())
        fetcher = imagery.TileFetcher(fixtures_dir=tmp_path)
        tile = fetcher.get_tile_image(imagery.TileAddress(z=5, x=1, y=1))
        assert tile.getpixel((0, 0)) == (255, 255, 255)

    def test_wrong_tile_size_rejected(self, tmp_path):
        p = tmp_path / "5" / "1" / "1.png"
        p.parent.mkdir(parents=True)
        p.write_bytes(png_bytes((0, 0, 0), size=128))
        fetcher = imagery.TileFetcher(fixtures_dir=tmp_path)
        with pytest.raises(TileFetchError):
            fetcher.get_tile_image(imagery.TileAddress(z=5, x=1, y=1))


class TestBuildingMask:
    def test_full_extent_footprint_all_bits(self):
        img = make_image(width=64, height=64)
        ext = img.extent()
        fp = BuildingFootprint(
            id="way/full",
            ring=(
                GeoPoint(ext.north, ext.west), GeoPoint(ext.north, ext.east),
                GeoPoint(ext.south, ext.east), GeoPoint(ext.south, ext.west),
                GeoPoint(ext.north, ext.west),
            ),
        )
        mask = imagery.render_building_mask(fp, img)
        assert mask.bits.all()

    def test_half_rectangle_bit_count(self):
        img = make_image(width=100, height=100)
        nw, se = img.anchor_nw, img.anchor_se
        mid_lat = nw.lat + 0.5 * (se.lat - nw.lat)
        fp = BuildingFootprint(
            id="way/half",
            ring=(
                GeoPoint(nw.lat, nw.lon), GeoPoint(nw.lat, se.lon),
                GeoPoint(mid_lat, se.lon), GeoPoint(mid_lat, nw.lon),
                GeoPoint(nw.lat, nw.lon),
            ),
        )
        mask = imagery.render_building_mask(fp, img)
        count = int(mask.bits.sum())
        assert abs(count - 100 * 100 // 2) <= 100  # within one boundary row

    def test_subpixel_footprint_never_empty(self):
        img = make_image(width=100, height=100)
        c = georef.pixel_to_geo((50.3, 50.7), img)
        eps = 1e-9
        fp = BuildingFootprint(
            id="way/dot",
            ring=(
                GeoPoint(c.lat, c.lon), GeoPoint(c.lat, c.lon + eps),
                GeoPoint(c.lat + eps, c.lon + eps), GeoPoint(c.lat, c.lon),
            ),
        )
        mask = imagery.render_building_mask(fp, img)
        assert int(mask.bits.sum()) >= 1

    def test_footprint_outside_image_rejected(self):
        img = make_image(width=64, height=64)
        fp = BuildingFootprint(
            id="way/far",
            ring=(
                GeoPoint(10.0, 10.0), GeoPoint(10.0, 10.001),
                GeoPoint(10.001, 10.001), GeoPoint(10.0, 10.0),
            ),
        )
        with pytest.raises(ValueError):
            imagery.render_building_mask(fp, img)

    def test_mask_dimensions_match_image(self):
        img = make_image(width=64, height=64)
        ext = img.extent()
        fp = BuildingFootprint(
            id="way/q",
            ring=(
                GeoPoint(ext.north, ext.west), GeoPoint(ext.north, ext.east),
                GeoPoint(ext.south, ext.east), GeoPoint(ext.south, ext.west),
                GeoPoint(ext.north, ext.west),
            ),
        )
        mask = imagery.render_building_mask(fp, img)
        assert (mask.width, mask.height) == (img.width, img.height)


class TestRoundTripInvariant:
    def test_every_pixel_maps_inside_extent(self):
        rng = np.random.default_rng(9)
        img = make_image()
        ext = img.extent()
        for _ in range(500):
            x = float(rng.uniform(0, img.width - 1))
            y = float(rng.uniform(0, img.height - 1))
            g = georef.pixel_to_geo((x, y), img)
            assert ext.south <= g.lat <= ext.north
            assert ext.west <= g.lon <= ext.east
