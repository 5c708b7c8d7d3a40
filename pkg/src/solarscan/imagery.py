"""Slippy-map tile retrieval and stitching of anchored building images.

Tile addressing follows the standard Web-Mercator z/x/y scheme
(https://wiki.openstreetmap.org/wiki/Slippy_map_tilenames). A stitched
image is "anchored": it records the WGS84 coordinates of its NW and SE
corner pixel centers, which is all the georeferencing module needs.
"""

import io
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import requests
from PIL import Image, ImageDraw

from . import georef
from .errors import FootprintTooLargeError, TileFetchError
from .geodata import BuildingFootprint
from .geotypes import BoundingBox, GeoPoint

log = logging.getLogger(__name__)

TILE_SIZE = 256
MAX_ZOOM = 22
MAX_MERCATOR_LAT = 85.05112877980659  # atan(sinh(pi)) in degrees

DEFAULT_IMAGE_SIZE = 1500
DEFAULT_ZOOM = 21


@dataclass(frozen=True)
class TileAddress:
    z: int
    x: int
    y: int

    def __post_init__(self):
        if not 0 <= self.z <= MAX_ZOOM:
            raise ValueError(f"zoom {self.z} outside [0, {MAX_ZOOM}]")
        n = 1 << self.z
        if not 0 <= self.x < n or not 0 <= self.y < n:
            raise ValueError(f"tile ({self.x}, {self.y}) outside zoom-{self.z} grid")


@dataclass(frozen=True)
class AnchoredImage:
    """Square RGB image with georeferenced corner pixel centers."""

    width: int
    height: int
    pixel_data: np.ndarray  # (height, width, 3) uint8
    anchor_nw: GeoPoint  # center of pixel (0, 0)
    anchor_se: GeoPoint  # center of pixel (width-1, height-1)
    building_id: str

    def __post_init__(self):
        if self.width != self.height:
            raise ValueError("anchored images are square")
        if self.pixel_data.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel data shape {self.pixel_data.shape} != "
                f"({self.height}, {self.width}, 3)"
            )
        if not self.anchor_nw.lat > self.anchor_se.lat:
            raise ValueError("NW anchor must be north of SE anchor")
        if not self.anchor_nw.lon < self.anchor_se.lon:
            raise ValueError("NW anchor must be west of SE anchor")

    def extent(self) -> BoundingBox:
        """Geographic bounds of the pixel-center grid."""
        return BoundingBox(
            south=self.anchor_se.lat,
            west=self.anchor_nw.lon,
            north=self.anchor_nw.lat,
            east=self.anchor_se.lon,
        )

    def to_png_bytes(self) -> bytes:
        buf = io.BytesIO()
        Image.fromarray(self.pixel_data, "RGB").save(buf, format="PNG")
        return buf.getvalue()


@dataclass(frozen=True)
class BuildingMask:
    """Boolean footprint raster aligned with an AnchoredImage."""

    width: int
    height: int
    bits: np.ndarray  # (height, width) bool

    def __post_init__(self):
        if self.bits.shape != (self.height, self.width):
            raise ValueError("mask shape mismatch")
        if not bool(self.bits.any()):
            raise ValueError("mask must contain at least one set pixel")


def _world_px(lat: float, lon: float, z: int, tile_size: int = TILE_SIZE) -> tuple[float, float]:
    size = tile_size * (1 << z)
    x = (lon + 180.0) / 360.0 * size
    y = (1.0 - math.asinh(math.tan(math.radians(lat))) / math.pi) / 2.0 * size
    return x, y


def _world_px_to_geo(x: float, y: float, z: int, tile_size: int = TILE_SIZE) -> GeoPoint:
    size = tile_size * (1 << z)
    lon = x / size * 360.0 - 180.0
    lat = math.degrees(math.atan(math.sinh(math.pi * (1.0 - 2.0 * y / size))))
    return GeoPoint(lat=lat, lon=lon)


def tiles_for_bbox(area: BoundingBox, z: int) -> list[TileAddress]:
    """Minimal axis-aligned tile rectangle covering ``area`` at zoom ``z``."""
    if not 0 <= z <= MAX_ZOOM:
        raise ValueError(f"zoom {z} outside [0, {MAX_ZOOM}]")
    if abs(area.south) > MAX_MERCATOR_LAT or abs(area.north) > MAX_MERCATOR_LAT:
        raise ValueError(
            f"bbox exceeds Web-Mercator latitude limit ±{MAX_MERCATOR_LAT:.4f}"
        )
    n = 1 << z

    def tile_x(lon: float) -> int:
        return min(n - 1, max(0, int((lon + 180.0) / 360.0 * n)))

    def tile_y(lat: float) -> int:
        y = (1.0 - math.asinh(math.tan(math.radians(lat))) / math.pi) / 2.0 * n
        return min(n - 1, max(0, int(y)))

    x0, x1 = tile_x(area.west), tile_x(area.east)
    y0, y1 = tile_y(area.north), tile_y(area.south)
    return [
        TileAddress(z=z, x=x, y=y)
        for y in range(y0, y1 + 1)
        for x in range(x0, x1 + 1)
    ]


class TileFetcher:
    """Tile loader with fixture replay, byte-exact disk cache, and retries.

    Lookup order: fixture directory, cache directory, HTTP template
    (``{z}/{x}/{y}`` placeholders). Fetches within one image run on a
    bounded thread pool.
    """

    def __init__(
        self,
        url_template: str | None = None,
        session: requests.Session | None = None,
        cache_dir: str | Path | None = None,
        fixtures_dir: str | Path | None = None,
        retries: int = 3,
        backoff: float = 0.5,
        fanout: int = 8,
        tile_size: int = TILE_SIZE,
    ):
        self.url_template = url_template
        self.session = session or requests.Session()
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else None
        self.retries = retries
        self.backoff = backoff
        self.fanout = fanout
        self.tile_size = tile_size

    def _tile_relpath(self, addr: TileAddress) -> Path:
        return Path(str(addr.z)) / str(addr.x) / f"{addr.y}.png"

    def get_tile_bytes(self, addr: TileAddress) -> bytes:
        rel = self._tile_relpath(addr)
        if self.fixtures_dir is not None:
            p = self.fixtures_dir / rel
            if p.is_file():
                return p.read_bytes()
            raise TileFetchError(f"tile {addr.z}/{addr.x}/{addr.y} missing from fixtures")
        if self.cache_dir is not None:
            p = self.cache_dir / rel
            if p.is_file():
                return p.read_bytes()
        data = self._fetch_http(addr)
        if self.cache_dir is not None:
            p = self.cache_dir / rel
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_bytes(data)
        return data

    def _fetch_http(self, addr: TileAddress) -> bytes:
        if not self.url_template:
            raise TileFetchError("no tile URL configured and tile not in cache/fixtures")
        url = self.url_template.format(z=addr.z, x=addr.x, y=addr.y)
        last = None
        for attempt in range(self.retries):
            try:
                resp = self.session.get(
                    url, headers={"User-Agent": "solarscan/0.1"}, timeout=30
                )
                resp.raise_for_status()
                return resp.content
            except requests.RequestException as exc:
                last = exc
                if attempt + 1 < self.retries:
                    time.sleep(self.backoff * (2**attempt))
        raise TileFetchError(f"{url}: {last}")

    def get_tile_image(self, addr: TileAddress) -> Image.Image:
        data = self.get_tile_bytes(addr)
        try:
            img = Image.open(io.BytesIO(data))
            img.load()
        except Exception as exc:
            raise TileFetchError(f"tile {addr.z}/{addr.x}/{addr.y} undecodable: {exc}")
        if img.size != (self.tile_size, self.tile_size):
            raise TileFetchError(
                f"tile {addr.z}/{addr.x}/{addr.y} is {img.size}, expected "
                f"({self.tile_size}, {self.tile_size})"
            )
        if img.mode != "RGB":
            # composite alpha over white so transparent fill looks like paper
            rgba = img.convert("RGBA")
            base = Image.new("RGBA", rgba.size, (255, 255, 255, 255))
            img = Image.alpha_composite(base, rgba).convert("RGB")
        return img


def fetch_anchored_image(
    b: BuildingFootprint,
    fetcher: TileFetcher,
    z: int = DEFAULT_ZOOM,
    size: int = DEFAULT_IMAGE_SIZE,
) -> AnchoredImage:
    """Stitch a ``size``x``size`` window centered on the footprint centroid.

    Raises FootprintTooLargeError when the footprint does not fit in the
    window at this zoom; tile errors propagate after the fetcher's retries.
    """
    if not 0 <= z <= MAX_ZOOM:
        raise ValueError(f"zoom {z} outside [0, {MAX_ZOOM}]")
    ts = fetcher.tile_size
    c = b.centroid()
    cx, cy = _world_px(c.lat, c.lon, z, ts)
    ox = round(cx) - size // 2
    oy = round(cy) - size // 2

    ext_nw = _world_px_to_geo(ox, oy, z, ts)
    ext_se = _world_px_to_geo(ox + size, oy + size, z, ts)
    if not (
        ext_se.lat <= b.bbox.south
        and b.bbox.north <= ext_nw.lat
        and ext_nw.lon <= b.bbox.west
        and b.bbox.east <= ext_se.lon
    ):
        raise FootprintTooLargeError(
            f"footprint {b.id} exceeds the {size}px window at zoom {z}"
        )

    tx0, tx1 = ox // ts, (ox + size - 1) // ts
    ty0, ty1 = oy // ts, (oy + size - 1) // ts
    n = 1 << z
    addrs = [
        TileAddress(z=z, x=tx, y=ty)
        for ty in range(ty0, ty1 + 1)
        for tx in range(tx0, tx1 + 1)
        if 0 <= tx < n and 0 <= ty < n
    ]

    canvas = Image.new("RGB", (size, size), (255, 255, 255))
    with ThreadPoolExecutor(max_workers=max(1, fetcher.fanout)) as pool:
        tiles = list(pool.map(fetcher.get_tile_image, addrs))
    for addr, tile in zip(addrs, tiles):
        canvas.paste(tile, (addr.x * ts - ox, addr.y * ts - oy))

    return AnchoredImage(
        width=size,
        height=size,
        pixel_data=np.asarray(canvas, dtype=np.uint8),
        anchor_nw=_world_px_to_geo(ox + 0.5, oy + 0.5, z, ts),
        anchor_se=_world_px_to_geo(ox + size - 0.5, oy + size - 0.5, z, ts),
        building_id=b.id,
    )


def render_building_mask(b: BuildingFootprint, img: AnchoredImage) -> BuildingMask:
    """Rasterize the footprint into the image's pixel grid (even-odd fill).

    A footprint that falls entirely between pixel centers still produces a
    one-pixel mask (snapped to the centroid) so the mask invariant holds.
    """
    try:
        ring_px = [georef.geo_to_pixel(p, img) for p in b.ring]
    except ValueError as exc:
        raise ValueError(f"footprint {b.id} outside image extent: {exc}") from exc

    raster = Image.new("1", (img.width, img.height), 0)
    ImageDraw.Draw(raster).polygon([(x, y) for x, y in ring_px], fill=1, outline=1)
    bits = np.asarray(raster, dtype=bool)
    if not bits.any():
        cx, cy = georef.geo_to_pixel(b.centroid(), img)
        px = min(img.width - 1, max(0, round(cx)))
        py = min(img.height - 1, max(0, round(cy)))
        bits = np.zeros((img.height, img.width), dtype=bool)
        bits[py, px] = True
    return BuildingMask(width=img.width, height=img.height, bits=bits)
