"""Open-map geodata: place geocoding and building footprint retrieval.

Live mode speaks the Nominatim search contract (GET, ``q=<name>&format=json``)
and posts Overpass QL; both endpoints come from configuration. With a
fixture directory every network call is replayed from recorded responses,
so pipelines and tests run fully offline.
"""

import json
import logging
import math
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import requests
from shapely.geometry import Polygon as _ShapelyPolygon

from . import georef
from .errors import MalformedResponseError, NoMatchError, OversizeAreaError, UpstreamError
from .geotypes import BoundingBox, GeoPoint

log = logging.getLogger(__name__)

USER_AGENT = "solarscan/0.1"
DEFAULT_MAX_QUERY_AREA_KM2 = 25.0

DEFAULT_OVERPASS_QUERY = (
    "[out:json][timeout:60];"
    '(way["building"]({s},{w},{n},{e});'
    'relation["building"]({s},{w},{n},{e}););'
    "out body geom;"
)


class TokenBucket:
    """Thread-safe token bucket limiting outbound requests per second."""

    def __init__(self, rate: float, capacity: float = 1.0):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self._rate = rate
        self._capacity = max(capacity, 1.0)
        self._tokens = self._capacity
        self._stamp = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        """Block until one token is available, then consume it."""
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(
                    self._capacity, self._tokens + (now - self._stamp) * self._rate
                )
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self._rate
            time.sleep(wait)


@dataclass(frozen=True)
class BuildingFootprint:
    """Outer ring of one building, WGS84, closed (first point == last)."""

    id: str
    ring: tuple[GeoPoint, ...]
    bbox: BoundingBox = field(init=False)

    def __post_init__(self):
        if len(self.ring) < 4:
            raise ValueError(f"footprint ring needs >= 4 points, got {len(self.ring)}")
        if self.ring[0] != self.ring[-1]:
            raise ValueError("footprint ring is not closed")
        try:
            simple = _ShapelyPolygon([(p.lon, p.lat) for p in self.ring]).is_valid
        except Exception:
            simple = False
        if not simple:
            raise ValueError(f"footprint {self.id} ring is not simple")
        object.__setattr__(self, "bbox", BoundingBox.around(list(self.ring)))

    def centroid(self) -> GeoPoint:
        poly = _ShapelyPolygon([(p.lon, p.lat) for p in self.ring])
        c = poly.centroid
        return GeoPoint(lat=c.y, lon=c.x)


class FixtureStore:
    """Recorded upstream responses used in place of live services.

    Layout of the fixture directory::

        geocode.json        name -> list of Nominatim-style results
        overpass/*.json     recorded Overpass responses (merged universe)
        tiles/z/x/y.png     map tiles, cache layout
        tmy.csv             TMY weather served for any coordinate
        detections.json     scripted mock-detector sidecar
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise FileNotFoundError(f"fixture directory not found: {self.root}")
        self._overpass_elements: list[dict] | None = None

    def geocode_results(self, name: str) -> list[dict]:
        path = self.root / "geocode.json"
        if not path.is_file():
            return []
        table = json.loads(path.read_text(encoding="utf-8"))
        return table.get(name, [])

    def overpass_document(self) -> dict:
        """All recorded Overpass elements as one response document."""
        if self._overpass_elements is None:
            elements = []
            for path in sorted((self.root / "overpass").glob("*.json")):
                doc = json.loads(path.read_text(encoding="utf-8"))
                elements.extend(doc.get("elements", []))
            self._overpass_elements = elements
        return {"elements": self._overpass_elements}

    @property
    def tiles_dir(self) -> Path | None:
        d = self.root / "tiles"
        return d if d.is_dir() else None

    @property
    def tmy_path(self) -> Path | None:
        p = self.root / "tmy.csv"
        return p if p.is_file() else None

    @property
    def detections_path(self) -> Path | None:
        p = self.root / "detections.json"
        return p if p.is_file() else None


class Geocoder:
    """Nominatim-compatible place-name resolver."""

    def __init__(
        self,
        url: str = "https://nominatim.openstreetmap.org/search",
        session: requests.Session | None = None,
        limiter: TokenBucket | None = None,
        fixtures: FixtureStore | None = None,
    ):
        self.url = url
        self.session = session or requests.Session()
        self.limiter = limiter
        self.fixtures = fixtures

    def _results(self, place_name: str) -> list[dict]:
        if not place_name or not place_name.strip():
            raise ValueError("place name must be non-empty")
        if self.fixtures is not None:
            return self.fixtures.geocode_results(place_name)
        if self.limiter is not None:
            self.limiter.acquire()
        try:
            resp = self.session.get(
                self.url,
                params={"q": place_name, "format": "json"},
                headers={"User-Agent": USER_AGENT},
                timeout=30,
            )
            resp.raise_for_status()
            results = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise UpstreamError("geocoder", str(exc)) from exc
        if not isinstance(results, list):
            raise MalformedResponseError("geocoder response is not a JSON list")
        return results

    def geocode(self, place_name: str) -> GeoPoint:
        """Coordinates of the top-ranked match for ``place_name``."""
        results = self._results(place_name)
        if not results:
            raise NoMatchError(f"no geocoding match for {place_name!r}")
        try:
            top = results[0]
            return GeoPoint(lat=float(top["lat"]), lon=float(top["lon"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"geocoder result malformed: {exc}") from exc

    def geocode_area(self, place_name: str) -> BoundingBox:
        """Bounding box of the top-ranked match (Nominatim ``boundingbox``)."""
        results = self._results(place_name)
        if not results:
            raise NoMatchError(f"no geocoding match for {place_name!r}")
        try:
            south, north, west, east = (float(v) for v in results[0]["boundingbox"])
            return BoundingBox(south=south, west=west, north=north, east=east)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"geocoder result malformed: {exc}") from exc


class FootprintSource:
    """Building footprints from an Overpass-compatible endpoint."""

    def __init__(
        self,
        url: str = "https://overpass-api.de/api/interpreter",
        query_template: str = DEFAULT_OVERPASS_QUERY,
        session: requests.Session | None = None,
        limiter: TokenBucket | None = None,
        fixtures: FixtureStore | None = None,
        max_area_km2: float = DEFAULT_MAX_QUERY_AREA_KM2,
    ):
        self.url = url
        self.query_template = query_template
        self.session = session or requests.Session()
        self.limiter = limiter
        self.fixtures = fixtures
        self.max_area_km2 = max_area_km2

    def fetch(self, area: BoundingBox) -> list[BuildingFootprint]:
        """Footprints intersecting ``area`` (single request, size-capped)."""
        size = bbox_area_km2(area)
        if size > self.max_area_km2:
            raise OversizeAreaError(
                f"query area {size:.1f} km^2 exceeds {self.max_area_km2} km^2; "
                "use fetch_tiled for large areas"
            )
        if self.fixtures is not None:
            doc = self.fixtures.overpass_document()
        else:
            if self.limiter is not None:
                self.limiter.acquire()
            query = self.query_template.format(
                s=area.south, w=area.west, n=area.north, e=area.east
            )
            try:
                resp = self.session.post(
                    self.url,
                    data={"data": query},
                    headers={"User-Agent": USER_AGENT},
                    timeout=120,
                )
                resp.raise_for_status()
                doc = resp.json()
            except (requests.RequestException, ValueError) as exc:
                raise UpstreamError("overpass", str(exc)) from exc
        footprints = parse_overpass(doc)
        return [fp for fp in footprints if fp.bbox.intersects(area)]

    def fetch_tiled(self, area: BoundingBox) -> list[BuildingFootprint]:
        """Footprints for arbitrarily large areas via a grid of sub-queries."""
        cells = split_bbox(area, self.max_area_km2)
        seen: dict[str, BuildingFootprint] = {}
        for cell in cells:
            for fp in self.fetch(cell):
                seen.setdefault(fp.id, fp)
        return list(seen.values())


def bbox_area_km2(area: BoundingBox) -> float:
    return georef.geodesic_area(area.ring()) / 1e6


def split_bbox(area: BoundingBox, max_area_km2: float) -> list[BoundingBox]:
    """Split a box into a near-square grid of cells each <= the area cap."""
    total = bbox_area_km2(area)
    if total <= max_area_km2:
        return [area]
    # Aspect-aware cell counts from the metric extents.
    mid_lat = math.radians((area.south + area.north) / 2.0)
    height_km = (area.north - area.south) * 111.132
    width_km = (area.east - area.west) * 111.320 * math.cos(mid_lat)
    cells_needed = math.ceil(total / max_area_km2)
    rows = max(1, round(math.sqrt(cells_needed * height_km / max(width_km, 1e-9))))
    cols = math.ceil(cells_needed / rows)
    while rows * cols < cells_needed:
        cols += 1
    dlat = (area.north - area.south) / rows
    dlon = (area.east - area.west) / cols
    out = []
    for r in range(rows):
        for c in range(cols):
            out.append(
                BoundingBox(
                    south=area.south + r * dlat,
                    west=area.west + c * dlon,
                    north=area.south + (r + 1) * dlat,
                    east=area.west + (c + 1) * dlon,
                )
            )
    return out


def parse_overpass(doc: dict) -> list[BuildingFootprint]:
    """Overpass JSON -> footprints.

    Closed ways become one footprint each; multipolygon relations are
    split into one footprint per outer ring (inner rings dropped: rooftop
    detection works on the outer extent). Elements that fail the ring
    invariants are skipped with a warning so a city scan survives sloppy
    upstream geometry.
    """
    if not isinstance(doc, dict) or not isinstance(doc.get("elements"), list):
        raise MalformedResponseError("overpass response missing 'elements' list")
    nodes: dict[int, GeoPoint] = {}
    for el in doc["elements"]:
        if el.get("type") == "node" and "lat" in el and "lon" in el:
            nodes[el["id"]] = GeoPoint(lat=el["lat"], lon=el["lon"])

    out: list[BuildingFootprint] = []
    seen_ids: set[str] = set()
    for el in doc["elements"]:
        kind = el.get("type")
        if kind == "way":
            ring = _way_ring(el, nodes)
            if ring is None:
                continue
            _add_footprint(out, seen_ids, f"way/{el.get('id')}", ring)
        elif kind == "relation":
            members = el.get("members", [])
            outer_i = 0
            for member in members:
                if member.get("role") != "outer":
                    continue
                geom = member.get("geometry")
                if not geom:
                    continue
                ring = [GeoPoint(lat=g["lat"], lon=g["lon"]) for g in geom]
                _add_footprint(
                    out, seen_ids, f"relation/{el.get('id')}/{outer_i}", ring
                )
                outer_i += 1
    return out


def _way_ring(el: dict, nodes: dict[int, GeoPoint]) -> list[GeoPoint] | None:
    geom = el.get("geometry")
    if geom:
        try:
            return [GeoPoint(lat=g["lat"], lon=g["lon"]) for g in geom]
        except (KeyError, TypeError) as exc:
            raise MalformedResponseError(f"way {el.get('id')} geometry: {exc}") from exc
    refs = el.get("nodes")
    if not refs:
        return None
    missing = [r for r in refs if r not in nodes]
    if missing:
        log.warning("way %s references missing nodes %s; skipped", el.get("id"), missing[:3])
        return None
    return [nodes[r] for r in refs]


def _add_footprint(out, seen_ids, fid: str, ring: list[GeoPoint]) -> None:
    if ring and ring[0] != ring[-1]:
        ring = ring + [ring[0]]
    if fid in seen_ids:
        log.warning("duplicate footprint id %s; keeping first", fid)
        return
    try:
        fp = BuildingFootprint(id=fid, ring=tuple(ring))
    except ValueError as exc:
        log.warning("skipping invalid footprint %s: %s", fid, exc)
        return
    seen_ids.add(fid)
    out.append(fp)


def footprints_to_geojson(footprints: list[BuildingFootprint]) -> dict:
    """GeoJSON FeatureCollection, one Feature per footprint, sorted by id."""
    features = []
    for fp in sorted(footprints, key=lambda f: f.id):
        features.append(
            {
                "type": "Feature",
                "properties": {"osm_id": fp.id},
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[p.lon, p.lat] for p in fp.ring]],
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def serialize_geojson(doc: dict) -> str:
    """Canonical (byte-stable) GeoJSON encoding."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
