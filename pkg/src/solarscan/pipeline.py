"""End-to-end orchestration: footprint -> image -> mask -> detector ->
georeference -> inventory, for single buildings and whole areas.

Every upstream interaction goes through clients that honor the fixture
directory, so the complete pipeline runs offline against recorded data.
"""

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import requests
from shapely.geometry import Point as _ShapelyPoint
from shapely.geometry import Polygon as _ShapelyPolygon

from . import georef, pvmodel
from .config import Config
from .detection import DetectorConfig, filter_by_confidence, run_detector
from .errors import (
    EmptyInventoryError,
    NoBuildingError,
    PipelineStageError,
    SolarScanError,
    UpstreamError,
)
from .geodata import (
    DEFAULT_OVERPASS_QUERY,
    BuildingFootprint,
    FixtureStore,
    FootprintSource,
    Geocoder,
    TokenBucket,
)
from .geotypes import BoundingBox, GeoPoint
from .imagery import TileFetcher, fetch_anchored_image, render_building_mask
from .inventory import FILTER_ACCEPTED, PanelRecord, PanelStore

log = logging.getLogger(__name__)

NEAREST_BUILDING_MAX_M = 50.0

STAGE_FETCHING = "fetching"
STAGE_DETECTING = "detecting"
STAGE_GEOREFERENCING = "georeferencing"


@dataclass
class ScanOutcome:
    name: str
    area: BoundingBox
    total: int
    processed: int
    panels: int
    failures: list[dict] = field(default_factory=list)


class Pipeline:
    """Wires configuration and fixtures into the module operations."""

    def __init__(self, config: Config | None = None, fixtures_dir: str | Path | None = None):
        self.config = config or Config()
        self.fixtures = FixtureStore(fixtures_dir) if fixtures_dir else None
        limiter = TokenBucket(rate=float(self.config.get("rate_limit.requests_per_sec", 1.0)))
        session = requests.Session()
        self.geocoder = Geocoder(
            url=self.config.get("geocoder.url"),
            session=session,
            limiter=limiter,
            fixtures=self.fixtures,
        )
        self.footprints = FootprintSource(
            url=self.config.get("overpass.url"),
            query_template=self.config.get("overpass.query_template")
            or DEFAULT_OVERPASS_QUERY,
            session=session,
            limiter=limiter,
            fixtures=self.fixtures,
            max_area_km2=float(self.config.get("overpass.max_area_km2", 25.0)),
        )
        self.tiles = TileFetcher(
            url_template=self.config.get("tiles.url"),
            session=session,
            cache_dir=self.config.get("tiles.cache_dir"),
            fixtures_dir=self.fixtures.tiles_dir if self.fixtures else None,
            retries=int(self.config.get("imagery.retries", 3)),
            backoff=float(self.config.get("imagery.backoff", 0.5)),
            fanout=int(self.config.get("imagery.fanout", 8)),
            tile_size=int(self.config.get("tiles.size", 256)),
        )
        self.image_size = int(self.config.get("image.size", 1500))
        self.zoom = int(self.config.get("image.zoom", 21))
        self.storage_dir = Path(self.config.get("storage.dir", "./solarscan-data"))
        self._stores: dict[str, PanelStore] = {}
        self._stores_lock = threading.Lock()

    # -- detector ---------------------------------------------------------

    def detector_config(self) -> DetectorConfig:
        command = self.config.get("detector.command")
        if not command and self.fixtures and self.fixtures.detections_path:
            command = f"mock:{self.fixtures.detections_path}"
        if not command:
            raise SolarScanError(
                "no detector configured: set detector.command or provide fixtures"
            )
        return DetectorConfig(
            command=command,
            prompt=self.config.get("detector.prompt", "solar panel"),
            threshold=float(self.config.get("detector.threshold", 0.70)),
        )

    # -- stores -----------------------------------------------------------

    def store(self, name: str) -> PanelStore:
        # one instance per scan so its internal lock serializes writers
        with self._stores_lock:
            if name not in self._stores:
                self._stores[name] = PanelStore(self.storage_dir / "scans", name)
            return self._stores[name]

    # -- building-level pipeline -------------------------------------------

    def locate_building(self, location: GeoPoint) -> BuildingFootprint:
        """Footprint containing ``location`` or nearest within 50 m."""
        pad_lat = 100.0 / 111132.0
        pad_lon = 100.0 / (111320.0 * max(0.05, math.cos(math.radians(location.lat))))
        area = BoundingBox(
            south=location.lat - pad_lat,
            west=location.lon - pad_lon,
            north=location.lat + pad_lat,
            east=location.lon + pad_lon,
        )
        try:
            candidates = self.footprints.fetch(area)
        except SolarScanError as exc:
            raise PipelineStageError(STAGE_FETCHING, exc) from exc
        best = None
        best_d = math.inf
        for fp in candidates:
            d = _point_to_footprint_m(location, fp)
            if d < best_d:
                best, best_d = fp, d
        if best is None or best_d > NEAREST_BUILDING_MAX_M:
            raise NoBuildingError(
                f"no building within {NEAREST_BUILDING_MAX_M:.0f} m of "
                f"({location.lat}, {location.lon})"
            )
        return best

    def process_building(self, fp: BuildingFootprint) -> list[PanelRecord]:
        """Image -> mask -> detector -> threshold -> georeference for one building."""
        cfg = self.detector_config()
        try:
            img = fetch_anchored_image(fp, self.tiles, z=self.zoom, size=self.image_size)
            mask = render_building_mask(fp, img)
        except SolarScanError as exc:
            raise PipelineStageError(STAGE_FETCHING, exc) from exc
        except ValueError as exc:
            raise PipelineStageError(STAGE_FETCHING, SolarScanError(str(exc))) from exc
        try:
            ds = run_detector(img, mask, cfg)
            ds = filter_by_confidence(ds, cfg.threshold)
        except SolarScanError as exc:
            raise PipelineStageError(STAGE_DETECTING, exc) from exc
        try:
            paired = georef.georeference_paired(ds, img)
        except (SolarScanError, ValueError) as exc:
            raise PipelineStageError(STAGE_GEOREFERENCING, SolarScanError(str(exc))) from exc
        return [
            PanelRecord.from_polygon(
                polygon=poly,
                building_id=fp.id,
                detector_name=ds.detector_name,
                confidence=det.confidence,
            )
            for det, poly in paired
        ]

    def detect_building(self, location: GeoPoint, scan_name: str = "adhoc") -> list[PanelRecord]:
        """Full single-building pipeline; records are upserted into ``scan_name``."""
        fp = self.locate_building(location)
        records = self.process_building(fp)
        store = self.store(scan_name)
        store.upsert_panels(records)
        return records

    # -- area scans ---------------------------------------------------------

    def resolve_area(self, area: BoundingBox | None = None, place: str | None = None) -> BoundingBox:
        if area is not None:
            return area
        if not place:
            raise ValueError("either an area or a place name is required")
        return self.geocoder.geocode_area(place)

    def scan_area(
        self,
        area: BoundingBox | None = None,
        place: str | None = None,
        name: str = "scan",
        workers: int | None = None,
        on_state: Callable[[str], None] | None = None,
        on_progress: Callable[[int, int], None] | None = None,
    ) -> ScanOutcome:
        """Detect panels on every building in an area.

        Per-building failures are recorded and the scan continues; only
        area-resolution or footprint-fetch problems abort the scan.
        """
        notify = on_state or (lambda s: None)
        progress = on_progress or (lambda done, total: None)
        workers = workers or int(self.config.get("scan.workers", 4))

        notify(STAGE_FETCHING)
        try:
            bbox = self.resolve_area(area, place)
            footprints = sorted(self.footprints.fetch_tiled(bbox), key=lambda f: f.id)
        except SolarScanError as exc:
            raise PipelineStageError(STAGE_FETCHING, exc) from exc

        store = self.store(name)
        store.save_footprints(footprints)

        notify(STAGE_DETECTING)
        results: dict[str, list[PanelRecord]] = {}
        failures: list[dict] = []
        done = 0

        def run_one(fp: BuildingFootprint):
            return fp.id, self.process_building(fp)

        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            futures = {pool.submit(run_one, fp): fp for fp in footprints}
            for fut, fp in futures.items():
                try:
                    fid, records = fut.result()
                    results[fid] = records
                except PipelineStageError as exc:
                    failures.append(
                        {"building_id": fp.id, "stage": exc.stage, "error": str(exc.cause)}
                    )
                except Exception as exc:  # keep the scan alive, record everything
                    failures.append(
                        {"building_id": fp.id, "stage": STAGE_DETECTING, "error": str(exc)}
                    )
                done += 1
                progress(done, len(footprints))

        notify(STAGE_GEOREFERENCING)
        all_records = [rec for fid in sorted(results) for rec in results[fid]]
        store.upsert_panels(all_records)

        return ScanOutcome(
            name=name,
            area=bbox,
            total=len(footprints),
            processed=done,
            panels=len(all_records),
            failures=failures,
        )

    # -- profiles -----------------------------------------------------------

    def tmy_for(self, site: GeoPoint, tmy_file: str | Path | None = None) -> pvmodel.TmySeries:
        """TMY series for a site: explicit file > fixtures > cached fetch."""
        year = int(self.config.get("profile.year", 2023))
        path = tmy_file or self.config.get("tmy.file")
        if path:
            return pvmodel.load_tmy(path, year=year)
        if self.fixtures and self.fixtures.tmy_path:
            return pvmodel.load_tmy(self.fixtures.tmy_path, year=year)
        return pvmodel.load_tmy(self._fetch_tmy(site), year=year)

    def _fetch_tmy(self, site: GeoPoint) -> bytes:
        # cache key rounded to 0.05 deg: TMY grids are far coarser than that
        klat = round(site.lat / 0.05) * 0.05
        klon = round(site.lon / 0.05) * 0.05
        cache_dir = Path(self.config.get("tmy.cache_dir") or self.storage_dir / "tmy-cache")
        cache = cache_dir / f"tmy_{klat:.2f}_{klon:.2f}.csv"
        if cache.is_file():
            return cache.read_bytes()
        url = self.config.get("tmy.url").format(lat=site.lat, lon=site.lon)
        try:
            resp = requests.get(url, timeout=120)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise UpstreamError("tmy", str(exc)) from exc
        cache_dir.mkdir(parents=True, exist_ok=True)
        cache.write_bytes(resp.content)
        return resp.content

    def profile(
        self,
        site: GeoPoint,
        panel_area_m2: float | None = None,
        scan: str | None = None,
        tilt: float | None = None,
        azimuth: float | None = None,
        tmy_file: str | Path | None = None,
    ) -> pvmodel.PowerProfile:
        """Per-m² power profile scaled by an explicit area or a scan's inventory."""
        if panel_area_m2 is None and scan is None:
            raise ValueError("panel_area_m2 or scan is required")
        if panel_area_m2 is None:
            store = self.store(scan)
            records = store.records(FILTER_ACCEPTED)
            if not records:
                raise EmptyInventoryError(f"scan {scan!r} has no accepted panels to profile")
            panel_area_m2 = sum(r.polygon.area_m2 for r in records)
        overrides = {}
        if tilt is not None:
            overrides["tilt"] = tilt
        if azimuth is not None:
            overrides["azimuth"] = azimuth
        cfg = pvmodel.default_array_config(site, **overrides)
        tmy = self.tmy_for(site, tmy_file)
        per_m2 = pvmodel.power_profile(site, cfg, tmy)
        return pvmodel.scale_profile(per_m2, panel_area_m2)


def _point_to_footprint_m(location: GeoPoint, fp: BuildingFootprint) -> float:
    """Distance from point to footprint in meters (0 inside), local ENU."""
    lat0 = math.radians(location.lat)
    mx = 111320.0 * math.cos(lat0)
    my = 111132.0
    coords = [((p.lon - location.lon) * mx, (p.lat - location.lat) * my) for p in fp.ring]
    return _ShapelyPoint(0.0, 0.0).distance(_ShapelyPolygon(coords))
