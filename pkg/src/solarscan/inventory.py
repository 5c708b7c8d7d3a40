"""Panel inventory: GeoJSON-backed record store, curation, and summaries.

Each named scan persists as one GeoJSON FeatureCollection plus an
append-only curation decision log next to it (``<scan>.geojson`` /
``<scan>.decisions.log``). No database: the deliverable is open GeoJSON
artifacts that diff cleanly and replay deterministically.
"""

import hashlib
import json
import logging
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from shapely.geometry import Polygon as _ShapelyPolygon
from shapely.geometry import box as _shapely_box

from .errors import MalformedResponseError
from .geodata import BuildingFootprint
from .georef import GeoPolygon, geodesic_area
from .geotypes import BoundingBox, GeoPoint

log = logging.getLogger(__name__)

STATUS_DETECTED = "detected"
STATUS_ACCEPTED = "accepted"
STATUS_REJECTED = "rejected"
STATUSES = (STATUS_DETECTED, STATUS_ACCEPTED, STATUS_REJECTED)

# Filters: "all" is every record; "accepted" is everything not rejected
# (the publishable set); "rejected"/"detected" match the status exactly.
FILTER_ALL = "all"
FILTER_ACCEPTED = "accepted"
FILTER_REJECTED = "rejected"
FILTER_DETECTED = "detected"

# Vertices are rounded to 1e-7 deg (~1 cm) before hashing, so re-detections
# of the same geometry collapse to one record.
ID_ROUND_DECIMALS = 7


def panel_id(ring) -> str:
    """Deterministic id from the rounded vertex list."""
    rounded = [
        [round(p.lat, ID_ROUND_DECIMALS), round(p.lon, ID_ROUND_DECIMALS)] for p in ring
    ]
    digest = hashlib.sha1(json.dumps(rounded).encode("ascii")).hexdigest()
    return digest[:16]


@dataclass(frozen=True)
class PanelRecord:
    id: str
    polygon: GeoPolygon
    building_id: str
    detector_name: str
    confidence: float
    status: str
    detected_at: datetime

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @classmethod
    def from_polygon(
        cls,
        polygon: GeoPolygon,
        building_id: str,
        detector_name: str,
        confidence: float,
        detected_at: datetime | None = None,
    ) -> "PanelRecord":
        return cls(
            id=panel_id(polygon.ring),
            polygon=polygon,
            building_id=building_id,
            detector_name=detector_name,
            confidence=confidence,
            status=STATUS_DETECTED,
            detected_at=detected_at or datetime.now(timezone.utc),
        )


@dataclass(frozen=True)
class InventorySummary:
    status_filter: str
    total_area_m2: float
    n_buildings: int
    building_area_m2: float
    n_panels: int
    panel_area_m2: float
    n_osm_labeled: int | None = None
    osm_labeled_area_m2: float | None = None


class PanelStore:
    """Single-writer, id-keyed panel store for one named scan."""

    def __init__(self, directory: str | Path, name: str):
        self.dir = Path(directory)
        self.name = name
        self.path = self.dir / f"{name}.geojson"
        self.decisions_path = self.dir / f"{name}.decisions.log"
        self.footprints_path = self.dir / f"{name}.footprints.geojson"
        self._records: dict[str, PanelRecord] = {}
        self._lock = threading.Lock()
        if self.path.is_file():
            for rec in ingest_geojson(json.loads(self.path.read_text(encoding="utf-8"))):
                self._records[rec.id] = rec

    def __len__(self) -> int:
        return len(self._records)

    def records(self, status_filter: str = FILTER_ALL) -> list[PanelRecord]:
        return sorted(
            (r for r in self._records.values() if _matches(r, status_filter)),
            key=lambda r: r.id,
        )

    def get(self, rec_id: str) -> PanelRecord | None:
        return self._records.get(rec_id)

    def upsert_panels(self, records: list[PanelRecord]) -> int:
        """Insert or update by id; identical re-detections are no-ops.

        ``detected_at`` records first sight and is preserved when nothing
        else changed, so repeating a scan leaves the store byte-identical.
        """
        changed = 0
        with self._lock:
            for rec in records:
                old = self._records.get(rec.id)
                if old is None:
                    self._records[rec.id] = rec
                    changed += 1
                    continue
                same = (
                    old.polygon == rec.polygon
                    and old.confidence == rec.confidence
                    and old.detector_name == rec.detector_name
                    and old.building_id == rec.building_id
                )
                if same:
                    continue
                self._records[rec.id] = replace(rec, status=old.status)
                changed += 1
            self._persist()
        return changed

    def apply_curation(
        self, decisions: list[tuple[str, str]], operator: str = "anonymous"
    ) -> tuple[int, list[str]]:
        """Apply (panel_id, accepted|rejected) decisions; last write wins.

        Unknown ids are reported back while the rest still apply. Rejected
        records stay in the store for audit. Every applied decision is
        appended to the decision log before the store file is rewritten.
        """
        applied = 0
        unknown = []
        lines = []
        with self._lock:
            for rec_id, status in decisions:
                if status not in (STATUS_ACCEPTED, STATUS_REJECTED):
                    raise ValueError(f"curation status must be accepted|rejected, got {status!r}")
                rec = self._records.get(rec_id)
                if rec is None:
                    unknown.append(rec_id)
                    continue
                self._records[rec_id] = replace(rec, status=status)
                stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
                lines.append(f"{stamp} {rec_id} {status} {operator}\n")
                applied += 1
            if lines:
                self.dir.mkdir(parents=True, exist_ok=True)
                with open(self.decisions_path, "a", encoding="utf-8") as fh:
                    fh.writelines(lines)
            self._persist()
        return applied, unknown

    def decision_log(self) -> str:
        if self.decisions_path.is_file():
            return self.decisions_path.read_text(encoding="utf-8")
        return ""

    def save_footprints(self, footprints: list[BuildingFootprint]) -> None:
        from .geodata import footprints_to_geojson, serialize_geojson

        self.dir.mkdir(parents=True, exist_ok=True)
        self.footprints_path.write_text(
            serialize_geojson(footprints_to_geojson(footprints)), encoding="utf-8"
        )

    def load_footprints(self) -> list[BuildingFootprint]:
        if not self.footprints_path.is_file():
            return []
        doc = json.loads(self.footprints_path.read_text(encoding="utf-8"))
        out = []
        for feat in doc.get("features", []):
            ring = [
                GeoPoint(lat=c[1], lon=c[0])
                for c in feat["geometry"]["coordinates"][0]
            ]
            out.append(
                BuildingFootprint(
                    id=feat["properties"]["osm_id"], ring=tuple(ring)
                )
            )
        return out

    def to_geojson(self, status_filter: str = FILTER_ALL) -> dict:
        return {
            "type": "FeatureCollection",
            "features": [_record_to_feature(r) for r in self.records(status_filter)],
        }

    def serialize(self) -> str:
        return json.dumps(self.to_geojson(), sort_keys=True, separators=(",", ":")) + "\n"

    def _persist(self) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        self.path.write_text(self.serialize(), encoding="utf-8")

    def summarize(
        self,
        area: BoundingBox,
        status_filter: str = FILTER_ACCEPTED,
        osm_labels: list[GeoPolygon] | None = None,
    ) -> InventorySummary:
        """Counts and geodesic-area sums over records intersecting ``area``.

        Building stats come from the footprints cached at scan time (zero
        when the store was ingested from an external artifact). OSM-labeled
        panels, when provided, are reported separately and never merged.
        """
        query = _shapely_box(area.west, area.south, area.east, area.north)
        n_panels = 0
        panel_area = 0.0
        for rec in self.records(status_filter):
            poly = _ShapelyPolygon([(p.lon, p.lat) for p in rec.polygon.ring])
            if query.intersects(poly):
                n_panels += 1
                panel_area += rec.polygon.area_m2

        n_buildings = 0
        building_area = 0.0
        for fp in self.load_footprints():
            poly = _ShapelyPolygon([(p.lon, p.lat) for p in fp.ring])
            if query.intersects(poly):
                n_buildings += 1
                building_area += geodesic_area(list(fp.ring))

        n_osm = None
        osm_area = None
        if osm_labels is not None:
            n_osm = 0
            osm_area = 0.0
            for gp in osm_labels:
                poly = _ShapelyPolygon([(p.lon, p.lat) for p in gp.ring])
                if query.intersects(poly):
                    n_osm += 1
                    osm_area += gp.area_m2

        return InventorySummary(
            status_filter=status_filter,
            total_area_m2=geodesic_area(area.ring()),
            n_buildings=n_buildings,
            building_area_m2=building_area,
            n_panels=n_panels,
            panel_area_m2=panel_area,
            n_osm_labeled=n_osm,
            osm_labeled_area_m2=osm_area,
        )


def _matches(rec: PanelRecord, status_filter: str) -> bool:
    if status_filter == FILTER_ALL:
        return True
    if status_filter == FILTER_ACCEPTED:
        return rec.status != STATUS_REJECTED
    if status_filter == FILTER_REJECTED:
        return rec.status == STATUS_REJECTED
    if status_filter == FILTER_DETECTED:
        return rec.status == STATUS_DETECTED
    raise ValueError(f"unknown status filter {status_filter!r}")


def _record_to_feature(rec: PanelRecord) -> dict:
    return {
        "type": "Feature",
        "properties": {
            "panel_id": rec.id,
            "building_id": rec.building_id,
            "detector": rec.detector_name,
            "confidence": rec.confidence,
            "status": rec.status,
            "area_m2": rec.polygon.area_m2,
            "detected_at": rec.detected_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
        },
        "geometry": {
            "type": "Polygon",
            "coordinates": [[[p.lon, p.lat] for p in rec.polygon.ring]],
        },
    }


def ingest_geojson(doc: dict) -> list[PanelRecord]:
    """Load panel records from a FeatureCollection.

    Understands both this package's own serialization and plain external
    artifacts (bare polygons): missing properties default to status
    ``detected``, confidence 1.0, and areas recomputed geodesically.
    """
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise MalformedResponseError("not a GeoJSON FeatureCollection")
    out = []
    for i, feat in enumerate(doc.get("features", [])):
        geom = feat.get("geometry") or {}
        if geom.get("type") != "Polygon":
            log.warning("feature %d: skipping non-Polygon geometry", i)
            continue
        try:
            ring = [GeoPoint(lat=c[1], lon=c[0]) for c in geom["coordinates"][0]]
            poly = GeoPolygon.from_ring(ring)
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            log.warning("feature %d: skipping invalid polygon (%s)", i, exc)
            continue
        props = feat.get("properties") or {}
        detected_at = datetime.now(timezone.utc)
        if "detected_at" in props:
            try:
                detected_at = datetime.strptime(
                    props["detected_at"], "%Y-%m-%dT%H:%M:%SZ"
                ).replace(tzinfo=timezone.utc)
            except ValueError:
                pass
        status = props.get("status", STATUS_DETECTED)
        if status not in STATUSES:
            status = STATUS_DETECTED
        out.append(
            PanelRecord(
                id=props.get("panel_id") or panel_id(poly.ring),
                polygon=poly,
                building_id=str(props.get("building_id", "")),
                detector_name=str(props.get("detector", "unknown")),
                confidence=float(props.get("confidence", 1.0)),
                status=status,
                detected_at=detected_at,
            )
        )
    return out


def load_store(directory: str | Path, name: str) -> PanelStore:
    return PanelStore(directory, name)
