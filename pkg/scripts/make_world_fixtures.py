"""Generate the offline replay world (fixtures/): a three-building toy
area near Bülach with recorded geocoder/Overpass responses, synthetic
aerial tiles, a scripted mock-detector sidecar, and independently
hand-computed expected panel areas (tests/fixtures/e2e_expected.json).

All geometry here is computed with self-contained published formulas
(meters-per-degree closed forms, spherical Web-Mercator), NOT with the
package, so the expected values act as an oracle for the pipeline.
"""

import json
import math
from pathlib import Path

from PIL import Image

ROOT = Path(__file__).parent.parent

ZOOM = 19
IMAGE_SIZE = 512
TILE_SIZE = 256

A = 6378137.0
E2 = 0.00669437999014

# id, center lat, center lon, width m (E-W), height m (N-S)
BUILDINGS = [
    (101, 47.5190, 8.5400, 20.0, 16.0),
    (102, 47.5195, 8.5408, 18.0, 12.0),
    (103, 47.5186, 8.5392, 24.0, 14.0),
]

# building id -> list of (confidence, x0, y0, x1, y1) pixel rects in the
# 512x512 window centered on the building centroid
SCRIPTED = {
    101: [(0.9, 216.0, 226.0, 286.0, 276.0), (0.5, 210.0, 280.0, 250.0, 295.0)],
    102: [(0.8, 230.0, 240.0, 280.0, 270.0)],
    103: [],
}

DETECTOR_THRESHOLD = 0.70  # pipeline default; panels below it never reach georef


def m_per_deg_lat(lat: float) -> float:
    phi = math.radians(lat)
    m = A * (1 - E2) / (1 - E2 * math.sin(phi) ** 2) ** 1.5
    return math.pi / 180.0 * m


def m_per_deg_lon(lat: float) -> float:
    phi = math.radians(lat)
    n = A / math.sqrt(1 - E2 * math.sin(phi) ** 2)
    return math.pi / 180.0 * n * math.cos(phi)


def world_px(lat: float, lon: float) -> tuple[float, float]:
    size = TILE_SIZE * (1 << ZOOM)
    x = (lon + 180.0) / 360.0 * size
    y = (1.0 - math.asinh(math.tan(math.radians(lat))) / math.pi) / 2.0 * size
    return x, y


def rect_ring(lat: float, lon: float, w_m: float, h_m: float):
    dlat = (h_m / 2.0) / m_per_deg_lat(lat)
    dlon = (w_m / 2.0) / m_per_deg_lon(lat)
    return [
        [lat - dlat, lon - dlon],
        [lat - dlat, lon + dlon],
        [lat + dlat, lon + dlon],
        [lat + dlat, lon - dlon],
        [lat - dlat, lon - dlon],
    ]


def pixel_rect_area_m2(lat_c: float, dx_px: float, dy_px: float) -> float:
    """Ellipsoidal area of a pixel-aligned rect mapped through the window."""
    phi = math.radians(lat_c)
    w = TILE_SIZE * (1 << ZOOM)
    m = A * (1 - E2) / (1 - E2 * math.sin(phi) ** 2) ** 1.5
    n = A / math.sqrt(1 - E2 * math.sin(phi) ** 2)
    return dx_px * dy_px * (2.0 * math.pi / w) ** 2 * math.cos(phi) ** 2 * m * n


def window_tiles(lat: float, lon: float) -> list[tuple[int, int]]:
    cx, cy = world_px(lat, lon)
    ox = round(cx) - IMAGE_SIZE // 2
    oy = round(cy) - IMAGE_SIZE // 2
    out = []
    for ty in range(oy // TILE_SIZE, (oy + IMAGE_SIZE - 1) // TILE_SIZE + 1):
        for tx in range(ox // TILE_SIZE, (ox + IMAGE_SIZE - 1) // TILE_SIZE + 1):
            out.append((tx, ty))
    return out


def main() -> None:
    fixtures = ROOT / "fixtures"
    fixtures.mkdir(exist_ok=True)

    # Overpass universe: ways with inline geometry
    elements = []
    all_corners = []
    for bid, lat, lon, w, h in BUILDINGS:
        ring = rect_ring(lat, lon, w, h)
        all_corners.extend(ring)
        elements.append(
            {
                "type": "way",
                "id": bid,
                "tags": {"building": "yes"},
                "bounds": {
                    "minlat": min(p[0] for p in ring),
                    "minlon": min(p[1] for p in ring),
                    "maxlat": max(p[0] for p in ring),
                    "maxlon": max(p[1] for p in ring),
                },
                "geometry": [{"lat": p[0], "lon": p[1]} for p in ring],
            }
        )
    overpass_dir = fixtures / "overpass"
    overpass_dir.mkdir(exist_ok=True)
    (overpass_dir / "bulach_toy.json").write_text(
        json.dumps(
            {"version": 0.6, "generator": "recorded", "elements": elements}, indent=1
        )
        + "\n",
        encoding="utf-8",
    )

    # Geocoder recordings
    south = min(p[0] for p in all_corners) - 0.0008
    north = max(p[0] for p in all_corners) + 0.0008
    west = min(p[1] for p in all_corners) - 0.0008
    east = max(p[1] for p in all_corners) + 0.0008
    lat_c = (south + north) / 2.0
    lon_c = (west + east) / 2.0
    geocode = {
        "Bülach": [
            {
                "lat": f"{lat_c:.7f}",
                "lon": f"{lon_c:.7f}",
                "boundingbox": [f"{south:.7f}", f"{north:.7f}", f"{west:.7f}", f"{east:.7f}"],
                "display_name": "Bülach, Zürich, Schweiz (recorded)",
                "importance": 0.62,
            }
        ],
        "Berg am Irchel": [
            {
                "lat": "47.5686000",
                "lon": "8.5995000",
                "boundingbox": ["47.5586000", "47.5786000", "8.5895000", "8.6095000"],
                "display_name": "Berg am Irchel, Zürich, Schweiz (recorded)",
                "importance": 0.41,
            }
        ],
    }
    (fixtures / "geocode.json").write_text(
        json.dumps(geocode, ensure_ascii=False, indent=1) + "\n", encoding="utf-8"
    )

    # Mock detector sidecar
    sidecar = {}
    for bid, lat, lon, w, h in BUILDINGS:
        dets = []
        for conf, x0, y0, x1, y1 in SCRIPTED[bid]:
            dets.append(
                {
                    "confidence": conf,
                    "polygon": [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]],
                }
            )
        sidecar[f"way/{bid}"] = {
            "image": {"width": IMAGE_SIZE, "height": IMAGE_SIZE},
            "detector": "mock-fixture",
            "detections": dets,
        }
    (fixtures / "detections.json").write_text(
        json.dumps(sidecar, indent=1) + "\n", encoding="utf-8"
    )

    # Synthetic aerial tiles for every building window
    tiles_by_building = {}
    union = set()
    for bid, lat, lon, w, h in BUILDINGS:
        tiles = window_tiles(lat, lon)
        tiles_by_building[f"way/{bid}"] = tiles
        union.update(tiles)
    tiles_dir = fixtures / "tiles" / str(ZOOM)
    for tx, ty in sorted(union):
        color = (188, 203, 218) if (tx + ty) % 2 == 0 else (207, 195, 178)
        p = tiles_dir / str(tx) / f"{ty}.png"
        p.parent.mkdir(parents=True, exist_ok=True)
        Image.new("RGB", (TILE_SIZE, TILE_SIZE), color).save(p)
    print(f"wrote {len(union)} tiles under {tiles_dir}")

    # Independently computed expectations for the end-to-end tests
    expected_panels = []
    for bid, lat, lon, w, h in BUILDINGS:
        for conf, x0, y0, x1, y1 in SCRIPTED[bid]:
            if conf >= DETECTOR_THRESHOLD:
                expected_panels.append(
                    {
                        "building_id": f"way/{bid}",
                        "confidence": conf,
                        "area_m2": pixel_rect_area_m2(lat, x1 - x0, y1 - y0),
                    }
                )
    expected = {
        "zoom": ZOOM,
        "image_size": IMAGE_SIZE,
        "place": "Bülach",
        "bbox": [south, west, north, east],
        "buildings": [f"way/{b[0]}" for b in BUILDINGS],
        "open_field": [47.5170, 8.5360],
        "panels": expected_panels,
        "tiles_by_building": {k: sorted(v) for k, v in tiles_by_building.items()},
    }
    dest = ROOT / "tests" / "fixtures" / "e2e_expected.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(expected, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")
    for p in expected_panels:
        print(f"expected panel {p['building_id']} conf={p['confidence']}: {p['area_m2']:.3f} m^2")
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()
