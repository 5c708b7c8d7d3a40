"""Generate curated city inventory fixtures (fixtures/artifacts/).

Two GeoJSON FeatureCollections with known panel counts and total areas,
used by the summary-statistics replay tests:

- bulach_cleaned.geojson:  507 panels, 18,947.17 m^2 total
- berg_cleaned.geojson:     14 panels,    956.29 m^2 total

Panels are rectangles laid out on a grid, sized with the closed-form
meters-per-degree expressions (independent of the package's area code) so
each feature's geodesic area is its target value to ~1e-9 relative.
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).parent.parent

A = 6378137.0
E2 = 0.00669437999014

CITIES = [
    ("bulach_cleaned.geojson", 47.5210, 8.5390, 507, 18947.17),
    ("berg_cleaned.geojson", 47.5686, 8.5995, 14, 956.29),
]


def m_per_deg(lat: float) -> tuple[float, float]:
    phi = math.radians(lat)
    m = A * (1 - E2) / (1 - E2 * math.sin(phi) ** 2) ** 1.5
    n = A / math.sqrt(1 - E2 * math.sin(phi) ** 2)
    return math.pi / 180.0 * m, math.pi / 180.0 * n * math.cos(phi)


def main() -> None:
    dest_dir = ROOT / "fixtures" / "artifacts"
    dest_dir.mkdir(parents=True, exist_ok=True)
    for filename, lat0, lon0, count, total_m2 in CITIES:
        rng = random.Random(count)
        per_panel = total_m2 / count
        cols = math.ceil(math.sqrt(count))
        features = []
        for i in range(count):
            r, c = divmod(i, cols)
            lat_c = lat0 + r * 0.00045
            lon_c = lon0 + c * 0.00062
            mlat, mlon = m_per_deg(lat_c)
            width = rng.uniform(0.6, 1.6) * math.sqrt(per_panel)
            height = per_panel / width
            dlat = (height / 2.0) / mlat
            dlon = (width / 2.0) / mlon
            ring = [
                [lon_c - dlon, lat_c - dlat],
                [lon_c + dlon, lat_c - dlat],
                [lon_c + dlon, lat_c + dlat],
                [lon_c - dlon, lat_c + dlat],
                [lon_c - dlon, lat_c - dlat],
            ]
            features.append(
                {
                    "type": "Feature",
                    "properties": {"confidence": round(rng.uniform(0.70, 0.99), 3)},
                    "geometry": {"type": "Polygon", "coordinates": [ring]},
                }
            )
        doc = {"type": "FeatureCollection", "features": features}
        path = dest_dir / filename
        path.write_text(json.dumps(doc) + "\n", encoding="utf-8")
        print(f"wrote {path}: {count} panels targeting {total_m2} m^2")


if __name__ == "__main__":
    main()
