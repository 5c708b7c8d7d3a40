"""Generate pinned solar-position oracle cases (tests/fixtures/).

Twelve (site, time) pairs at moderate sun altitudes, with expected
altitude/azimuth from the independent NOAA equations in noaa_solar.py.
"""

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
import noaa_solar

CASES = [
    ("Zurich", 47.37, 8.54, "2020-06-21T09:00:00Z"),
    ("Zurich", 47.37, 8.54, "2020-12-21T11:30:00Z"),
    ("Oslo", 59.91, 10.75, "2023-03-20T10:00:00Z"),
    ("Orlando", 28.54, -81.38, "2022-07-04T20:00:00Z"),
    ("Sydney", -33.87, 151.21, "2021-01-15T04:00:00Z"),
    ("Nairobi", -1.29, 36.82, "2019-09-10T07:30:00Z"),
    ("Reykjavik", 64.15, -21.94, "2024-06-01T14:00:00Z"),
    ("Singapore", 1.35, 103.82, "2018-11-02T02:30:00Z"),
    ("La Paz", -16.5, -68.15, "2017-05-20T15:00:00Z"),
    ("Tokyo", 35.68, 139.69, "2025-04-08T01:00:00Z"),
    ("Cape Town", -33.92, 18.42, "2016-02-14T13:00:00Z"),
    ("Denver", 39.74, -104.99, "2030-08-30T21:00:00Z"),
]


def main() -> None:
    out = []
    for name, lat, lon, iso in CASES:
        t = datetime.strptime(iso, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)
        alt, az, zen = noaa_solar.solar_position(t, lat, lon)
        out.append(
            {
                "site": name,
                "lat": lat,
                "lon": lon,
                "time": iso,
                "altitude": round(alt, 4),
                "azimuth": round(az, 4),
            }
        )
        print(f"{name:12s} {iso}  alt={alt:8.3f}  az={az:8.3f}")
    dest = Path(__file__).parent.parent / "tests" / "fixtures" / "solar_position_cases.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()
