"""Freeze ellipsoidal-area oracle values (tests/fixtures/geodesic_oracle.json).

For lat/lon-aligned rectangles the WGS84 surface area is the exact double
integral of M(phi)*N(phi)*cos(phi); evaluated here with mpmath at 30
significant digits, independent of the package's area algorithm.
"""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30
A = mp.mpf("6378137.0")
E2 = mp.mpf("0.00669437999014")

RECTS = [
    # south, west, north, east (degrees)
    ("equator_small_square", 0.0, 0.0, 0.0001, 0.0001),
    ("lat47_small_square", 47.0, 8.0, 47.0001, 8.0001),
    ("lat70_small_square", 70.0, 20.0, 70.0001, 20.0001),
    ("lat47_km_square", 47.5, 8.5, 47.509, 8.51335),
    ("city_box", 47.50, 8.50, 47.55, 8.58),
]


def rect_area(south, west, north, east) -> mp.mpf:
    def integrand(phi):
        s2 = mp.sin(phi) ** 2
        m = A * (1 - E2) / (1 - E2 * s2) ** mp.mpf("1.5")
        n = A / mp.sqrt(1 - E2 * s2)
        return m * n * mp.cos(phi)

    dlam = (mp.mpf(str(east)) - mp.mpf(str(west))) * mp.pi / 180
    s = mp.mpf(str(south)) * mp.pi / 180
    n = mp.mpf(str(north)) * mp.pi / 180
    return mp.quad(integrand, [s, n]) * dlam


def main() -> None:
    out = []
    for name, s, w, n, e in RECTS:
        area = rect_area(s, w, n, e)
        out.append(
            {"name": name, "south": s, "west": w, "north": n, "east": e,
             "area_m2": float(area)}
        )
        print(f"{name:22s} {float(area):.6f} m^2")
    dest = Path(__file__).parent.parent / "tests" / "fixtures" / "geodesic_oracle.json"
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {dest}")


if __name__ == "__main__":
    main()
