"""Walkthrough: how pixel coordinates become WGS84 polygons with areas.

An anchored image knows the geographic position of its two corner pixel
centers; everything in between is linear interpolation. Run from the repo
root:

    python demos/georeference_walkthrough.py
"""

import numpy as np

from solarscan.geotypes import GeoPoint
from solarscan.georef import GeoPolygon, geo_to_pixel, geodesic_area, pixel_to_geo
from solarscan.imagery import AnchoredImage

# A 1001x1001 window over ~1.1 km near lat 47 N. The NW anchor is the
# center of pixel (0,0); the SE anchor the center of pixel (1000,1000).
img = AnchoredImage(
    width=1001,
    height=1001,
    pixel_data=np.zeros((1001, 1001, 3), dtype=np.uint8),
    anchor_nw=GeoPoint(47.0, 8.0),
    anchor_se=GeoPoint(46.99, 8.01),
    building_id="demo",
)

print("anchors:")
print("  NW pixel (0,0)      ->", pixel_to_geo((0, 0), img))
print("  SE pixel (1000,1000) ->", pixel_to_geo((1000, 1000), img))

print("\ninterpolation is linear, so the window midpoint is the coordinate mean:")
print("  pixel (500,500) ->", pixel_to_geo((500, 500), img))

print("\nand it inverts cleanly (round trip stays within half a pixel):")
g = pixel_to_geo((123.4, 987.6), img)
print("  pixel (123.4, 987.6) ->", g, "->", geo_to_pixel(g, img))

# Map a square detection and measure it on the WGS84 ellipsoid.
square_px = [(100, 100), (200, 100), (200, 200), (100, 200), (100, 100)]
ring = [pixel_to_geo(p, img) for p in square_px]
poly = GeoPolygon.from_ring(ring)
print("\na 100x100 px square maps to a quadrilateral of",
      f"{poly.area_m2:,.2f} m^2 on the ellipsoid")

# Areas are orientation-independent and latitude-aware.
eq = [
    GeoPoint(0.0, 0.0), GeoPoint(0.0, 0.0001),
    GeoPoint(0.0001, 0.0001), GeoPoint(0.0001, 0.0), GeoPoint(0.0, 0.0),
]
print("\nthe same 0.0001-degree square shrinks with latitude:")
print(f"  at the equator: {geodesic_area(eq):8.2f} m^2")
at47 = [GeoPoint(p.lat + 47.0, p.lon + 8.0) for p in eq]
print(f"  at 47 N:        {geodesic_area(at47):8.2f} m^2  (~cos 47 in the E-W extent)")
print(f"  reversed ring:  {geodesic_area(list(reversed(at47))):8.2f} m^2 (unchanged)")
