"""Basic WGS84 geometry types used throughout the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate pair in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned WGS84 box. Antimeridian-crossing boxes are rejected."""

    south: float
    west: float
    north: float
    east: float

    def __post_init__(self):
        GeoPoint(self.south, self.west)
        GeoPoint(self.north, self.east)
        if not self.south < self.north:
            raise ValueError(f"south {self.south} must be < north {self.north}")
        if not self.west < self.east:
            raise ValueError(f"west {self.west} must be < east {self.east}")

    def contains(self, p: GeoPoint) -> bool:
        return self.south <= p.lat <= self.north and self.west <= p.lon <= self.east

    def intersects(self, other: "BoundingBox") -> bool:
        return not (
            other.north < self.south
            or other.south > self.north
            or other.east < self.west
            or other.west > self.east
        )

    def ring(self) -> list[GeoPoint]:
        """Closed counterclockwise corner ring (SW, SE, NE, NW, SW)."""
        return [
            GeoPoint(self.south, self.west),
            GeoPoint(self.south, self.east),
            GeoPoint(self.north, self.east),
            GeoPoint(self.north, self.west),
            GeoPoint(self.south, self.west),
        ]

    @staticmethod
    def around(points: list[GeoPoint]) -> "BoundingBox":
        """Smallest box containing every point."""
        if not points:
            raise ValueError("no points")
        lats = [p.lat for p in points]
        lons = [p.lon for p in points]
        return BoundingBox(min(lats), min(lons), max(lats), max(lons))
