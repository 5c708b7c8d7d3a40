"""solarscan: rooftop solar panel detection from open aerial imagery and
conversion of detected panel area into hourly solar power profiles."""

__version__ = "0.1.0"

from .geotypes import BoundingBox, GeoPoint
from .georef import GeoPolygon, geodesic_area, geo_to_pixel, pixel_to_geo
from .geodata import BuildingFootprint, FixtureStore, FootprintSource, Geocoder
from .imagery import AnchoredImage, BuildingMask, TileAddress, TileFetcher
from .detection import Detection, DetectionSet, DetectorConfig, PixelPolygon
from .inventory import InventorySummary, PanelRecord, PanelStore
from .pvmodel import (
    ArrayConfig,
    PowerProfile,
    SolarPosition,
    TmyRecord,
    TmySeries,
    air_mass,
    power_profile,
    solar_position,
)
from .pipeline import Pipeline

__all__ = [
    "AnchoredImage",
    "ArrayConfig",
    "BoundingBox",
    "BuildingFootprint",
    "BuildingMask",
    "Detection",
    "DetectionSet",
    "DetectorConfig",
    "FixtureStore",
    "FootprintSource",
    "GeoPoint",
    "GeoPolygon",
    "Geocoder",
    "InventorySummary",
    "PanelRecord",
    "PanelStore",
    "Pipeline",
    "PixelPolygon",
    "PowerProfile",
    "SolarPosition",
    "TileAddress",
    "TileFetcher",
    "TmyRecord",
    "TmySeries",
    "air_mass",
    "geo_to_pixel",
    "geodesic_area",
    "pixel_to_geo",
    "power_profile",
    "solar_position",
]
