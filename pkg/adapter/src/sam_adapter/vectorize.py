"""Binary masks to pixel polygons: marching squares + Douglas-Peucker."""

import numpy as np
from shapely.geometry import Polygon as _ShapelyPolygon
from skimage import measure

SIMPLIFY_TOLERANCE_PX = 1.5


def mask_to_polygons(mask: np.ndarray, min_region_pixels: int) -> list[np.ndarray]:
    """One closed (N, 2) [x, y] polygon per connected component.

    The largest marching-squares contour of each component is simplified
    at sub-pixel tolerance; components below ``min_region_pixels`` or with
    degenerate outlines are skipped. Falls back to the component bounding
    box if simplification breaks ring validity.
    """
    labeled = measure.label(mask, connectivity=2)
    polygons = []
    for region in measure.regionprops(labeled):
        if region.area < min_region_pixels:
            continue
        component = labeled == region.label
        padded = np.pad(component, 1).astype(float)
        contours = measure.find_contours(padded, 0.5)
        if not contours:
            continue
        contour = max(contours, key=len)
        simplified = measure.approximate_polygon(contour, tolerance=SIMPLIFY_TOLERANCE_PX)
        if len(simplified) < 4:
            continue
        # find_contours yields (row, col) in padded coordinates
        xy = np.column_stack([simplified[:, 1] - 1.0, simplified[:, 0] - 1.0])
        xy[:, 0] = np.clip(xy[:, 0], 0.0, mask.shape[1] - 1.0)
        xy[:, 1] = np.clip(xy[:, 1], 0.0, mask.shape[0] - 1.0)
        if not np.array_equal(xy[0], xy[-1]):
            xy = np.vstack([xy, xy[:1]])
        if not _is_simple(xy):
            xy = _bbox_polygon(region, mask.shape)
        polygons.append(xy)
    return polygons


def _is_simple(xy: np.ndarray) -> bool:
    try:
        poly = _ShapelyPolygon(xy)
        return bool(poly.is_valid and poly.area > 0)
    except Exception:
        return False


def _bbox_polygon(region, shape) -> np.ndarray:
    r0, c0, r1, c1 = region.bbox
    x0, y0 = float(c0), float(r0)
    x1 = min(float(c1) - 1.0, shape[1] - 1.0)
    y1 = min(float(r1) - 1.0, shape[0] - 1.0)
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])
