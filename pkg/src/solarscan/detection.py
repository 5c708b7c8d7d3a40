"""Detector contract: the mask-exchange document, confidence filtering,
and the two registered backends (external-process adapter and scripted mock).

The exchange document is one UTF-8 JSON object per image::

    {"image": {"width": W, "height": H},
     "detector": "name",
     "detections": [{"confidence": 0.9, "polygon": [[x, y], ...]}, ...]}

Adapters are ordinary executables: the core writes the stitched image as
PNG to a temp path, invokes ``<command> <image-path> <prompt>``, and reads
one document from stdout. A nonzero exit is a backend failure. The mock
backend reads a sidecar JSON file mapping building ids to scripted
documents, so the full pipeline runs without any ML stack.
"""

import json
import logging
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw
from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import DetectorBackendError, ExchangeFormatError
from .imagery import AnchoredImage, BuildingMask

log = logging.getLogger(__name__)

DEFAULT_PROMPT = "solar panel"
DEFAULT_THRESHOLD = 0.70
# A detection is kept iff at least this fraction of its pixel area
# overlaps the building mask.
MASK_OVERLAP_KEEP = 0.5


@dataclass(frozen=True)
class PixelPolygon:
    """Closed simple ring in image pixel coordinates."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.vertices) < 4:
            raise ValueError(f"pixel polygon needs >= 4 vertices, got {len(self.vertices)}")
        if self.vertices[0] != self.vertices[-1]:
            raise ValueError("pixel polygon must be closed (first == last)")
        try:
            simple = _ShapelyPolygon(self.vertices).is_valid
        except Exception:
            simple = False
        if not simple:
            raise ValueError("pixel polygon is not a simple ring")

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


@dataclass(frozen=True)
class Detection:
    confidence: float
    region: PixelPolygon

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class DetectionSet:
    image_width: int
    image_height: int
    detector_name: str
    detections: tuple[Detection, ...]

    def __post_init__(self):
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("image dimensions must be positive")
        for i, det in enumerate(self.detections):
            for j, (x, y) in enumerate(det.region.vertices):
                if not (0 <= x < self.image_width and 0 <= y < self.image_height):
                    raise ValueError(
                        f"detection {i} vertex {j} ({x}, {y}) outside "
                        f"{self.image_width}x{self.image_height}"
                    )


@dataclass(frozen=True)
class DetectorConfig:
    """Backend selection: ``mock:<sidecar.json>`` or an adapter command line."""

    command: str
    prompt: str = DEFAULT_PROMPT
    threshold: float = DEFAULT_THRESHOLD
    timeout_s: float = 600.0

    def __post_init__(self):
        if not self.command:
            raise ValueError("detector command must be configured")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [0, 1]")


def parse_detection_document(doc) -> DetectionSet:
    """Validate and convert an exchange document (dict, str, or bytes).

    Raises ExchangeFormatError naming the offending field path. Open
    polygon rings are closed automatically; everything else is strict.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ExchangeFormatError("$", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ExchangeFormatError("$", "document must be a JSON object")

    image = doc.get("image")
    if not isinstance(image, dict):
        raise ExchangeFormatError("image", "missing or not an object")
    width = _require_positive_int(image.get("width"), "image.width")
    height = _require_positive_int(image.get("height"), "image.height")

    detector = doc.get("detector")
    if not isinstance(detector, str) or not detector:
        raise ExchangeFormatError("detector", "missing or not a non-empty string")

    raw = doc.get("detections")
    if not isinstance(raw, list):
        raise ExchangeFormatError("detections", "missing or not a list")

    detections = []
    for i, entry in enumerate(raw):
        base = f"detections[{i}]"
        if not isinstance(entry, dict):
            raise ExchangeFormatError(base, "not an object")
        conf = entry.get("confidence")
        if not isinstance(conf, (int, float)) or isinstance(conf, bool):
            raise ExchangeFormatError(f"{base}.confidence", "not a number")
        if not 0.0 <= conf <= 1.0:
            raise ExchangeFormatError(f"{base}.confidence", f"{conf} outside [0, 1]")
        poly = entry.get("polygon")
        if not isinstance(poly, list) or len(poly) < 3:
            raise ExchangeFormatError(f"{base}.polygon", "not a list of >= 3 vertices")
        verts = []
        for j, pair in enumerate(poly):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
            ):
                raise ExchangeFormatError(f"{base}.polygon[{j}]", "not an [x, y] pair")
            x, y = float(pair[0]), float(pair[1])
            if not (0 <= x < width and 0 <= y < height):
                raise ExchangeFormatError(
                    f"{base}.polygon[{j}]", f"({x}, {y}) outside {width}x{height}"
                )
            verts.append((x, y))
        if verts[0] != verts[-1]:
            verts.append(verts[0])
        try:
            region = PixelPolygon(vertices=tuple(verts))
            detections.append(Detection(confidence=float(conf), region=region))
        except ValueError as exc:
            raise ExchangeFormatError(f"{base}.polygon", str(exc)) from exc

    return DetectionSet(
        image_width=width,
        image_height=height,
        detector_name=detector,
        detections=tuple(detections),
    )


def serialize_detection_document(ds: DetectionSet) -> dict:
    return {
        "image": {"width": ds.image_width, "height": ds.image_height},
        "detector": ds.detector_name,
        "detections": [
            {
                "confidence": det.confidence,
                "polygon": [[x, y] for x, y in det.region.vertices],
            }
            for det in ds.detections
        ],
    }


def _require_positive_int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
        raise ExchangeFormatError(path, "not a positive integer")
    return value


def run_detector(
    img: AnchoredImage, mask: BuildingMask, cfg: DetectorConfig
) -> DetectionSet:
    """Run the configured backend on one image and crop to the building.

    Detections with less than ``MASK_OVERLAP_KEEP`` of their pixel area
    inside the building mask are dropped (straddling detections belong to
    whichever building holds most of them).
    """
    if cfg.command.startswith("mock:"):
        ds = _run_mock(img, cfg.command[len("mock:"):])
    else:
        ds = _run_adapter(img, cfg)
    if (ds.image_width, ds.image_height) != (img.width, img.height):
        raise ExchangeFormatError(
            "image", f"document is {ds.image_width}x{ds.image_height} but the "
            f"image is {img.width}x{img.height}"
        )
    kept = tuple(d for d in ds.detections if _mask_overlap_fraction(d, mask) >= MASK_OVERLAP_KEEP)
    if len(kept) < len(ds.detections):
        log.info(
            "dropped %d/%d detections outside building mask for %s",
            len(ds.detections) - len(kept), len(ds.detections), img.building_id,
        )
    return DetectionSet(
        image_width=ds.image_width,
        image_height=ds.image_height,
        detector_name=ds.detector_name,
        detections=kept,
    )


def _run_mock(img: AnchoredImage, sidecar: str) -> DetectionSet:
    path = Path(sidecar)
    if not path.is_file():
        raise DetectorBackendError(f"mock sidecar not found: {path}")
    table = json.loads(path.read_text(encoding="utf-8"))
    doc = table.get(img.building_id)
    if doc is None:
        return DetectionSet(
            image_width=img.width,
            image_height=img.height,
            detector_name="mock",
            detections=(),
        )
    return parse_detection_document(doc)


def _run_adapter(img: AnchoredImage, cfg: DetectorConfig) -> DetectionSet:
    argv = shlex.split(cfg.command)
    with tempfile.NamedTemporaryFile(suffix=".png", delete=False) as tmp:
        tmp.write(img.to_png_bytes())
        tmp_path = Path(tmp.name)
    try:
        try:
            proc = subprocess.run(
                argv + [str(tmp_path), cfg.prompt],
                capture_output=True,
                timeout=cfg.timeout_s,
            )
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise DetectorBackendError(f"failed to run {argv[0]}: {exc}") from exc
        if proc.returncode != 0:
            stderr = proc.stderr.decode("utf-8", "replace").strip()
            raise DetectorBackendError(
                f"{argv[0]} exited {proc.returncode}: {stderr or 'no stderr'}"
            )
        return parse_detection_document(proc.stdout.decode("utf-8"))
    finally:
        tmp_path.unlink(missing_ok=True)


def _mask_overlap_fraction(det: Detection, mask: BuildingMask) -> float:
    raster = Image.new("1", (mask.width, mask.height), 0)
    ImageDraw.Draw(raster).polygon(list(det.region.vertices), fill=1, outline=1)
    bits = np.asarray(raster, dtype=bool)
    total = int(bits.sum())
    if total == 0:
        return 0.0
    return int((bits & mask.bits).sum()) / total


def filter_by_confidence(ds: DetectionSet, threshold: float) -> DetectionSet:
    """Keep detections with ``confidence >= threshold`` (inclusive), in order."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    return DetectionSet(
        image_width=ds.image_width,
        image_height=ds.image_height,
        detector_name=ds.detector_name,
        detections=tuple(d for d in ds.detections if d.confidence >= threshold),
    )
