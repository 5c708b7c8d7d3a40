"""Walkthrough: the detector exchange document and confidence filtering.

Any segmentation backend that can print this one JSON document per image
plugs into the pipeline; the scripted mock used here is the same mechanism
the offline test suite runs on. Run from the repo root:

    python demos/detection_exchange_demo.py
"""

import json

import numpy as np

from solarscan import detection
from solarscan.geotypes import GeoPoint
from solarscan.imagery import AnchoredImage, BuildingMask

doc = {
    "image": {"width": 512, "height": 512},
    "detector": "demo-backend",
    "detections": [
        {"confidence": 0.93, "polygon": [[80, 90], [200, 90], [200, 170], [80, 170], [80, 90]]},
        {"confidence": 0.70, "polygon": [[240, 260], [330, 260], [330, 330], [240, 330], [240, 260]]},
        {"confidence": 0.41, "polygon": [[400, 60], [470, 60], [470, 120], [400, 120], [400, 60]]},
    ],
}
print("an exchange document:")
print(json.dumps(doc, indent=2)[:300], "...\n")

ds = detection.parse_detection_document(doc)
print(f"parsed: {len(ds.detections)} detections from {ds.detector_name!r}")

# round trip is the identity
assert detection.parse_detection_document(detection.serialize_detection_document(ds)) == ds
print("serialize -> parse round trip: identity holds")

# threshold filtering is inclusive and monotone
for t in (0.0, 0.70, 0.90, 1.0):
    kept = detection.filter_by_confidence(ds, t)
    print(f"  threshold {t:.2f}: kept {[d.confidence for d in kept.detections]}")

# detections are cropped to the building: less than half inside is dropped
img = AnchoredImage(
    width=512, height=512,
    pixel_data=np.zeros((512, 512, 3), dtype=np.uint8),
    anchor_nw=GeoPoint(47.0001, 8.0), anchor_se=GeoPoint(47.0, 8.0002),
    building_id="demo-building",
)
bits = np.zeros((512, 512), dtype=bool)
bits[:, :256] = True  # building occupies the left half of the window
mask = BuildingMask(width=512, height=512, bits=bits)

import tempfile, pathlib
sidecar = pathlib.Path(tempfile.mkstemp(suffix=".json")[1])
sidecar.write_text(json.dumps({"demo-building": doc}), encoding="utf-8")
cfg = detection.DetectorConfig(command=f"mock:{sidecar}", threshold=0.70)

cropped = detection.run_detector(img, mask, cfg)
print(f"\nmask rule: {len(ds.detections)} scripted -> "
      f"{len(cropped.detections)} at least half inside the building")
final = detection.filter_by_confidence(cropped, cfg.threshold)
print(f"after the {cfg.threshold:.0%} confidence threshold: "
      f"{[d.confidence for d in final.detections]}")
