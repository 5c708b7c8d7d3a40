"""Walkthrough: the full detection pipeline, entirely offline.

Uses the recorded fixture world under fixtures/ (geocoder + Overpass
responses, synthetic aerial tiles, a scripted mock detector) to scan a
three-building area, curate a detection, and print the inventory summary.
Run from the repo root:

    python demos/offline_scan_demo.py
"""

import tempfile

from solarscan.config import Config
from solarscan.pipeline import Pipeline

workdir = tempfile.mkdtemp(prefix="solarscan-demo-")
cfg = Config({
    "image": {"size": 512, "zoom": 19},  # the fixture tiles are zoom-19
    "storage": {"dir": workdir},
})
pipe = Pipeline(cfg, fixtures_dir="fixtures")

print("scanning the recorded 'Bülach' fixture area...")
outcome = pipe.scan_area(
    place="Bülach",
    name="demo",
    on_state=lambda s: print(f"  [{s}]"),
    on_progress=lambda done, total: print(f"    building {done}/{total}"),
)
print(f"\n{outcome.total} buildings processed, {outcome.panels} panels detected, "
      f"{len(outcome.failures)} failures")

store = pipe.store("demo")
for rec in store.records("all"):
    print(f"  panel {rec.id} on {rec.building_id}: "
          f"{rec.polygon.area_m2:.1f} m^2, confidence {rec.confidence}")

summary = store.summarize(outcome.area, "all")
print(f"\nsummary over the scan area: {summary.n_panels} panels "
      f"({summary.panel_area_m2:.1f} m^2) on {summary.n_buildings} buildings "
      f"({summary.building_area_m2:.0f} m^2 of roof)")

# Human-in-the-loop cleaning: reject one detection, re-summarize
first = store.records("all")[0]
store.apply_curation([(first.id, "rejected")], operator="demo")
cleaned = store.summarize(outcome.area, "accepted")
print(f"after rejecting one: {cleaned.n_panels} panels "
      f"({cleaned.panel_area_m2:.1f} m^2) remain in the accepted set")
print(f"\ndecision log:\n{store.decision_log().rstrip()}")
print(f"\ninventory on disk: {store.path}")
