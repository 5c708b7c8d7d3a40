"""Command-line interface: thin wrappers over the pipeline operations.

``--fixtures <dir>`` replays recorded upstream responses so every verb
runs fully offline.
"""

import json
import sys
from pathlib import Path

import click

from .config import Config
from .errors import SolarScanError
from .geotypes import BoundingBox, GeoPoint
from .inventory import FILTER_ALL, STATUS_ACCEPTED, STATUS_REJECTED
from .pipeline import Pipeline


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="YAML config file.")
@click.option("--fixtures", "fixtures_dir", type=click.Path(exists=True), default=None,
              help="Replay recorded responses from this directory (offline mode).")
@click.option("--data-dir", type=click.Path(), default=None,
              help="Override storage.dir for inventories, jobs, and caches.")
@click.option("--tile-cache", type=click.Path(), default=None,
              help="Tile cache directory (tiles.cache_dir).")
@click.option("--tmy-file", type=click.Path(exists=True), default=None,
              help="Use this TMY CSV instead of fetching (tmy.file).")
@click.pass_context
def main(ctx, config_path, fixtures_dir, data_dir, tile_cache, tmy_file):
    """Rooftop solar panel detection and solar power profiling."""
    cfg = Config.load(config_path)
    if data_dir:
        cfg.set("storage.dir", data_dir)
    if tile_cache:
        cfg.set("tiles.cache_dir", tile_cache)
    if tmy_file:
        cfg.set("tmy.file", tmy_file)
    ctx.obj = Pipeline(cfg, fixtures_dir)


def _fail(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@main.command()
@click.option("--lat", type=float, required=True)
@click.option("--lon", type=float, required=True)
@click.option("--scan", "scan_name", default="adhoc", show_default=True)
@click.pass_obj
def detect(pipe: Pipeline, lat, lon, scan_name):
    """Detect panels on the building at/near a coordinate."""
    try:
        records = pipe.detect_building(GeoPoint(lat=lat, lon=lon), scan_name=scan_name)
    except SolarScanError as exc:
        _fail(exc)
    store = pipe.store(scan_name)
    ids = {r.id for r in records}
    doc = {
        "type": "FeatureCollection",
        "features": [
            f for f in store.to_geojson(FILTER_ALL)["features"]
            if f["properties"]["panel_id"] in ids
        ],
    }
    click.echo(json.dumps(doc, indent=2))


@main.command()
@click.option("--place", default=None, help="Place name to geocode into an area.")
@click.option("--bbox", default=None, help="south,west,north,east in degrees.")
@click.option("--name", default="scan", show_default=True, help="Inventory scan name.")
@click.option("--workers", type=int, default=None)
@click.pass_obj
def scan(pipe: Pipeline, place, bbox, name, workers):
    """Scan every building in an area (synchronous)."""
    area = None
    if bbox:
        try:
            s, w, n, e = (float(v) for v in bbox.split(","))
            area = BoundingBox(south=s, west=w, north=n, east=e)
        except ValueError as exc:
            _fail(exc)
    if area is None and not place:
        _fail(ValueError("pass --place or --bbox"))
    try:
        outcome = pipe.scan_area(
            area=area, place=place, name=name, workers=workers,
            on_state=lambda st: click.echo(f"[{st}]"),
            on_progress=lambda done, total: click.echo(f"  {done}/{total} buildings"),
        )
    except SolarScanError as exc:
        _fail(exc)
    click.echo(f"scan {outcome.name}: {outcome.panels} panels from "
               f"{outcome.total} buildings, {len(outcome.failures)} failures")
    for failure in outcome.failures:
        click.echo(f"  failed {failure['building_id']} at {failure['stage']}: "
                   f"{failure['error']}")
    summary = pipe.store(name).summarize(outcome.area, FILTER_ALL)
    click.echo(f"inventory: {summary.n_panels} panels, "
               f"{summary.panel_area_m2:.2f} m^2 over {summary.n_buildings} buildings")


@main.command()
@click.option("--lat", type=float, required=True)
@click.option("--lon", type=float, required=True)
@click.option("--area", "area_m2", type=float, default=None,
              help="Panel area in m^2 (default: from --scan inventory).")
@click.option("--scan", "scan_name", default=None,
              help="Scale by this scan's accepted panel area.")
@click.option("--tilt", type=float, default=None, help="Panel tilt, degrees.")
@click.option("--azimuth", type=float, default=None, help="Panel azimuth, degrees.")
@click.option("--out", type=click.Path(), default=None, help="Write CSV here instead of stdout.")
@click.pass_obj
def profile(pipe: Pipeline, lat, lon, area_m2, scan_name, tilt, azimuth, out):
    """Hourly annual power profile as CSV."""
    if area_m2 is None and scan_name is None:
        _fail(ValueError("pass --area or --scan"))
    try:
        prof = pipe.profile(
            GeoPoint(lat=lat, lon=lon), panel_area_m2=area_m2, scan=scan_name,
            tilt=tilt, azimuth=azimuth,
        )
    except SolarScanError as exc:
        _fail(exc)
    csv_text = prof.to_csv()
    if out:
        Path(out).write_text(csv_text, encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(csv_text, nl=False)


@main.command()
@click.option("--scan", "scan_name", required=True)
@click.option("--status", default=FILTER_ALL, show_default=True,
              help="all | accepted | rejected | detected")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def export(pipe: Pipeline, scan_name, status, out):
    """Export a scan's inventory as GeoJSON."""
    store = pipe.store(scan_name)
    if not store.path.is_file():
        _fail(SolarScanError(f"no inventory for scan {scan_name!r}"))
    doc = json.dumps(store.to_geojson(status), indent=2)
    if out:
        Path(out).write_text(doc, encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(doc)


@main.command()
@click.option("--scan", "scan_name", required=True)
@click.option("--apply", "log_path", type=click.Path(exists=True), required=True,
              help="Decision log: '<panel_id> <accepted|rejected>' per line "
                   "(timestamps/operators in extra columns are accepted).")
@click.option("--operator", default="cli")
@click.pass_obj
def curate(pipe: Pipeline, scan_name, log_path, operator):
    """Apply accept/reject decisions from a file."""
    store = pipe.store(scan_name)
    decisions = []
    for raw in Path(log_path).read_text(encoding="utf-8").splitlines():
        parts = raw.split()
        if not parts:
            continue
        # either "<id> <status>" or full log lines "<ts> <id> <status> <op>"
        if len(parts) >= 3 and parts[2] in (STATUS_ACCEPTED, STATUS_REJECTED):
            decisions.append((parts[1], parts[2]))
        elif len(parts) >= 2 and parts[1] in (STATUS_ACCEPTED, STATUS_REJECTED):
            decisions.append((parts[0], parts[1]))
        else:
            _fail(ValueError(f"bad decision line: {raw!r}"))
    applied, unknown = store.apply_curation(decisions, operator=operator)
    click.echo(f"applied {applied} decisions")
    if unknown:
        click.echo(f"unknown panel ids: {', '.join(unknown)}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.pass_obj
def serve(pipe: Pipeline, host, port):
    """Run the HTTP API."""
    import uvicorn

    from .service import create_app

    app = create_app(pipe.config, pipeline=pipe)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
