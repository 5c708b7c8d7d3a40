"""HTTP API over the pipeline: building detection, asynchronous area
scans, inventory export, curation, and profile generation.

Endpoints (all JSON unless noted):

- ``GET  /v1/detect?lat&lon``                 detect panels on one building
- ``POST /v1/scans``                          start a scan job ({"place"} or {"bbox"})
- ``GET  /v1/scans/{id}``                     job status (also accepts scan names)
- ``GET  /v1/scans/{id}/panels.geojson``      inventory export
- ``GET  /v1/scans/{id}/decisions``           curation decision log (text/plain)
- ``POST /v1/curation``                       apply accept/reject decisions
- ``GET  /v1/profile?lat&lon&area_m2|scan=…`` hourly CSV profile (text/csv)
"""

import json
import logging
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from .config import Config
from .errors import (
    EmptyInventoryError,
    NoBuildingError,
    NoMatchError,
    PipelineStageError,
    SolarScanError,
    UnknownJobError,
    UpstreamError,
)
from .geotypes import BoundingBox, GeoPoint
from .inventory import FILTER_ALL, STATUS_ACCEPTED, STATUS_REJECTED
from .pipeline import Pipeline

log = logging.getLogger(__name__)

JOB_STATES = ("queued", "fetching", "detecting", "georeferencing", "done", "failed")


@dataclass
class ScanJob:
    id: str
    area: dict
    state: str = "queued"
    progress_done: int = 0
    progress_total: int = 0
    failures: list = field(default_factory=list)
    result_ref: str | None = None
    error: str | None = None

    def advance(self, state: str) -> None:
        if JOB_STATES.index(state) < JOB_STATES.index(self.state):
            raise ValueError(f"job state cannot go back from {self.state} to {state}")
        self.state = state

    def to_dict(self) -> dict:
        d = asdict(self)
        d["progress"] = {"done": d.pop("progress_done"), "total": d.pop("progress_total")}
        return d


class JobManager:
    """Persisted scan jobs on a bounded worker pool.

    Job state lives in memory behind a lock (status polls never wait on a
    running scan) and is mirrored to ``<dir>/<id>.json`` on every
    transition, so a restarted service reports interrupted jobs as failed
    instead of losing them.
    """

    def __init__(self, directory: str | Path, pipeline: Pipeline, workers: int = 2):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.pipeline = pipeline
        self._jobs: dict[str, ScanJob] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._recover()

    def _recover(self) -> None:
        for path in sorted(self.dir.glob("*.json")):
            try:
                d = json.loads(path.read_text(encoding="utf-8"))
                progress = d.pop("progress", {})
                job = ScanJob(
                    progress_done=progress.get("done", 0),
                    progress_total=progress.get("total", 0),
                    **d,
                )
            except (ValueError, TypeError) as exc:
                log.warning("ignoring unreadable job file %s: %s", path, exc)
                continue
            if job.state not in ("done", "failed"):
                job.state = "failed"
                job.error = "interrupted by service restart"
                self._persist(job)
            self._jobs[job.id] = job

    def _persist(self, job: ScanJob) -> None:
        (self.dir / f"{job.id}.json").write_text(
            json.dumps(job.to_dict(), sort_keys=True, indent=1), encoding="utf-8"
        )

    def _update(self, job: ScanJob, **changes) -> None:
        with self._lock:
            for key, value in changes.items():
                if key == "state":
                    job.advance(value)
                else:
                    setattr(job, key, value)
            self._persist(job)

    def submit(
        self,
        area: BoundingBox | None = None,
        place: str | None = None,
        name: str | None = None,
    ) -> ScanJob:
        job_id = uuid.uuid4().hex[:12]
        scan_name = name or f"scan-{job_id}"
        area_desc = {"place": place} if place else {
            "bbox": [area.south, area.west, area.north, area.east]
        }
        job = ScanJob(id=job_id, area=area_desc, result_ref=scan_name)
        with self._lock:
            self._jobs[job_id] = job
            self._persist(job)
        self._pool.submit(self._run, job, area, place, scan_name)
        return job

    def _run(self, job: ScanJob, area, place, scan_name: str) -> None:
        def on_state(state: str) -> None:
            self._update(job, state=state)

        def on_progress(done: int, total: int) -> None:
            self._update(job, progress_done=done, progress_total=total)

        try:
            outcome = self.pipeline.scan_area(
                area=area, place=place, name=scan_name,
                on_state=on_state, on_progress=on_progress,
            )
            self._update(
                job,
                state="done",
                failures=outcome.failures,
                progress_done=outcome.processed,
                progress_total=outcome.total,
            )
        except PipelineStageError as exc:
            self._update(job, state="failed", error=f"{exc.stage}: {exc.cause}")
        except Exception as exc:
            log.exception("scan job %s crashed", job.id)
            self._update(job, state="failed", error=str(exc))

    def get(self, job_id: str) -> ScanJob:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise UnknownJobError(f"unknown job id {job_id!r}")
            return job

    def status(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise UnknownJobError(f"unknown job id {job_id!r}")
            return job.to_dict()

    def scan_name_for(self, ref: str) -> str:
        """Map a job id to its scan name; unknown ids pass through as names."""
        with self._lock:
            job = self._jobs.get(ref)
        return job.result_ref if job is not None else ref


def create_app(
    config: Config | None = None,
    fixtures_dir: str | Path | None = None,
    pipeline: Pipeline | None = None,
) -> FastAPI:
    cfg = config or Config()
    pipe = pipeline or Pipeline(cfg, fixtures_dir)
    jobs = JobManager(Path(cfg.get("storage.dir", "./solarscan-data")) / "jobs", pipe)

    app = FastAPI(title="solarscan", version="0.1.0")
    app.state.pipeline = pipe
    app.state.jobs = jobs

    @app.exception_handler(SolarScanError)
    async def _solarscan_error(request, exc: SolarScanError):
        status = 500
        body = {"error": str(exc)}
        if isinstance(exc, (NoBuildingError, NoMatchError, UnknownJobError, EmptyInventoryError)):
            status = 404
        elif isinstance(exc, PipelineStageError):
            status = 502
            body["stage"] = exc.stage
        elif isinstance(exc, UpstreamError):
            status = 502
            body["service"] = exc.service
        return JSONResponse(status_code=status, content=body)

    @app.get("/v1/detect")
    def detect(lat: float = Query(...), lon: float = Query(...)):
        records = pipe.detect_building(GeoPoint(lat=lat, lon=lon))
        store = pipe.store("adhoc")
        features = [
            f for f in store.to_geojson(FILTER_ALL)["features"]
            if f["properties"]["panel_id"] in {r.id for r in records}
        ]
        return {"type": "FeatureCollection", "features": features}

    @app.post("/v1/scans", status_code=202)
    def start_scan(body: dict):
        place = body.get("place")
        bbox = body.get("bbox")
        name = body.get("name")
        if not place and not bbox:
            raise HTTPException(422, "body must carry 'place' or 'bbox'")
        area = None
        if bbox:
            try:
                area = BoundingBox(south=bbox[0], west=bbox[1], north=bbox[2], east=bbox[3])
            except (TypeError, IndexError, ValueError) as exc:
                raise HTTPException(422, f"bad bbox: {exc}")
        job = jobs.submit(area=area, place=place, name=name)
        return job.to_dict()

    @app.get("/v1/scans/{job_id}")
    def scan_status(job_id: str):
        return jobs.status(job_id)

    @app.get("/v1/scans/{ref}/panels.geojson")
    def scan_panels(ref: str, status: str = Query(default=FILTER_ALL)):
        store = pipe.store(jobs.scan_name_for(ref))
        if not store.path.is_file():
            raise HTTPException(404, f"no inventory for {ref!r}")
        return Response(
            content=json.dumps(store.to_geojson(status)),
            media_type="application/geo+json",
        )

    @app.get("/v1/scans/{ref}/decisions")
    def scan_decisions(ref: str):
        store = pipe.store(jobs.scan_name_for(ref))
        return PlainTextResponse(store.decision_log())

    @app.post("/v1/curation")
    def curation(body: dict):
        scan = body.get("scan")
        decisions = body.get("decisions")
        operator = body.get("operator", "anonymous")
        if not scan or not isinstance(decisions, list):
            raise HTTPException(422, "body must carry 'scan' and a 'decisions' list")
        store = pipe.store(jobs.scan_name_for(scan))
        if not store.path.is_file():
            raise HTTPException(404, f"no inventory for {scan!r}")
        pairs = []
        for i, d in enumerate(decisions):
            pid = d.get("panel_id")
            status = d.get("status")
            if not pid or status not in (STATUS_ACCEPTED, STATUS_REJECTED):
                raise HTTPException(422, f"decisions[{i}] needs panel_id and accepted|rejected")
            pairs.append((pid, status))
        applied, unknown = store.apply_curation(pairs, operator=operator)
        return {"applied": applied, "unknown": unknown}

    @app.get("/v1/profile")
    def profile(
        lat: float = Query(...),
        lon: float = Query(...),
        area_m2: float | None = Query(default=None),
        scan: str | None = Query(default=None),
        tilt: float | None = Query(default=None),
        azimuth: float | None = Query(default=None),
    ):
        if area_m2 is None and scan is None:
            raise HTTPException(422, "pass area_m2 or scan")
        if area_m2 is not None and area_m2 < 0:
            raise HTTPException(422, "area_m2 must be >= 0")
        prof = pipe.profile(
            GeoPoint(lat=lat, lon=lon),
            panel_area_m2=area_m2,
            scan=jobs.scan_name_for(scan) if scan else None,
            tilt=tilt,
            azimuth=azimuth,
        )
        return PlainTextResponse(prof.to_csv(), media_type="text/csv")

    return app
