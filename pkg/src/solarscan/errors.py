"""Exception types shared across the package."""


class SolarScanError(Exception):
    """Base class for all package errors."""


class UpstreamError(SolarScanError):
    """A remote service (geocoder, Overpass, tile server, TMY source) failed.

    Distinct from NoMatchError: this signals network/service trouble, not
    an empty result.
    """

    def __init__(self, service: str, message: str):
        super().__init__(f"{service}: {message}")
        self.service = service


class NoMatchError(SolarScanError):
    """A geocoding query returned no results."""


class OversizeAreaError(SolarScanError):
    """Requested bounding box exceeds the per-request area limit."""


class MalformedResponseError(SolarScanError):
    """An upstream response could not be parsed into the expected shape."""


class TileFetchError(UpstreamError):
    """A map tile could not be retrieved after retries."""

    def __init__(self, message: str):
        super().__init__("tiles", message)


class FootprintTooLargeError(SolarScanError):
    """Building footprint does not fit inside the image window at this zoom."""


class NoBuildingError(SolarScanError):
    """No building footprint contains or is near the requested location."""


class DetectorBackendError(SolarScanError):
    """Detector adapter failed to launch, crashed, or broke protocol."""


class ExchangeFormatError(SolarScanError):
    """Detection exchange document violates the schema.

    ``path`` names the offending field, e.g. ``detections[2].confidence``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class TmyFormatError(SolarScanError):
    """TMY input rejected; ``line`` is the 1-based source line when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnknownJobError(SolarScanError):
    """Scan job id not found."""


class EmptyInventoryError(SolarScanError):
    """A from-inventory profile was requested but the scan has no usable panels."""


class PipelineStageError(SolarScanError):
    """A pipeline stage failed; ``stage`` names it (fetching/detecting/...)."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause
