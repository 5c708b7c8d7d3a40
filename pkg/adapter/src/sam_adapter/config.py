import os
from dataclasses import dataclass

DEFAULT_MODEL = "heuristic"
DEFAULT_DEVICE = "cpu"
DEFAULT_MIN_REGION_PIXELS = 64


@dataclass(frozen=True)
class AdapterConfig:
    """Backend selection and post-processing knobs.

    ``model_id`` is either ``heuristic`` (built-in classical segmentation,
    runs anywhere) or a Hugging Face model id loaded through transformers.
    Regions smaller than ``min_region_pixels`` are discarded.
    """

    model_id: str = DEFAULT_MODEL
    device: str = DEFAULT_DEVICE
    min_region_pixels: int = DEFAULT_MIN_REGION_PIXELS

    def __post_init__(self):
        if self.min_region_pixels < 1:
            raise ValueError("min_region_pixels must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "AdapterConfig":
        values = {
            "model_id": os.environ.get("SAM_ADAPTER_MODEL", DEFAULT_MODEL),
            "device": os.environ.get("SAM_ADAPTER_DEVICE", DEFAULT_DEVICE),
            "min_region_pixels": int(
                os.environ.get("SAM_ADAPTER_MIN_REGION_PIXELS", DEFAULT_MIN_REGION_PIXELS)
            ),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
