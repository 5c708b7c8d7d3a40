"""Segmentation backends.

``heuristic`` is a deterministic classical detector for panel-like
regions (dark, blue-dominant, grid-textured surfaces) that runs with no
model weights; anything else is treated as a Hugging Face model id and
loaded through transformers' mask-generation pipeline.
"""

import numpy as np
from skimage.morphology import binary_closing, disk

from .config import AdapterConfig


class ModelLoadError(Exception):
    """Backend could not be constructed (missing weights, bad id, ...)."""


def segment(image: np.ndarray, prompt: str, cfg: AdapterConfig) -> list[tuple[np.ndarray, float]]:
    """Run the configured backend; returns (mask, score) pairs."""
    if cfg.model_id == "heuristic":
        return _heuristic_masks(image)
    return _transformers_masks(image, prompt, cfg)


def _heuristic_masks(image: np.ndarray) -> list[tuple[np.ndarray, float]]:
    rgb = image.astype(np.int16)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    value = rgb.max(axis=2)
    # panel-ish pixels: noticeably blue over red, not bright
    candidate = (b >= r + 12) & (b >= g + 4) & (value <= 160)
    if not candidate.any():
        return [(np.zeros(image.shape[:2], dtype=bool), 0.0)]
    # bridge thin grid lines between cells so a panel reads as one region
    closed = binary_closing(candidate, disk(3))

    blue_excess = float(np.mean((b - r)[closed])) if closed.any() else 0.0
    darkness = 1.0 - float(np.mean(value[closed])) / 255.0 if closed.any() else 0.0
    score = min(1.0, max(0.0, 0.35 + 0.5 * darkness + blue_excess / 255.0))
    return [(closed, score)]


def _transformers_masks(image: np.ndarray, prompt: str, cfg: AdapterConfig):
    try:
        from transformers import pipeline
    except Exception as exc:  # transformers not installed/usable
        raise ModelLoadError(f"transformers unavailable: {exc}") from exc
    try:
        generator = pipeline(
            "mask-generation", model=cfg.model_id, device=cfg.device
        )
    except Exception as exc:
        raise ModelLoadError(f"cannot load model {cfg.model_id!r}: {exc}") from exc
    from PIL import Image

    outputs = generator(Image.fromarray(image), points_per_batch=32)
    masks = outputs.get("masks", [])
    scores = outputs.get("scores", [1.0] * len(masks))
    out = []
    for mask, score in zip(masks, scores):
        arr = np.asarray(mask, dtype=bool)
        out.append((arr, float(np.clip(float(score), 0.0, 1.0))))
    return out
