"""Adapter entry point.

Invocation contract: ``sam-adapter [options] <image-path> <prompt>``.
Writes exactly one exchange document to stdout. Exit codes: 0 success,
2 model load failure, 3 image decode failure (stderr carries the reason,
stdout stays empty on failure).
"""

import argparse
import json
import sys

import numpy as np
from PIL import Image, UnidentifiedImageError

from .backends import ModelLoadError, segment
from .config import AdapterConfig
from .vectorize import mask_to_polygons

EXIT_MODEL_FAILURE = 2
EXIT_IMAGE_FAILURE = 3


def build_document(image: np.ndarray, prompt: str, cfg: AdapterConfig) -> dict:
    detections = []
    for mask, score in segment(image, prompt, cfg):
        for xy in mask_to_polygons(mask, cfg.min_region_pixels):
            detections.append(
                {
                    "confidence": round(float(score), 6),
                    "polygon": [[float(x), float(y)] for x, y in xy],
                }
            )
    return {
        "image": {"width": int(image.shape[1]), "height": int(image.shape[0])},
        "detector": f"sam-adapter/{cfg.model_id}",
        "detections": detections,
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="sam-adapter", description=__doc__)
    parser.add_argument("--model", default=None, help="backend: 'heuristic' or a HF model id")
    parser.add_argument("--device", default=None)
    parser.add_argument("--min-region-pixels", type=int, default=None)
    parser.add_argument("image_path")
    parser.add_argument("prompt")
    args = parser.parse_args(argv)

    cfg = AdapterConfig.from_env(
        model_id=args.model, device=args.device, min_region_pixels=args.min_region_pixels
    )

    try:
        with Image.open(args.image_path) as img:
            rgb = np.asarray(img.convert("RGB"))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        print(f"cannot decode image {args.image_path}: {exc}", file=sys.stderr)
        return EXIT_IMAGE_FAILURE

    try:
        doc = build_document(rgb, args.prompt, cfg)
    except ModelLoadError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MODEL_FAILURE

    json.dump(doc, sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
