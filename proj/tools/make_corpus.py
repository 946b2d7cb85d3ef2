"""Builds the fallback photographic corpus: 10 images at 24x18 cells of 28 px."""

import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

PIECE_PX = 28
LONG, SHORT = 24, 18


def sources():
    from skimage import data
    from sklearn.datasets import load_sample_image
    import matplotlib.cbook as cbook

    with cbook.get_sample_data("grace_hopper.jpg") as f:
        hopper = np.asarray(Image.open(f).convert("RGB"))
    return [
        ("astronaut", data.astronaut(), "landscape"),
        ("chelsea", data.chelsea(), "landscape"),
        ("coffee", data.coffee(), "landscape"),
        ("rocket", data.rocket(), "portrait"),
        ("motorcycle", data.stereo_motorcycle()[0], "landscape"),
        ("ihc", data.immunohistochemistry(), "landscape"),
        ("camera", np.stack([data.camera()] * 3, axis=-1), "landscape"),
        ("china", load_sample_image("china.jpg"), "landscape"),
        ("flower", load_sample_image("flower.jpg"), "landscape"),
        ("grace_hopper", hopper, "portrait"),
    ]


def fit(pixels, rows, cols):
    img = Image.fromarray(np.asarray(pixels, dtype=np.uint8)).convert("RGB")
    w, h = img.size
    target = cols / rows
    if w / h > target:
        nw = round(h * target)
        img = img.crop(((w - nw) // 2, 0, (w - nw) // 2 + nw, h))
    else:
        nh = round(w / target)
        img = img.crop((0, (h - nh) // 2, w, (h - nh) // 2 + nh))
    return img.resize((cols * PIECE_PX, rows * PIECE_PX), Image.LANCZOS)


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    images = []
    for name, pixels, orientation in sources():
        rows, cols = (SHORT, LONG) if orientation == "landscape" else (LONG, SHORT)
        fit(pixels, rows, cols).save(out / f"{name}.png", optimize=True)
        images.append({"file": f"{name}.png", "rows": rows, "cols": cols})
    manifest = {"piece_px": PIECE_PX, "images": images}
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/corpus")
