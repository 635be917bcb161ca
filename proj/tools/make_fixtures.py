#!/usr/bin/env python3
"""Regenerate the photo and text fixtures under tests/data.

Photos: 32x32 RGB box-filtered downsamples of the sample images bundled with
scikit-image and scikit-learn (whole-image centre squares and 128x128 crops).
Text: 7500-character segments of the license texts shipped in
/usr/share/common-licenses, whitespace collapsed to single spaces.
"""
import pathlib
import re

import numpy as np
from PIL import Image
import skimage.data
from sklearn.datasets import load_sample_images

ROOT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def sources():
    china, flower = load_sample_images().images
    yield "china", china
    yield "flower", flower
    for name in ["astronaut", "chelsea", "coffee", "rocket", "immunohistochemistry"]:
        yield name, getattr(skimage.data, name)()


def save_ppm(path, arr):
    h, w, _ = arr.shape
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(arr, dtype=np.uint8).tobytes())


def to32(arr):
    return np.asarray(Image.fromarray(arr).resize((32, 32), Image.BOX))


def photos():
    out = ROOT / "photos"
    out.mkdir(exist_ok=True)
    made = 0
    for name, im in sources():
        h, w, _ = im.shape
        s = min(h, w)
        y0, x0 = (h - s) // 2, (w - s) // 2
        crops = [("full", im[y0:y0 + s, x0:x0 + s])]
        for tag, (fy, fx) in [("a", (0.25, 0.3)), ("b", (0.6, 0.65))]:
            y, x = int(fy * (h - 128)), int(fx * (w - 128))
            crops.append((tag, im[y:y + 128, x:x + 128]))
        for tag, crop in crops:
            if made == 20:
                return
            save_ppm(out / f"{name}_{tag}.ppm", to32(crop))
            made += 1


TEXTS = [
    ("Apache-2.0", 600), ("GPL-1", 600), ("GPL-2", 600), ("GPL-3", 600), ("GPL-3", 20000),
    ("GFDL-1.3", 600), ("GFDL-1.2", 10000), ("LGPL-2.1", 600), ("MPL-1.1", 600), ("MPL-2.0", 600),
]


def texts():
    out = ROOT / "text"
    out.mkdir(exist_ok=True)
    for i, (name, offset) in enumerate(TEXTS):
        raw = pathlib.Path("/usr/share/common-licenses", name).read_text(encoding="utf-8")
        flat = re.sub(r"\s+", " ", raw)
        seg = flat[offset:offset + 7500]
        assert len(seg) == 7500, name
        (out / f"{i:02d}_{name}.txt").write_text(seg, encoding="utf-8")


if __name__ == "__main__":
    photos()
    texts()
