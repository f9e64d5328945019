#!/usr/bin/env python3
# Copyright 2026 The Framemark Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerate tests/data/corpus from the scikit-image sample images.

Each image is center-cropped to a square and resized to 512x512 RGB.
"""

import argparse
import pathlib

import numpy as np
from PIL import Image
from skimage import data

SOURCES = ["astronaut", "camera", "coffee", "rocket", "immunohistochemistry", "chelsea"]


def to_square_rgb(img: np.ndarray, side: int) -> Image.Image:
    if img.ndim == 2:
        img = np.stack([img] * 3, axis=-1)
    img = img[..., :3]
    h, w = img.shape[:2]
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    crop = Image.fromarray(img[top : top + s, left : left + s].astype(np.uint8))
    return crop.resize((side, side), Image.BICUBIC)


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "tests/data/corpus"))
    parser.add_argument("--side", type=int, default=512)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, name in enumerate(SOURCES):
        img = to_square_rgb(getattr(data, name)(), args.side)
        img.save(out / f"frame_{i:04d}.png", optimize=True)
        print(f"frame_{i:04d}.png <- {name}")


if __name__ == "__main__":
    main()
