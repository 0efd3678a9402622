#!/usr/bin/env python3
"""Draw the bundled 16x16 object sprites and write data/sprites/manifest.json."""
import json
import math
import os
import sys

from PIL import Image, ImageDraw

S = 16


def star(d):
    pts = []
    for i in range(10):
        r = 7.5 if i % 2 == 0 else 3.2
        a = -math.pi / 2 + i * math.pi / 5
        pts.append((7.5 + r * math.cos(a), 8 + r * math.sin(a)))
    d.polygon(pts, fill=0)


SHAPES = {
    "circle": lambda d: d.ellipse((1, 1, 14, 14), fill=0),
    "square": lambda d: d.rectangle((2, 2, 13, 13), fill=0),
    "triangle": lambda d: d.polygon([(7.5, 1), (15, 14), (0, 14)], fill=0),
    "star": star,
    "cross": lambda d: (d.rectangle((6, 1, 9, 14), fill=0), d.rectangle((1, 6, 14, 9), fill=0)),
    "ring": lambda d: d.ellipse((1, 1, 14, 14), outline=0, width=3),
    "house": lambda d: (d.polygon([(7.5, 0), (15, 7), (0, 7)], fill=0), d.rectangle((2, 7, 13, 15), fill=0),
                        d.rectangle((6, 10, 9, 15), fill=255)),
    "tree": lambda d: (d.ellipse((2, 0, 13, 10), fill=0), d.rectangle((6, 9, 9, 15), fill=0)),
    "arrow": lambda d: (d.rectangle((1, 6, 9, 9), fill=0), d.polygon([(9, 2), (15, 7.5), (9, 13)], fill=0)),
    "moon": lambda d: (d.ellipse((1, 1, 14, 14), fill=0), d.ellipse((5, -1, 17, 11), fill=255)),
    "diamond": lambda d: d.polygon([(7.5, 0), (15, 7.5), (7.5, 15), (0, 7.5)], fill=0),
    "heart": lambda d: (d.ellipse((0, 1, 8, 9), fill=0), d.ellipse((7, 1, 15, 9), fill=0),
                        d.polygon([(0.5, 6), (15, 6), (7.5, 15)], fill=0)),
}


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    manifest = []
    for label, draw in SHAPES.items():
        img = Image.new("L", (S, S), 255)
        draw(ImageDraw.Draw(img))
        name = f"{label}.pgm"
        img.save(os.path.join(out_dir, name))
        manifest.append({"label": label, "file": name})
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sprites")
