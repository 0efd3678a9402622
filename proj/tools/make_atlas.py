#!/usr/bin/env python3
"""Rasterize the two bundled 12x16 bitmap fonts into GAF text.

Font 0 is DejaVu Sans Mono Bold (blocky), font 1 its oblique cut (slanted).
Output is committed as data/default_atlas.gaf; rerun only to regenerate it.
"""
import argparse
import os
import string

import matplotlib
import numpy as np
from PIL import Image, ImageDraw, ImageFont

W, H = 12, 16
FONTS = ["DejaVuSansMono-Bold.ttf", "DejaVuSansMono-BoldOblique.ttf"]


def render(font_path, ch, coverage):
    size = 160
    font = ImageFont.truetype(font_path, size)
    ascent, descent = font.getmetrics()
    advance = font.getlength("M")
    canvas = Image.new("L", (int(advance * 1.4), ascent + descent), 0)
    ImageDraw.Draw(canvas).text((int(advance * 0.2), 0), ch, font=font, fill=255)
    # Crop vertically to [cap top, descender bottom], horizontally to the cell.
    cap_top = font.getbbox("H")[1]
    cap_bottom = font.getbbox("H")[3]
    bottom = cap_bottom + int((cap_bottom - cap_top) * 0.36)
    arr = np.asarray(canvas, dtype=np.float64)[cap_top:bottom, :] / 255.0
    x0 = int(advance * 0.2 - advance * 0.1)
    arr = arr[:, max(x0, 0):max(x0, 0) + int(advance * 1.2)]
    out = np.zeros((H, W))
    hs, ws = arr.shape[0] / H, arr.shape[1] / W
    for r in range(H):
        for c in range(W):
            block = arr[int(r * hs):int((r + 1) * hs), int(c * ws):int((c + 1) * ws)]
            out[r, c] = block.mean() if block.size else 0.0
    return out >= coverage


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    ap.add_argument("--coverage", type=float, default=0.42)
    args = ap.parse_args()
    font_dir = os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data/fonts/ttf")
    lines = ["# Glyph atlas: 52 letters x 2 fonts, 12x16 cells, '#' = ink.",
             "# font 0: blocky mono bold, font 1: slanted mono bold.", ""]
    for font_id, name in enumerate(FONTS):
        path = os.path.join(font_dir, name)
        for ch in string.ascii_uppercase + string.ascii_lowercase:
            bits = render(path, ch, args.coverage)
            lines.append(f"glyph {ch} {font_id}")
            lines.extend("".join("#" if b else "." for b in row) for row in bits)
            lines.append("")
    with open(args.out, "w") as f:
        f.write("\n".join(lines))


if __name__ == "__main__":
    main()
