#pragma once

#include <cstdint>

#include "captchalab/imgcore/image.hpp"

namespace captchalab::imgcore {

// 1-px Bresenham segment, endpoints inclusive. Both endpoints must lie inside
// the image (std::out_of_range otherwise).
void draw_line(RasterImage& img, Point from, Point to, std::uint8_t intensity);

// Paints every ink cell of `bitmap` as a scale x scale block with its top-left
// corner at `at`. Background cells leave the canvas untouched. Throws
// PlacementError when the scaled bitmap does not fit.
void blit_bitmap(RasterImage& img, const BinaryImage& bitmap, Point at,
                 std::uint8_t intensity, int scale = 1);

}  // namespace captchalab::imgcore
