#pragma once

#include "captchalab/imgcore/image.hpp"
#include "captchalab/imgcore/rng.hpp"

namespace captchalab::imgcore {

enum class FilterKind { Median, Max, Mean };

// 3x3 window statistic per pixel. Border pixels use the window clipped to the
// image (4 or 6 samples). Even-count medians take the lower median; means
// round half up.
//
// The binary overload treats ink as 1: median is a majority vote under the
// same lower-median rule, max is a dilation, mean is true when at least half
// the window is ink.
RasterImage filter3(const RasterImage& img, FilterKind kind);
BinaryImage filter3(const BinaryImage& img, FilterKind kind);

// 3x3 erosion: a pixel stays ink only if every pixel of its clipped window is ink.
BinaryImage erode3(const BinaryImage& img);

// Dilation then erosion, both 3x3 with clipped borders.
BinaryImage close3(const BinaryImage& img);

// Salt-and-pepper noise. Draws are consumed in row-major order: one flip draw
// per pixel, then one colour draw only for flipped pixels.
RasterImage add_salt_pepper(const RasterImage& img, double density, Rng& rng);

}  // namespace captchalab::imgcore
