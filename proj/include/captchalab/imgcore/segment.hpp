#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "captchalab/imgcore/image.hpp"

namespace captchalab::imgcore {

inline constexpr int kFeatureSide = 10;
inline constexpr std::size_t kFeatureSize = kFeatureSide * kFeatureSide;
inline constexpr std::size_t kMinComponentArea = 15;

// One character candidate: its box in the source image and the ink of that
// component only, cropped to the box.
struct Segment {
  Rect bbox;
  BinaryImage mask;
  int order_index = 0;

  std::size_t area() const noexcept { return mask.ink_count(); }
};

// 10x10 binary resample, row-major, 1 = ink.
using FeatureVector = std::array<std::uint8_t, kFeatureSize>;

// 8-connected components of the ink. Components smaller than
// kMinComponentArea are dropped as noise residue. Order is unspecified.
std::vector<Segment> connected_components(const BinaryImage& img);

// Same labelling with no area filter; used to check the partition property.
std::vector<Segment> connected_components_unfiltered(const BinaryImage& img);

// Coerces a raw segment list to exactly `expected` left-to-right segments:
// merges boxes whose horizontal overlap covers >= 50% of the narrower box,
// keeps the largest when there are too many, splits the widest in half when
// there are too few. Throws SegmentationError on empty input or when a
// segment cannot be split further.
std::vector<Segment> order_and_fix_segments(std::vector<Segment> segs, int expected);

// Segment covering the tight ink bounds of a whole mask (glyph bitmaps).
Segment segment_from_mask(const BinaryImage& mask);

// Nearest-neighbour sample of the segment mask: cell (i, j) reads source
// pixel (floor((i + 0.5) * w / 10), floor((j + 0.5) * h / 10)).
FeatureVector resize10(const Segment& seg);

}  // namespace captchalab::imgcore
