#pragma once

#include <vector>

#include "captchalab/imgcore/image.hpp"

namespace captchalab::imgcore {

// A line in normal form: x*cos(theta) + y*sin(theta) = rho.
struct LineParams {
  int rho = 0;        // pixels, signed
  int theta_deg = 0;  // [0, 180)
  int votes = 0;

  double distance(double x, double y) const noexcept;
  friend constexpr bool operator==(const LineParams&, const LineParams&) = default;
};

// Standard Hough transform at 1 px x 1 degree. Peaks are kept when they reach
// `vote_threshold` and dominate their +-2 rho x +-2 degree neighbourhood
// (equal-vote neighbours earlier in (theta, rho) order win). Sorted by votes
// descending, then theta, then rho.
std::vector<LineParams> hough_lines(const BinaryImage& img, int vote_threshold);

// Erases ink within distance 1 of any line whose vertical ink run through the
// pixel is at most `max_run` (so strokes crossing the line survive), then
// applies one 3x3 closing to rejoin cut strokes.
BinaryImage erase_lines(const BinaryImage& img, const std::vector<LineParams>& lines,
                        int max_run);

}  // namespace captchalab::imgcore
