#include "captchalab/imgcore/hough.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "captchalab/imgcore/filter.hpp"

namespace captchalab::imgcore {

namespace {

constexpr int kThetaSteps = 180;
constexpr int kSuppressRho = 2;
constexpr int kSuppressTheta = 2;

struct TrigTable {
  std::array<double, kThetaSteps> cos{};
  std::array<double, kThetaSteps> sin{};
};

const TrigTable& trig() {
  static const TrigTable table = [] {
    TrigTable t;
    for (int i = 0; i < kThetaSteps; ++i) {
      const double rad = i * std::numbers::pi / 180.0;
      t.cos[static_cast<std::size_t>(i)] = std::cos(rad);
      t.sin[static_cast<std::size_t>(i)] = std::sin(rad);
    }
    return t;
  }();
  return table;
}

}  // namespace

double LineParams::distance(double x, double y) const noexcept {
  const auto& t = trig();
  const auto i = static_cast<std::size_t>(theta_deg);
  return std::abs(x * t.cos[i] + y * t.sin[i] - rho);
}

std::vector<LineParams> hough_lines(const BinaryImage& img, int vote_threshold) {
  if (vote_threshold < 1) throw std::invalid_argument("vote threshold must be >= 1");
  const auto& t = trig();
  const int d = static_cast<int>(std::ceil(std::hypot(img.width(), img.height())));
  const int rho_bins = 2 * d + 1;
  std::vector<int> acc(static_cast<std::size_t>(kThetaSteps * rho_bins), 0);
  auto cell = [&](int theta, int rho_idx) -> int& {
    return acc[static_cast<std::size_t>(theta * rho_bins + rho_idx)];
  };

  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      for (int th = 0; th < kThetaSteps; ++th) {
        const auto i = static_cast<std::size_t>(th);
        const long r = std::lround(x * t.cos[i] + y * t.sin[i]);
        ++cell(th, static_cast<int>(r) + d);
      }
    }
  }

  std::vector<LineParams> lines;
  for (int th = 0; th < kThetaSteps; ++th) {
    for (int ri = 0; ri < rho_bins; ++ri) {
      const int v = cell(th, ri);
      if (v < vote_threshold) continue;
      bool peak = true;
      for (int dt = -kSuppressTheta; dt <= kSuppressTheta && peak; ++dt) {
        const int th2 = th + dt;
        if (th2 < 0 || th2 >= kThetaSteps) continue;
        for (int dr = -kSuppressRho; dr <= kSuppressRho; ++dr) {
          const int r2 = ri + dr;
          if ((dt == 0 && dr == 0) || r2 < 0 || r2 >= rho_bins) continue;
          const int other = cell(th2, r2);
          const bool earlier = dt < 0 || (dt == 0 && dr < 0);
          if (other > v || (other == v && earlier)) {
            peak = false;
            break;
          }
        }
      }
      if (peak) lines.push_back({ri - d, th, v});
    }
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const LineParams& a, const LineParams& b) { return a.votes > b.votes; });
  return lines;
}

namespace {

int vertical_run(const BinaryImage& img, int x, int y) {
  int top = y;
  while (top > 0 && img.at(x, top - 1)) --top;
  int bottom = y;
  while (bottom + 1 < img.height() && img.at(x, bottom + 1)) ++bottom;
  return bottom - top + 1;
}

}  // namespace

BinaryImage erase_lines(const BinaryImage& img, const std::vector<LineParams>& lines,
                        int max_run) {
  if (max_run < 1) throw std::invalid_argument("max_run must be >= 1");
  BinaryImage out = img;
  if (!lines.empty()) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (!img.at(x, y)) continue;
        const bool near = std::any_of(lines.begin(), lines.end(), [&](const LineParams& l) {
          return l.distance(x, y) <= 1.0;
        });
        // Run lengths are measured on the input so erasure order cannot
        // influence which pixels survive.
        if (near && vertical_run(img, x, y) <= max_run) out.set(x, y, false);
      }
    }
  }
  return close3(out);
}

}  // namespace captchalab::imgcore
