#include "captchalab/imgcore/filter.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace captchalab::imgcore {

namespace {

// Collects the clipped 3x3 neighbourhood of (x, y) into `window`; returns
// the number of samples.
template <typename Get>
int gather(int width, int height, int x, int y, Get get, std::array<int, 9>& window) {
  int n = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const int yy = y + dy;
    if (yy < 0 || yy >= height) continue;
    for (int dx = -1; dx <= 1; ++dx) {
      const int xx = x + dx;
      if (xx < 0 || xx >= width) continue;
      window[static_cast<std::size_t>(n++)] = get(xx, yy);
    }
  }
  return n;
}

int statistic(std::array<int, 9>& window, int n, FilterKind kind) {
  auto* first = window.data();
  auto* last = first + n;
  switch (kind) {
    case FilterKind::Median: {
      auto* mid = first + (n - 1) / 2;
      std::nth_element(first, mid, last);
      return *mid;
    }
    case FilterKind::Max:
      return *std::max_element(first, last);
    case FilterKind::Mean: {
      int sum = 0;
      for (auto* p = first; p != last; ++p) sum += *p;
      return (2 * sum + n) / (2 * n);
    }
  }
  return 0;
}

}  // namespace

RasterImage filter3(const RasterImage& img, FilterKind kind) {
  RasterImage out(img.width(), img.height());
  std::array<int, 9> window{};
  auto get = [&](int x, int y) { return static_cast<int>(img.at(x, y)); };
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const int n = gather(img.width(), img.height(), x, y, get, window);
      out.at(x, y) = static_cast<std::uint8_t>(statistic(window, n, kind));
    }
  }
  return out;
}

BinaryImage filter3(const BinaryImage& img, FilterKind kind) {
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int n = 0;
      int ink = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (!img.contains(x + dx, y + dy)) continue;
          ++n;
          ink += img.at(x + dx, y + dy) ? 1 : 0;
        }
      }
      bool v = false;
      switch (kind) {
        // Lower median of the sorted window (false < true) is true exactly
        // when the background count fits below the median index.
        case FilterKind::Median: v = (n - ink) <= (n - 1) / 2; break;
        case FilterKind::Max: v = ink > 0; break;
        case FilterKind::Mean: v = 2 * ink >= n; break;
      }
      out.set(x, y, v);
    }
  }
  return out;
}

BinaryImage erode3(const BinaryImage& img) {
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (img.contains(x + dx, y + dy) && !img.at(x + dx, y + dy)) {
            all = false;
            break;
          }
        }
      }
      out.set(x, y, all);
    }
  }
  return out;
}

BinaryImage close3(const BinaryImage& img) {
  return erode3(filter3(img, FilterKind::Max));
}

RasterImage add_salt_pepper(const RasterImage& img, double density, Rng& rng) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("noise density must lie in [0, 1]");
  }
  RasterImage out = img;
  for (auto& px : out.pixels()) {
    if (rng.next_float() < density) {
      px = rng.next_float() < 0.5 ? kWhite : kBlack;
    }
  }
  return out;
}

}  // namespace captchalab::imgcore
