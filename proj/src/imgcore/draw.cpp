#include "captchalab/imgcore/draw.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "captchalab/error.hpp"

namespace captchalab::imgcore {

void draw_line(RasterImage& img, Point from, Point to, std::uint8_t intensity) {
  if (!img.contains(from.x, from.y) || !img.contains(to.x, to.y)) {
    throw std::out_of_range("line endpoint outside image");
  }
  const int dx = std::abs(to.x - from.x);
  const int dy = -std::abs(to.y - from.y);
  const int sx = from.x < to.x ? 1 : -1;
  const int sy = from.y < to.y ? 1 : -1;
  int err = dx + dy;
  int x = from.x;
  int y = from.y;
  for (;;) {
    img.at(x, y) = intensity;
    if (x == to.x && y == to.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

void blit_bitmap(RasterImage& img, const BinaryImage& bitmap, Point at,
                 std::uint8_t intensity, int scale) {
  if (scale < 1) throw std::invalid_argument("blit scale must be >= 1");
  const int w = bitmap.width() * scale;
  const int h = bitmap.height() * scale;
  if (at.x < 0 || at.y < 0 || at.x + w > img.width() || at.y + h > img.height()) {
    throw PlacementError("bitmap " + std::to_string(w) + "x" + std::to_string(h) + " at (" +
                         std::to_string(at.x) + "," + std::to_string(at.y) +
                         ") does not fit a " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()) + " canvas");
  }
  for (int by = 0; by < bitmap.height(); ++by) {
    for (int bx = 0; bx < bitmap.width(); ++bx) {
      if (!bitmap.at(bx, by)) continue;
      for (int sy = 0; sy < scale; ++sy) {
        for (int sx = 0; sx < scale; ++sx) {
          img.at(at.x + bx * scale + sx, at.y + by * scale + sy) = intensity;
        }
      }
    }
  }
}

}  // namespace captchalab::imgcore
