#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace captchalab::imgcore {

struct Point {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  int left = 0;
  int top = 0;
  int width = 0;
  int height = 0;

  constexpr int right() const noexcept { return left + width; }    // exclusive
  constexpr int bottom() const noexcept { return top + height; }   // exclusive
  constexpr bool empty() const noexcept { return width <= 0 || height <= 0; }
  constexpr bool intersects(const Rect& o) const noexcept {
    return left < o.right() && o.left < right() && top < o.bottom() && o.top < bottom();
  }
  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

inline constexpr std::uint8_t kWhite = 255;
inline constexpr std::uint8_t kBlack = 0;

// Row-major 8-bit grayscale canvas; 0 is ink, 255 is background.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, std::uint8_t fill = kWhite);
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::uint8_t at(int x, int y) const noexcept { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) noexcept { return pixels_[index(x, y)]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Row-major ink mask; true is foreground. Stored as bytes so spans and
// element references behave normally.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return mask_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool at(int x, int y) const noexcept { return mask_[index(x, y)] != 0; }
  void set(int x, int y, bool ink) noexcept { mask_[index(x, y)] = ink ? 1 : 0; }

  std::span<const std::uint8_t> cells() const noexcept { return mask_; }

  std::size_t ink_count() const noexcept;
  // Tight bounding box of the ink; empty Rect when there is none.
  Rect ink_bounds() const noexcept;
  BinaryImage crop(const Rect& r) const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> mask_;
};

// Ink mask of pixels strictly darker than `threshold`.
BinaryImage threshold_below(const RasterImage& img, std::uint8_t threshold);

}  // namespace captchalab::imgcore
