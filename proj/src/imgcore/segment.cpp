#include "captchalab/imgcore/segment.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "captchalab/error.hpp"

namespace captchalab::imgcore {

namespace {

std::vector<Segment> label(const BinaryImage& img, std::size_t min_area) {
  const int w = img.width();
  const int h = img.height();
  std::vector<int> labels(img.size(), -1);
  std::vector<Segment> out;
  std::vector<Point> stack;
  std::vector<Point> members;

  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const auto idx0 = static_cast<std::size_t>(y0 * w + x0);
      if (!img.at(x0, y0) || labels[idx0] >= 0) continue;
      const int id = static_cast<int>(out.size()) + 1;
      labels[idx0] = id;
      stack.assign(1, {x0, y0});
      members.clear();
      int left = x0, right = x0, top = y0, bottom = y0;
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        members.push_back(p);
        left = std::min(left, p.x);
        right = std::max(right, p.x);
        top = std::min(top, p.y);
        bottom = std::max(bottom, p.y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (!img.contains(nx, ny) || !img.at(nx, ny)) continue;
            auto& l = labels[static_cast<std::size_t>(ny * w + nx)];
            if (l >= 0) continue;
            l = id;
            stack.push_back({nx, ny});
          }
        }
      }
      if (members.size() < min_area) continue;
      Segment seg;
      seg.bbox = {left, top, right - left + 1, bottom - top + 1};
      seg.mask = BinaryImage(seg.bbox.width, seg.bbox.height);
      for (const Point& p : members) seg.mask.set(p.x - left, p.y - top, true);
      out.push_back(std::move(seg));
    }
  }
  return out;
}

Segment merge(const Segment& a, const Segment& b) {
  const int left = std::min(a.bbox.left, b.bbox.left);
  const int top = std::min(a.bbox.top, b.bbox.top);
  const int right = std::max(a.bbox.right(), b.bbox.right());
  const int bottom = std::max(a.bbox.bottom(), b.bbox.bottom());
  Segment m;
  m.bbox = {left, top, right - left, bottom - top};
  m.mask = BinaryImage(m.bbox.width, m.bbox.height);
  for (const Segment* s : {&a, &b}) {
    for (int y = 0; y < s->bbox.height; ++y) {
      for (int x = 0; x < s->bbox.width; ++x) {
        if (s->mask.at(x, y)) m.mask.set(s->bbox.left - left + x, s->bbox.top - top + y, true);
      }
    }
  }
  return m;
}

bool overlaps_enough(const Rect& a, const Rect& b) {
  const int overlap = std::min(a.right(), b.right()) - std::max(a.left, b.left);
  if (overlap <= 0) return false;
  const int narrower = std::min(a.width, b.width);
  return 2 * overlap >= narrower;
}

// Tightens a segment to the ink it actually holds.
Segment tighten(const Segment& s) {
  const Rect inner = s.mask.ink_bounds();
  if (inner.empty()) throw SegmentationError("split produced an empty half");
  Segment t;
  t.bbox = {s.bbox.left + inner.left, s.bbox.top + inner.top, inner.width, inner.height};
  t.mask = s.mask.crop(inner);
  return t;
}

std::pair<Segment, Segment> split_half(const Segment& s) {
  const int lw = s.bbox.width / 2;
  const int rw = s.bbox.width - lw;
  Segment l, r;
  l.bbox = {s.bbox.left, s.bbox.top, lw, s.bbox.height};
  l.mask = s.mask.crop({0, 0, lw, s.bbox.height});
  r.bbox = {s.bbox.left + lw, s.bbox.top, rw, s.bbox.height};
  r.mask = s.mask.crop({lw, 0, rw, s.bbox.height});
  return {tighten(l), tighten(r)};
}

void sort_left_to_right(std::vector<Segment>& segs) {
  std::stable_sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
    return a.bbox.left != b.bbox.left ? a.bbox.left < b.bbox.left : a.bbox.top < b.bbox.top;
  });
}

}  // namespace

std::vector<Segment> connected_components(const BinaryImage& img) {
  return label(img, kMinComponentArea);
}

std::vector<Segment> connected_components_unfiltered(const BinaryImage& img) {
  return label(img, 1);
}

std::vector<Segment> order_and_fix_segments(std::vector<Segment> segs, int expected) {
  if (expected < 1) throw std::invalid_argument("expected segment count must be >= 1");
  if (segs.empty()) throw SegmentationError("no segments to order");

  sort_left_to_right(segs);
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < segs.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < segs.size(); ++j) {
        if (!overlaps_enough(segs[i].bbox, segs[j].bbox)) continue;
        segs[i] = merge(segs[i], segs[j]);
        segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
        break;
      }
    }
  }
  sort_left_to_right(segs);

  const auto want = static_cast<std::size_t>(expected);
  if (segs.size() > want) {
    std::stable_sort(segs.begin(), segs.end(),
                     [](const Segment& a, const Segment& b) { return a.area() > b.area(); });
    segs.resize(want);
    sort_left_to_right(segs);
  }
  while (segs.size() < want) {
    auto widest = std::max_element(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
      return a.bbox.width < b.bbox.width;
    });
    if (widest->bbox.width < 2) {
      throw SegmentationError("cannot split segments to reach " + std::to_string(expected));
    }
    auto [l, r] = split_half(*widest);
    *widest = std::move(l);
    segs.insert(widest + 1, std::move(r));
  }
  for (std::size_t i = 0; i < segs.size(); ++i) segs[i].order_index = static_cast<int>(i);
  return segs;
}

Segment segment_from_mask(const BinaryImage& mask) {
  const Rect r = mask.ink_bounds();
  if (r.empty()) throw SegmentationError("mask has no ink");
  return {r, mask.crop(r), 0};
}

FeatureVector resize10(const Segment& seg) {
  const int w = seg.mask.width();
  const int h = seg.mask.height();
  if (w < 1 || h < 1) throw SegmentationError("empty segment");
  FeatureVector v{};
  for (int j = 0; j < kFeatureSide; ++j) {
    const int sy = (2 * j + 1) * h / (2 * kFeatureSide);
    for (int i = 0; i < kFeatureSide; ++i) {
      const int sx = (2 * i + 1) * w / (2 * kFeatureSide);
      v[static_cast<std::size_t>(j * kFeatureSide + i)] = seg.mask.at(sx, sy) ? 1 : 0;
    }
  }
  return v;
}

}  // namespace captchalab::imgcore
