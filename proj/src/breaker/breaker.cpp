#include "captchalab/breaker/breaker.hpp"

#include <array>
#include <cmath>

#include "captchalab/error.hpp"
#include "captchalab/imgcore/filter.hpp"
#include "captchalab/imgcore/hough.hpp"
#include "captchalab/imgcore/segment.hpp"

namespace captchalab::breaker {

using namespace imgcore;

BreakResult break_captcha(const RasterImage& img, const ocrnet::NetModel& model,
                          const BreakerConfig& cfg) {
  if (img.size() == 0) throw BreakError("empty image");
  if (!(cfg.hough_vote_fraction > 0.0 && cfg.hough_vote_fraction <= 1.0) || cfg.expected_chars < 1) {
    throw BreakError("invalid breaker configuration");
  }

  BinaryImage thresholded = threshold_below(img, cfg.shadow_threshold);
  BinaryImage denoised = thresholded;
  for (int i = 0; i < cfg.median_passes; ++i) denoised = filter3(denoised, FilterKind::Median);

  const int votes = std::max(1, static_cast<int>(std::ceil(cfg.hough_vote_fraction * img.width())));
  const auto lines = hough_lines(denoised, votes);
  BinaryImage cleaned = erase_lines(denoised, lines, cfg.line_max_run);

  std::vector<Segment> segs;
  try {
    segs = order_and_fix_segments(connected_components(cleaned), cfg.expected_chars);
  } catch (const SegmentationError& e) {
    throw BreakError(std::string("segmentation failed: ") + e.what());
  }

  BreakResult result;
  for (const Segment& s : segs) {
    const auto c = ocrnet::classify(model, resize10(s));
    result.text.push_back(c.letter);
    result.per_char_confidence.push_back(c.confidence);
  }
  if (cfg.keep_stages) {
    result.stages = StageImages{std::move(thresholded), std::move(denoised), std::move(cleaned)};
  }
  return result;
}

int otsu_threshold(const RasterImage& img) {
  std::array<double, 256> hist{};
  for (auto v : img.pixels()) hist[v] += 1.0;
  const double total = static_cast<double>(img.size());
  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += v * hist[static_cast<std::size_t>(v)];

  int best_t = 0;
  double best_var = -1.0;
  double w0 = 0.0;
  double sum0 = 0.0;
  // Candidate t splits the histogram into [0, t) and [t, 255].
  for (int t = 0; t <= 256; ++t) {
    if (t > 0) {
      w0 += hist[static_cast<std::size_t>(t - 1)];
      sum0 += (t - 1) * hist[static_cast<std::size_t>(t - 1)];
    }
    const double w1 = total - w0;
    double var = 0.0;
    if (w0 > 0.0 && w1 > 0.0) {
      const double m0 = sum0 / w0;
      const double m1 = (sum_all - sum0) / w1;
      var = w0 * w1 * (m0 - m1) * (m0 - m1);
    }
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage enhance_pessimal(const RasterImage& img) {
  RasterImage f = filter3(img, FilterKind::Max);
  f = filter3(f, FilterKind::Median);
  f = filter3(f, FilterKind::Mean);
  const int t = otsu_threshold(f);
  return threshold_below(f, static_cast<std::uint8_t>(std::min(t, 255)));
}

}  // namespace captchalab::breaker
