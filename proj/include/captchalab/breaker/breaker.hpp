#pragma once

#include <optional>
#include <string>
#include <vector>

#include "captchalab/imgcore/image.hpp"
#include "captchalab/ocrnet/net.hpp"

namespace captchalab::breaker {

struct BreakerConfig {
  std::uint8_t shadow_threshold = 128;
  int median_passes = 1;
  double hough_vote_fraction = 0.1;  // of image width
  int line_max_run = 3;
  int expected_chars = 4;
  bool keep_stages = false;
};

struct StageImages {
  imgcore::BinaryImage thresholded;
  imgcore::BinaryImage denoised;
  imgcore::BinaryImage lines_removed;
};

struct BreakResult {
  std::string text;
  std::vector<double> per_char_confidence;
  std::optional<StageImages> stages;
};

// threshold -> median -> Hough -> line erasure -> components -> ordering ->
// 10x10 resample -> classification. Throws BreakError when no usable ink
// remains after cleaning.
BreakResult break_captcha(const imgcore::RasterImage& img, const ocrnet::NetModel& model,
                          const BreakerConfig& cfg = {});

// Otsu's threshold: the t maximising between-class variance of {v < t} vs
// {v >= t}; the lowest such t on ties. Returns 0 for a single-valued image.
int otsu_threshold(const imgcore::RasterImage& img);

// max -> median -> mean 3x3 filters, then a global Otsu threshold. Returns
// the ink mask (pixels below the threshold).
imgcore::BinaryImage enhance_pessimal(const imgcore::RasterImage& img);

}  // namespace captchalab::breaker
