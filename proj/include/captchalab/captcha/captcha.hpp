#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "captchalab/glyphs/atlas.hpp"
#include "captchalab/imgcore/image.hpp"
#include "captchalab/imgcore/rng.hpp"

namespace captchalab::captcha {

struct IntRange {
  int lo = 0;
  int hi = 0;
  friend constexpr bool operator==(const IntRange&, const IntRange&) = default;
};

// Generation parameters. Defaults reproduce the stock look: shadows at 160,
// ink glyphs 6 px to their left, 2-4 random lines and 5% salt-and-pepper.
struct CaptchaSpec {
  std::string text = "XXYH";
  std::uint64_t seed = 0;
  int width = 200;
  int height = 60;
  std::uint8_t shadow_intensity = 160;
  std::uint8_t ink_intensity = 0;
  imgcore::Point shift{-6, 0};
  IntRange line_count_range{2, 4};
  double noise_density = 0.05;
  int font_id = 0;
  int scale = 2;
  imgcore::Point origin{20, 14};
  int spacing = 40;

  friend bool operator==(const CaptchaSpec&, const CaptchaSpec&) = default;
};

struct CaptchaInstance {
  CaptchaSpec spec;
  imgcore::RasterImage image;
  std::string truth;
};

inline constexpr int kDefaultTextLength = 4;

// Throws SpecError describing the first violated constraint.
void validate(const CaptchaSpec& spec);

// Uppercase letters, each next_below(26) over A-Z.
std::string random_text(imgcore::Rng& rng, int length);

// Shadows, random lines, shifted ink glyphs, then salt-and-pepper; all
// randomness from one Rng seeded with spec.seed, consumed in that order.
CaptchaInstance generate(const CaptchaSpec& spec,
                         const glyphs::GlyphAtlas& atlas = glyphs::default_atlas());

// Text for a seeded instance. Drawn from a stream keyed off `seed` but
// distinct from the generation stream, so text and degradation are not
// correlated draw-for-draw.
std::string text_for_seed(std::uint64_t seed, int length = kDefaultTextLength);

// `base` with seed and text replaced by the seeded values.
CaptchaSpec spec_for_seed(std::uint64_t seed, CaptchaSpec base = {});

// Flat JSON object with snake_case field names; pairs encode as 2-arrays.
nlohmann::json to_json(const CaptchaSpec& spec);
// Reads fields present in `j` over the defaults. Throws SpecError on bad types.
CaptchaSpec spec_from_json(const nlohmann::json& j, CaptchaSpec base = {});

}  // namespace captchalab::captcha
