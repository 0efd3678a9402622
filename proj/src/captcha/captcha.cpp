#include "captchalab/captcha/captcha.hpp"

#include <stdexcept>

#include "captchalab/error.hpp"
#include "captchalab/imgcore/draw.hpp"
#include "captchalab/imgcore/filter.hpp"

namespace captchalab::captcha {

using imgcore::Point;
using imgcore::Rng;

namespace {

bool fits(const CaptchaSpec& s, Point origin) {
  const int n = static_cast<int>(s.text.size());
  const int right = origin.x + (n - 1) * s.spacing + glyphs::kGlyphWidth * s.scale;
  const int left = std::min(origin.x, origin.x + (n - 1) * s.spacing);
  return left >= 0 && origin.y >= 0 && right <= s.width &&
         origin.y + glyphs::kGlyphHeight * s.scale <= s.height;
}

Point shifted(const CaptchaSpec& s) { return {s.origin.x + s.shift.x, s.origin.y + s.shift.y}; }

}  // namespace

void validate(const CaptchaSpec& s) {
  if (s.text.empty()) throw SpecError("text must not be empty");
  for (char c : s.text) {
    if (c < 'A' || c > 'Z') throw SpecError("text must be uppercase A-Z, got '" + s.text + "'");
  }
  if (s.width < 3 || s.height < 1) throw SpecError("canvas too small");
  if (!(s.noise_density >= 0.0 && s.noise_density <= 1.0)) {
    throw SpecError("noise_density must lie in [0, 1]");
  }
  if (s.shadow_intensity <= s.ink_intensity) {
    throw SpecError("shadow_intensity must exceed ink_intensity");
  }
  if (s.line_count_range.lo < 0 || s.line_count_range.hi < s.line_count_range.lo) {
    throw SpecError("line_count_range must satisfy 0 <= lo <= hi");
  }
  if (s.scale < 1) throw SpecError("scale must be >= 1");
  if (s.font_id < 0 || s.font_id >= glyphs::kFontCount) throw SpecError("unknown font_id");
  if (!fits(s, s.origin)) throw SpecError("shadow glyphs fall outside the canvas");
  if (!fits(s, shifted(s))) throw SpecError("shifted glyphs fall outside the canvas");
}

std::string random_text(Rng& rng, int length) {
  if (length < 1) throw std::invalid_argument("text length must be >= 1");
  std::string out;
  out.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) out.push_back(static_cast<char>('A' + rng.next_below(26)));
  return out;
}

CaptchaInstance generate(const CaptchaSpec& spec, const glyphs::GlyphAtlas& atlas) {
  validate(spec);
  Rng rng(spec.seed);
  imgcore::RasterImage img(spec.width, spec.height, imgcore::kWhite);

  glyphs::render_text(atlas, spec.text, spec.font_id, spec.origin, spec.spacing, spec.scale,
                      spec.shadow_intensity, img);

  const int lines = rng.uniform_int(spec.line_count_range.lo, spec.line_count_range.hi);
  const int third = spec.width / 3;
  for (int i = 0; i < lines; ++i) {
    const Point a{rng.uniform_int(0, third - 1), rng.uniform_int(0, spec.height - 1)};
    const Point b{rng.uniform_int(spec.width - third, spec.width - 1),
                  rng.uniform_int(0, spec.height - 1)};
    imgcore::draw_line(img, a, b, spec.ink_intensity);
  }

  glyphs::render_text(atlas, spec.text, spec.font_id, shifted(spec), spec.spacing, spec.scale,
                      spec.ink_intensity, img);

  img = imgcore::add_salt_pepper(img, spec.noise_density, rng);
  return {spec, std::move(img), spec.text};
}

std::string text_for_seed(std::uint64_t seed, int length) {
  Rng keyed(seed);
  Rng text_rng(keyed.next());
  return random_text(text_rng, length);
}

CaptchaSpec spec_for_seed(std::uint64_t seed, CaptchaSpec base) {
  base.seed = seed;
  const int length = base.text.empty() ? kDefaultTextLength : static_cast<int>(base.text.size());
  base.text = text_for_seed(seed, length);
  return base;
}

nlohmann::json to_json(const CaptchaSpec& s) {
  return {
      {"text", s.text},
      {"seed", s.seed},
      {"canvas", {s.width, s.height}},
      {"shadow_intensity", s.shadow_intensity},
      {"ink_intensity", s.ink_intensity},
      {"shift", {s.shift.x, s.shift.y}},
      {"line_count_range", {s.line_count_range.lo, s.line_count_range.hi}},
      {"noise_density", s.noise_density},
      {"font_id", s.font_id},
      {"scale", s.scale},
      {"origin", {s.origin.x, s.origin.y}},
      {"spacing", s.spacing},
  };
}

CaptchaSpec spec_from_json(const nlohmann::json& j, CaptchaSpec s) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  auto pair = [&](const char* key, int& a, int& b) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw SpecError(std::string(key) + " must be a 2-array");
    a = v[0].get<int>();
    b = v[1].get<int>();
  };
  try {
    if (j.contains("text")) s.text = j.at("text").get<std::string>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    pair("canvas", s.width, s.height);
    if (j.contains("shadow_intensity")) s.shadow_intensity = j.at("shadow_intensity").get<std::uint8_t>();
    if (j.contains("ink_intensity")) s.ink_intensity = j.at("ink_intensity").get<std::uint8_t>();
    pair("shift", s.shift.x, s.shift.y);
    pair("line_count_range", s.line_count_range.lo, s.line_count_range.hi);
    if (j.contains("noise_density")) s.noise_density = j.at("noise_density").get<double>();
    if (j.contains("font_id")) s.font_id = j.at("font_id").get<int>();
    if (j.contains("scale")) s.scale = j.at("scale").get<int>();
    pair("origin", s.origin.x, s.origin.y);
    if (j.contains("spacing")) s.spacing = j.at("spacing").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad spec field: ") + e.what());
  }
  return s;
}

}  // namespace captchalab::captcha
