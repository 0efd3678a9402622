#include "captchalab/glyphs/atlas.hpp"

#include <sstream>

#include "captchalab/error.hpp"
#include "captchalab/imgcore/draw.hpp"

namespace captchalab::glyphs {

namespace {

std::string key_name(char c, int font_id) {
  return std::string(1, c) + "/" + std::to_string(font_id);
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

GlyphAtlas::GlyphAtlas(std::vector<Glyph> glyphs) {
  for (auto& g : glyphs) {
    const auto key = std::make_pair(g.codepoint, g.font_id);
    if (g.bitmap.width() != kGlyphWidth || g.bitmap.height() != kGlyphHeight) {
      throw AtlasError("wrong dimensions for " + key_name(g.codepoint, g.font_id));
    }
    if (g.bitmap.ink_count() == 0) throw AtlasError("empty glyph " + key_name(g.codepoint, g.font_id));
    if (!glyphs_.emplace(key, std::move(g)).second) {
      throw AtlasError("duplicate glyph " + key_name(key.first, key.second));
    }
  }
  for (int font = 0; font < kFontCount; ++font) {
    for (char c = 'A'; c <= 'Z'; ++c) {
      for (char cc : {c, static_cast<char>(c - 'A' + 'a')}) {
        if (!contains(cc, font)) throw AtlasError("missing " + key_name(cc, font));
      }
    }
  }
  if (glyphs_.size() != 52u * kFontCount) {
    throw AtlasError("atlas has " + std::to_string(glyphs_.size()) + " glyphs, expected 104");
  }
}

const Glyph& GlyphAtlas::at(char c, int font_id) const {
  auto it = glyphs_.find({c, font_id});
  if (it == glyphs_.end()) throw RenderError("no glyph for " + key_name(c, font_id));
  return it->second;
}

bool GlyphAtlas::contains(char c, int font_id) const noexcept {
  return glyphs_.count({c, font_id}) != 0;
}

GlyphAtlas load_atlas(std::string_view text) {
  std::vector<Glyph> glyphs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    const auto nl = text.find('\n', pos);
    line = trim_right(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  while (next_line(line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream head{std::string(line)};
    std::string tag, ch;
    int font_id = -1;
    std::string extra;
    if (!(head >> tag >> ch >> font_id) || tag != "glyph" || ch.size() != 1 || (head >> extra)) {
      throw AtlasError("malformed line " + std::to_string(line_no) + ": '" + std::string(line) + "'");
    }
    const char c = ch[0];
    if (!((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) || font_id < 0 || font_id >= kFontCount) {
      throw AtlasError("unsupported glyph key " + key_name(c, font_id) + " at line " +
                       std::to_string(line_no));
    }
    Glyph g{c, font_id, imgcore::BinaryImage(kGlyphWidth, kGlyphHeight)};
    for (int row = 0; row < kGlyphHeight; ++row) {
      if (!next_line(line)) {
        throw AtlasError("wrong dimensions for " + key_name(c, font_id) + ": only " +
                         std::to_string(row) + " rows");
      }
      if (line.size() != kGlyphWidth) {
        throw AtlasError("wrong dimensions for " + key_name(c, font_id) + ": row " +
                         std::to_string(row) + " has " + std::to_string(line.size()) + " cells");
      }
      for (int col = 0; col < kGlyphWidth; ++col) {
        const char cell = line[static_cast<std::size_t>(col)];
        if (cell != '.' && cell != '#') {
          throw AtlasError("malformed cell '" + std::string(1, cell) + "' in " + key_name(c, font_id));
        }
        g.bitmap.set(col, row, cell == '#');
      }
    }
    glyphs.push_back(std::move(g));
  }
  return GlyphAtlas(std::move(glyphs));
}

const GlyphAtlas& default_atlas() {
  static const GlyphAtlas atlas = load_atlas(default_atlas_text());
  return atlas;
}

void render_text(const GlyphAtlas& atlas, std::string_view text, int font_id,
                 imgcore::Point origin, int spacing, int scale, std::uint8_t intensity,
                 imgcore::RasterImage& canvas) {
  if (scale < 1) throw RenderError("scale must be >= 1");
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!atlas.contains(text[i], font_id)) {
      throw RenderError("unknown character '" + std::string(1, text[i]) + "' for font " +
                        std::to_string(font_id));
    }
    const int x = origin.x + static_cast<int>(i) * spacing;
    if (x < 0 || origin.y < 0 || x + kGlyphWidth * scale > canvas.width() ||
        origin.y + kGlyphHeight * scale > canvas.height()) {
      throw RenderError("glyph " + std::to_string(i) + " of '" + std::string(text) +
                        "' falls outside the canvas");
    }
  }
  // Placements are validated up front so a failing call leaves the canvas untouched.
  for (std::size_t i = 0; i < text.size(); ++i) {
    const imgcore::Point at{origin.x + static_cast<int>(i) * spacing, origin.y};
    imgcore::blit_bitmap(canvas, atlas.at(text[i], font_id).bitmap, at, intensity, scale);
  }
}

}  // namespace captchalab::glyphs
