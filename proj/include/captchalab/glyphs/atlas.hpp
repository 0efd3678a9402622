#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "captchalab/imgcore/image.hpp"

namespace captchalab::glyphs {

inline constexpr int kGlyphWidth = 12;
inline constexpr int kGlyphHeight = 16;
inline constexpr int kFontCount = 2;

struct Glyph {
  char codepoint = 0;
  int font_id = 0;
  imgcore::BinaryImage bitmap;
};

// The 52 letters A-Z, a-z in both bundled fonts. Immutable once loaded.
class GlyphAtlas {
 public:
  // Validates completeness; throws AtlasError naming the first missing entry.
  explicit GlyphAtlas(std::vector<Glyph> glyphs);

  const Glyph& at(char c, int font_id) const;
  bool contains(char c, int font_id) const noexcept;
  std::size_t size() const noexcept { return glyphs_.size(); }
  const std::map<std::pair<char, int>, Glyph>& glyphs() const noexcept { return glyphs_; }

 private:
  std::map<std::pair<char, int>, Glyph> glyphs_;
};

// Parses GAF text: `glyph <char> <font_id>` followed by 16 rows of 12 cells
// from {'.', '#'}. Blank lines and lines starting with '#' outside a glyph
// body are ignored.
GlyphAtlas load_atlas(std::string_view text);

// The atlas compiled into the library.
const GlyphAtlas& default_atlas();
std::string_view default_atlas_text();

// Blits glyph i of `text` at (origin.x + i * spacing, origin.y). Throws
// RenderError for characters missing from the atlas or placements that fall
// outside the canvas.
void render_text(const GlyphAtlas& atlas, std::string_view text, int font_id,
                 imgcore::Point origin, int spacing, int scale, std::uint8_t intensity,
                 imgcore::RasterImage& canvas);

}  // namespace captchalab::glyphs
