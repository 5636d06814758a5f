#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace signlp::scene {

inline constexpr int kGlyphCols = 5;
inline constexpr int kGlyphRows = 7;
inline constexpr int kGlyphBits = kGlyphCols * kGlyphRows;

// One 5x7 glyph as a 35-bit matrix, row-major from the top-left.
struct Glyph {
  char ch = '?';
  std::uint64_t bits = 0;

  bool on(int col, int row) const {
    return (bits >> (row * kGlyphCols + col)) & 1;
  }
  int popcount_agreement(std::uint64_t other) const;
};

// Fixed 5x7 bitmap font over A-Z and 0-9; all 36 glyphs pairwise distinct.
class GlyphFont {
 public:
  static const GlyphFont& standard();

  const Glyph* find(char ch) const;
  const std::array<Glyph, 36>& glyphs() const { return glyphs_; }

  // Best match for an observed 35-bit matrix: (character, agreement in bits).
  std::pair<char, int> best_match(std::uint64_t observed) const;

 private:
  explicit GlyphFont(std::array<Glyph, 36> g) : glyphs_(g) {}
  std::array<Glyph, 36> glyphs_;
};

}  // namespace signlp::scene
