#include "signlp/font.hpp"

#include <bit>
#include <stdexcept>

namespace signlp::scene {

namespace {

struct GlyphSpec {
  char ch;
  const char* rows[kGlyphRows];
};

// clang-format off
constexpr GlyphSpec kFont[36] = {
  {'A', {" ### ", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"}},
  {'B', {"#### ", "#   #", "#   #", "#### ", "#   #", "#   #", "#### "}},
  {'C', {" ### ", "#   #", "#    ", "#    ", "#    ", "#   #", " ### "}},
  {'D', {"#### ", "#   #", "#   #", "#   #", "#   #", "#   #", "#### "}},
  {'E', {"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#####"}},
  {'F', {"#####", "#    ", "#    ", "#### ", "#    ", "#    ", "#    "}},
  {'G', {" ### ", "#   #", "#    ", "# ###", "#   #", "#   #", " ### "}},
  {'H', {"#   #", "#   #", "#   #", "#####", "#   #", "#   #", "#   #"}},
  {'I', {" ### ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "}},
  {'J', {"  ###", "   # ", "   # ", "   # ", "   # ", "#  # ", " ##  "}},
  {'K', {"#   #", "#  # ", "# #  ", "##   ", "# #  ", "#  # ", "#   #"}},
  {'L', {"#    ", "#    ", "#    ", "#    ", "#    ", "#    ", "#####"}},
  {'M', {"#   #", "## ##", "# # #", "# # #", "#   #", "#   #", "#   #"}},
  {'N', {"#   #", "##  #", "# # #", "#  ##", "#   #", "#   #", "#   #"}},
  {'O', {" ### ", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "}},
  {'P', {"#### ", "#   #", "#   #", "#### ", "#    ", "#    ", "#    "}},
  {'Q', {" ### ", "#   #", "#   #", "#   #", "# # #", "#  # ", " ## #"}},
  {'R', {"#### ", "#   #", "#   #", "#### ", "# #  ", "#  # ", "#   #"}},
  {'S', {" ####", "#    ", "#    ", " ### ", "    #", "    #", "#### "}},
  {'T', {"#####", "  #  ", "  #  ", "  #  ", "  #  ", "  #  ", "  #  "}},
  {'U', {"#   #", "#   #", "#   #", "#   #", "#   #", "#   #", " ### "}},
  {'V', {"#   #", "#   #", "#   #", "#   #", "#   #", " # # ", "  #  "}},
  {'W', {"#   #", "#   #", "#   #", "# # #", "# # #", "## ##", "#   #"}},
  {'X', {"#   #", "#   #", " # # ", "  #  ", " # # ", "#   #", "#   #"}},
  {'Y', {"#   #", "#   #", " # # ", "  #  ", "  #  ", "  #  ", "  #  "}},
  {'Z', {"#####", "    #", "   # ", "  #  ", " #   ", "#    ", "#####"}},
  {'0', {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "}},
  {'1', {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "}},
  {'2', {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"}},
  {'3', {"#####", "   # ", "  #  ", "   # ", "    #", "#   #", " ### "}},
  {'4', {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "}},
  {'5', {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "}},
  {'6', {"  ## ", " #   ", "#    ", "#### ", "#   #", "#   #", " ### "}},
  {'7', {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "}},
  {'8', {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "}},
  {'9', {" ### ", "#   #", "#   #", " ####", "    #", "   # ", " ##  "}},
};
// clang-format on

std::array<Glyph, 36> build() {
  std::array<Glyph, 36> out;
  for (int i = 0; i < 36; ++i) {
    Glyph g;
    g.ch = kFont[i].ch;
    for (int r = 0; r < kGlyphRows; ++r) {
      for (int c = 0; c < kGlyphCols; ++c) {
        if (kFont[i].rows[r][c] == '#')
          g.bits |= std::uint64_t{1} << (r * kGlyphCols + c);
      }
    }
    out[i] = g;
  }
  for (int i = 0; i < 36; ++i)
    for (int j = i + 1; j < 36; ++j)
      if (out[i].bits == out[j].bits)
        throw std::logic_error("font glyphs must be pairwise distinct");
  return out;
}

}  // namespace

int Glyph::popcount_agreement(std::uint64_t other) const {
  constexpr std::uint64_t mask = (std::uint64_t{1} << kGlyphBits) - 1;
  return kGlyphBits - std::popcount((bits ^ other) & mask);
}

const GlyphFont& GlyphFont::standard() {
  static const GlyphFont font(build());
  return font;
}

const Glyph* GlyphFont::find(char ch) const {
  for (const Glyph& g : glyphs_)
    if (g.ch == ch) return &g;
  return nullptr;
}

std::pair<char, int> GlyphFont::best_match(std::uint64_t observed) const {
  char best = '?';
  int score = -1;
  for (const Glyph& g : glyphs_) {
    int s = g.popcount_agreement(observed);
    if (s > score) {
      score = s;
      best = g.ch;
    }
  }
  return {best, score};
}

}  // namespace signlp::scene
