#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "signlp/raster.hpp"
#include "signlp/scene.hpp"
#include "signlp/term.hpp"

namespace signlp::facts {

using scene::Raster;
using scene::Rgb;

class EmptyMask : public std::runtime_error {
 public:
  explicit EmptyMask(const std::string& what) : std::runtime_error(what) {}
};

enum class ColorClass { Red, White, Blue, Yellow, Black, Green, Orange };

std::string to_string(ColorClass c);

// Per-class binary masks after 3x3 morphological open+close, plus the set of
// classes whose cleaned area is at least 2% of all classified pixels.
struct ColorMasks {
  int width = 0, height = 0;
  std::vector<std::pair<ColorClass, scene::Mask>> masks;  // non-empty classes
  std::vector<ColorClass> present;  // over the area threshold, fixed class order
  scene::Mask any;                  // union of all cleaned class masks

  // Pre-morphology per-pixel classification; thin structures such as legend
  // strokes survive only here, so glyph reading uses the raw masks.
  std::vector<std::pair<ColorClass, scene::Mask>> raw_masks;

  const scene::Mask* mask_for(ColorClass c) const;
  const scene::Mask* raw_for(ColorClass c) const;
};

ColorMasks classify_colors(const Raster& img);

// Shape of the largest connected region of classified pixels: Moore boundary
// trace, Douglas-Peucker at 2% of the perimeter, then vertex-count
// classification; 8-gons and circles split on min/max contour radius.
scene::Shape detect_shape(const ColorMasks& cm);

struct LegendToken {
  bool is_number = false;
  std::string text;
  bool operator==(const LegendToken&) const = default;
};

// Reads the legend row: glyph components are classified pixels that differ
// from the dominant fill class, excluding the border ring; each component is
// normalized to a 5x7 grid and accepted when the best font match agrees on
// at least 26 of 35 bits.
std::optional<LegendToken> read_legend(const ColorMasks& cm);

// Size of the multiset intersection of the two words' letters.
int letters_in_common(const std::string& a, const std::string& b);

struct Extraction {
  std::vector<ColorClass> colors;  // present classes, fixed class order
  scene::Shape shape = scene::Shape::Octagon;
  std::optional<LegendToken> token;
};

Extraction extract(const Raster& img);

// Ground facts for one sign: color/2, shape/2, then has_word/2 +
// closely_match/2 (lexicon words sharing >= 3 letters) or number/2 +
// digits/2. Legend entities use deterministic names <sign>_w<k> /
// <sign>_n<k>. The sign/1 type fact is emitted separately (sign_fact).
std::vector<logic::Clause> emit_facts(const std::string& sign_id,
                                      const Extraction& ex,
                                      const std::vector<std::string>& lexicon);

// sign(<id>). type fact accompanying a FactSet.
logic::Clause sign_fact(const std::string& sign_id);

// known_word/1 facts for the lexicon, shared across signs.
std::vector<logic::Clause> lexicon_facts(const std::vector<std::string>& lexicon);

}  // namespace signlp::facts
