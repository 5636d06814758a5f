#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signlp/raster.hpp"
#include "signlp/rng.hpp"

namespace signlp::scene {

class InvalidSpec : public std::runtime_error {
 public:
  explicit InvalidSpec(const std::string& what) : std::runtime_error(what) {}
};

class LegendTooLong : public InvalidSpec {
 public:
  explicit LegendTooLong(const std::string& what) : InvalidSpec(what) {}
};

enum class Shape { Octagon, Circle, Triangle, Diamond, Rectangle };
enum class ColorName { Red, White, Blue, Yellow, Black, Green, Orange };

std::string to_string(Shape s);
std::string to_string(ColorName c);
Rgb anchor_rgb(ColorName c);

struct Legend {
  enum class Kind { None, Word, Number };
  Kind kind = Kind::None;
  std::string text;  // A-Z for words, digits for numbers

  static Legend none() { return {}; }
  static Legend word(std::string t) { return {Kind::Word, std::move(t)}; }
  static Legend number(std::string t) { return {Kind::Number, std::move(t)}; }
};

// Synthetic sign description. Rendering is a pure function of the spec.
struct SignSpec {
  std::string sign_id;
  Shape shape = Shape::Octagon;
  ColorName fill_color = ColorName::Red;
  ColorName border_color = ColorName::White;
  Legend legend;
  double rotation_deg = 0;  // [-15, 15]
  int scale = 96;           // sign size in pixels across
};

// Raster plus the masks the perturbation layer needs: which pixels belong to
// the sign polygon and which belong to legend glyphs.
struct Scene {
  SignSpec spec;
  Raster raster;
  Mask sign_mask;
  Mask glyph_mask;
};

Scene render_scene(const SignSpec& spec);
Raster render(const SignSpec& spec);

// Adversarial overlay. Geometry is expressed in fractions of the sign
// bounding box, centered on the sign ((0,0) is the sign center).
struct Perturbation {
  enum class Kind { Sticker, GraffitiStroke, Stain, SubtleNoise };
  Kind kind = Kind::Sticker;
  double x = 0, y = 0;  // center
  double w = 0, h = 0;  // extent (rect / ellipse bounding box)
  std::vector<std::pair<double, double>> polyline;  // graffiti stroke
  double stroke_width = 0.04;
  Rgb color{0, 0, 0};
  double alpha = 1.0;     // stain opacity, <= 0.45 for camouflage stains
  double amplitude = 8;   // subtle noise, per-channel units
  double severity = 0;    // fraction of sign area affected
};

struct PerturbResult {
  Raster raster;
  // Legend glyph pixels covered by opaque overlays / total glyph pixels.
  double occlusion = 0;
};

// Applies overlays in order; pixels outside the sign polygon are unchanged.
// Pseudo-randomness (noise) derives from `seed` only.
PerturbResult perturb(const Scene& scene, const std::vector<Perturbation>& ps,
                      std::uint64_t seed);

enum class Variant { Base, Rp2Subtle, Rp2Graffiti, Rp2Art, AdvCam };
std::string to_string(Variant v);
std::optional<Variant> variant_from_string(const std::string& s);

// Deterministic attack layouts: subtle = low-amplitude full-sign noise,
// graffiti = two black/white stickers above and below the legend, art = four
// small black/white rectangles, advcam = 1-3 low-alpha stains.
std::vector<Perturbation> make_attack(Variant v, Rng& rng);

struct DatasetConfig {
  int positives = 20;
  int negatives = 20;
  Variant variant = Variant::Base;
  std::uint64_t seed = 0;
};

struct DatasetItem {
  SignSpec spec;
  Raster raster;  // perturbed when the variant is an attack
  bool positive = false;
  Variant variant = Variant::Base;
  double occlusion = 0;
};

// Deterministic labeled corpus: positives are jittered stop signs; negatives
// cycle through speed limits 30/45/60, yield, warning diamond, and a blue
// info rectangle. Same config => byte-identical corpus.
std::vector<DatasetItem> generate_dataset(const DatasetConfig& cfg);

// PPM files plus manifest.json in `dir`.
void save_dataset(const std::string& dir, const std::vector<DatasetItem>& items);
std::vector<DatasetItem> load_dataset(const std::string& dir);

}  // namespace signlp::scene
