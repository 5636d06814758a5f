#include "signlp/scene.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "signlp/font.hpp"

namespace signlp::scene {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Rgb kBackground{128, 128, 128};
constexpr double kBorderFraction = 0.08;   // ring width as a fraction of scale
constexpr double kLegendHeight = 0.60;     // nominal glyph height / sign size
// Row width cap as a fraction of the sign size. Tighter than the 80% hard
// error bound so glyph rows clear the border ring on every shape even at the
// rotation extremes.
constexpr double kLegendMaxWidth = 0.62;

struct Vec2 {
  double x = 0, y = 0;
};

Vec2 rotate(Vec2 v, double rad) {
  return {v.x * std::cos(rad) - v.y * std::sin(rad),
          v.x * std::sin(rad) + v.y * std::cos(rad)};
}

// Outline vertices around the origin for a sign `scale` pixels across.
std::vector<Vec2> outline(Shape shape, double scale, double rad) {
  const double r = scale / 2.0;
  std::vector<double> angles_deg;
  std::vector<Vec2> pts;
  switch (shape) {
    case Shape::Octagon:
      for (int k = 0; k < 8; ++k) angles_deg.push_back(22.5 + 45.0 * k);
      break;
    case Shape::Circle:
      for (int k = 0; k < 64; ++k) angles_deg.push_back(k * 360.0 / 64);
      break;
    case Shape::Triangle:  // point-down yield outline
      angles_deg = {90, 210, 330};
      break;
    case Shape::Diamond:
      angles_deg = {0, 90, 180, 270};
      break;
    case Shape::Rectangle: {
      const double hw = r, hh = 0.375 * scale;
      for (Vec2 v : {Vec2{-hw, -hh}, Vec2{hw, -hh}, Vec2{hw, hh}, Vec2{-hw, hh}})
        pts.push_back(rotate(v, rad));
      return pts;
    }
  }
  for (double a : angles_deg) {
    double t = a * kPi / 180.0;
    pts.push_back(rotate({r * std::cos(t), r * std::sin(t)}, rad));
  }
  return pts;
}

bool point_in_polygon(const std::vector<Vec2>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2 &a = poly[i], &b = poly[j];
    if ((a.y > y) != (b.y > y) &&
        x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x)
      in = !in;
  }
  return in;
}

void validate(const SignSpec& spec) {
  if (spec.sign_id.empty()) throw InvalidSpec("sign_id must be non-empty");
  if (spec.scale <= 0) throw InvalidSpec("scale must be positive");
  if (spec.rotation_deg < -15.0 || spec.rotation_deg > 15.0)
    throw InvalidSpec("rotation must be within [-15, 15] degrees");
  if (spec.legend.kind != Legend::Kind::None) {
    if (spec.legend.text.empty())
      throw InvalidSpec("legend text must be non-empty");
    const GlyphFont& font = GlyphFont::standard();
    for (char ch : spec.legend.text) {
      bool digit = ch >= '0' && ch <= '9';
      if (spec.legend.kind == Legend::Kind::Number && !digit)
        throw InvalidSpec("number legends may contain digits only");
      if (spec.legend.kind == Legend::Kind::Word && digit)
        throw InvalidSpec("word legends may contain letters only");
      if (!font.find(ch))
        throw InvalidSpec(std::string("no glyph for character '") + ch + "'");
    }
  }
}

// Legend glyphs are drawn axis-aligned regardless of sign rotation; small
// rotations keep them inside the fill and the reader stays grid-based.
void draw_legend(const SignSpec& spec, Raster& img, Mask& glyphs, double cx,
                 double cy) {
  if (spec.legend.kind == Legend::Kind::None) return;
  const int n = static_cast<int>(spec.legend.text.size());
  const int cells = n * (kGlyphCols + 1) - 1;  // one-cell gap between glyphs
  double cell = kLegendHeight * spec.scale / kGlyphRows;
  cell = std::min(cell, kLegendMaxWidth * spec.scale / cells);
  if (cell < 1.0)
    throw LegendTooLong("legend '" + spec.legend.text + "' does not fit a " +
                        std::to_string(spec.scale) + "px sign");
  const Rgb ink = anchor_rgb(spec.border_color);
  const double x0 = cx - cells * cell / 2.0;
  const double y0 = cy - kGlyphRows * cell / 2.0;
  const GlyphFont& font = GlyphFont::standard();
  for (int i = 0; i < n; ++i) {
    const Glyph* g = font.find(spec.legend.text[i]);
    for (int r = 0; r < kGlyphRows; ++r) {
      for (int c = 0; c < kGlyphCols; ++c) {
        if (!g->on(c, r)) continue;
        const double gx = x0 + (i * (kGlyphCols + 1) + c) * cell;
        const double gy = y0 + r * cell;
        for (int py = static_cast<int>(std::floor(gy));
             py < static_cast<int>(std::ceil(gy + cell)); ++py) {
          for (int px = static_cast<int>(std::floor(gx));
               px < static_cast<int>(std::ceil(gx + cell)); ++px) {
            const double mx = px + 0.5, my = py + 0.5;
            if (mx < gx || mx >= gx + cell || my < gy || my >= gy + cell)
              continue;
            if (!img.inside(px, py)) continue;
            img.at(px, py) = ink;
            glyphs.set(px, py);
          }
        }
      }
    }
  }
}

double dist_to_segment(double px, double py, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - px, ey = a.y + t * dy - py;
  return std::hypot(ex, ey);
}

std::uint8_t clamp_channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

Rgb blend(Rgb under, Rgb over, double alpha) {
  return {clamp_channel(under.r * (1 - alpha) + over.r * alpha),
          clamp_channel(under.g * (1 - alpha) + over.g * alpha),
          clamp_channel(under.b * (1 - alpha) + over.b * alpha)};
}

struct Bounds {
  int minx = 0, miny = 0, maxx = -1, maxy = -1;
  double cx() const { return (minx + maxx + 1) / 2.0; }
  double cy() const { return (miny + maxy + 1) / 2.0; }
  double w() const { return maxx - minx + 1; }
  double h() const { return maxy - miny + 1; }
};

Bounds mask_bounds(const Mask& m) {
  Bounds b{m.width(), m.height(), -1, -1};
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.get(x, y)) continue;
      b.minx = std::min(b.minx, x);
      b.miny = std::min(b.miny, y);
      b.maxx = std::max(b.maxx, x);
      b.maxy = std::max(b.maxy, y);
    }
  }
  return b;
}

}  // namespace

std::string to_string(Shape s) {
  switch (s) {
    case Shape::Octagon: return "octagon";
    case Shape::Circle: return "circle";
    case Shape::Triangle: return "triangle";
    case Shape::Diamond: return "diamond";
    case Shape::Rectangle: return "rectangle";
  }
  return "octagon";
}

std::string to_string(ColorName c) {
  switch (c) {
    case ColorName::Red: return "red";
    case ColorName::White: return "white";
    case ColorName::Blue: return "blue";
    case ColorName::Yellow: return "yellow";
    case ColorName::Black: return "black";
    case ColorName::Green: return "green";
    case ColorName::Orange: return "orange";
  }
  return "red";
}

Rgb anchor_rgb(ColorName c) {
  switch (c) {
    case ColorName::Red: return {204, 0, 0};
    case ColorName::White: return {255, 255, 255};
    case ColorName::Blue: return {0, 51, 204};
    case ColorName::Yellow: return {255, 204, 0};
    case ColorName::Black: return {0, 0, 0};
    case ColorName::Green: return {0, 153, 51};
    case ColorName::Orange: return {255, 128, 0};
  }
  return {204, 0, 0};
}

Scene render_scene(const SignSpec& spec) {
  validate(spec);
  const int side = static_cast<int>(std::lround(spec.scale * 1.25));
  const double cx = side / 2.0, cy = side / 2.0;
  const double rad = spec.rotation_deg * kPi / 180.0;

  const std::vector<Vec2> outer = outline(spec.shape, spec.scale, rad);
  const double inner_scale =
      spec.scale * std::max(0.0, 1.0 - 2.0 * kBorderFraction);
  const std::vector<Vec2> inner = outline(spec.shape, inner_scale, rad);

  Scene sc{spec, Raster(side, side, kBackground), Mask(side, side),
           Mask(side, side)};
  const Rgb fill = anchor_rgb(spec.fill_color);
  const Rgb border = anchor_rgb(spec.border_color);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const double px = x + 0.5 - cx, py = y + 0.5 - cy;
      if (!point_in_polygon(outer, px, py)) continue;
      sc.sign_mask.set(x, y);
      sc.raster.at(x, y) = point_in_polygon(inner, px, py) ? fill : border;
    }
  }
  draw_legend(spec, sc.raster, sc.glyph_mask, cx, cy);
  return sc;
}

Raster render(const SignSpec& spec) { return render_scene(spec).raster; }

PerturbResult perturb(const Scene& scene, const std::vector<Perturbation>& ps,
                      std::uint64_t seed) {
  PerturbResult out{scene.raster, 0.0};
  const Bounds b = mask_bounds(scene.sign_mask);
  if (b.maxx < b.minx) return out;
  Mask covered(out.raster.width(), out.raster.height());

  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    const Perturbation& p = ps[pi];
    switch (p.kind) {
      case Perturbation::Kind::Sticker: {
        const double x0 = b.cx() + (p.x - p.w / 2) * b.w();
        const double x1 = b.cx() + (p.x + p.w / 2) * b.w();
        const double y0 = b.cy() + (p.y - p.h / 2) * b.h();
        const double y1 = b.cy() + (p.y + p.h / 2) * b.h();
        for (int y = b.miny; y <= b.maxy; ++y) {
          for (int x = b.minx; x <= b.maxx; ++x) {
            const double mx = x + 0.5, my = y + 0.5;
            if (mx < x0 || mx >= x1 || my < y0 || my >= y1) continue;
            if (!scene.sign_mask.get(x, y)) continue;
            out.raster.at(x, y) = p.color;
            covered.set(x, y);
          }
        }
        break;
      }
      case Perturbation::Kind::GraffitiStroke: {
        if (p.polyline.size() < 2) break;
        std::vector<Vec2> pts;
        for (auto [fx, fy] : p.polyline)
          pts.push_back({b.cx() + fx * b.w(), b.cy() + fy * b.h()});
        const double half = p.stroke_width * b.w() / 2.0;
        for (int y = b.miny; y <= b.maxy; ++y) {
          for (int x = b.minx; x <= b.maxx; ++x) {
            if (!scene.sign_mask.get(x, y)) continue;
            const double mx = x + 0.5, my = y + 0.5;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
              if (dist_to_segment(mx, my, pts[i], pts[i + 1]) <= half) {
                out.raster.at(x, y) = p.color;
                covered.set(x, y);
                break;
              }
            }
          }
        }
        break;
      }
      case Perturbation::Kind::Stain: {
        const double ecx = b.cx() + p.x * b.w(), ecy = b.cy() + p.y * b.h();
        const double rx = p.w * b.w() / 2.0, ry = p.h * b.h() / 2.0;
        if (rx <= 0 || ry <= 0) break;
        for (int y = b.miny; y <= b.maxy; ++y) {
          for (int x = b.minx; x <= b.maxx; ++x) {
            if (!scene.sign_mask.get(x, y)) continue;
            const double dx = (x + 0.5 - ecx) / rx, dy = (y + 0.5 - ecy) / ry;
            if (dx * dx + dy * dy > 1.0) continue;
            out.raster.at(x, y) = blend(out.raster.at(x, y), p.color, p.alpha);
            if (p.alpha > 0.5) covered.set(x, y);
          }
        }
        break;
      }
      case Perturbation::Kind::SubtleNoise: {
        Rng noise(seed + 0x9e3779b97f4a7c15ULL * (pi + 1));
        for (int y = b.miny; y <= b.maxy; ++y) {
          for (int x = b.minx; x <= b.maxx; ++x) {
            if (!scene.sign_mask.get(x, y)) continue;
            Rgb& px = out.raster.at(x, y);
            const double a = p.amplitude;
            px = {clamp_channel(px.r + noise.real(-a, a)),
                  clamp_channel(px.g + noise.real(-a, a)),
                  clamp_channel(px.b + noise.real(-a, a))};
          }
        }
        break;
      }
    }
  }

  const std::size_t glyph_total = scene.glyph_mask.count();
  if (glyph_total > 0) {
    std::size_t hit = 0;
    for (int y = 0; y < covered.height(); ++y)
      for (int x = 0; x < covered.width(); ++x)
        if (covered.get(x, y) && scene.glyph_mask.get(x, y)) ++hit;
    out.occlusion = static_cast<double>(hit) / static_cast<double>(glyph_total);
  }
  return out;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::Rp2Subtle: return "rp2_subtle";
    case Variant::Rp2Graffiti: return "rp2_graffiti";
    case Variant::Rp2Art: return "rp2_art";
    case Variant::AdvCam: return "advcam";
  }
  return "base";
}

std::optional<Variant> variant_from_string(const std::string& s) {
  for (Variant v : {Variant::Base, Variant::Rp2Subtle, Variant::Rp2Graffiti,
                    Variant::Rp2Art, Variant::AdvCam})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::vector<Perturbation> make_attack(Variant v, Rng& rng) {
  std::vector<Perturbation> out;
  switch (v) {
    case Variant::Base:
      break;
    case Variant::Rp2Subtle: {
      Perturbation p;
      p.kind = Perturbation::Kind::SubtleNoise;
      p.amplitude = 8;
      p.severity = 1.0;
      out.push_back(p);
      break;
    }
    case Variant::Rp2Graffiti: {
      // Black sticker blotting out one legend glyph (the third of four, so
      // roughly a quarter of the glyph pixels read as occluded), white
      // sticker below the legend band. Clipping glyphs partially instead
      // would distort every character past the matcher's tolerance, while a
      // white sticker touching the glyphs would merge with them into one
      // unreadable component.
      for (int i = 0; i < 2; ++i) {
        Perturbation p;
        p.kind = Perturbation::Kind::Sticker;
        p.color = i == 0 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
        if (i == 0) {
          p.w = 0.155;
          p.h = 0.26;
          p.x = 0.0875 + rng.real(-0.005, 0.005);
          p.y = rng.real(-0.01, 0.01);
        } else {
          p.w = 0.28;
          p.h = 0.12;
          p.x = rng.real(-0.06, 0.06);
          p.y = 0.27 + rng.real(-0.02, 0.02);
        }
        p.severity = p.w * p.h;
        out.push_back(p);
      }
      break;
    }
    case Variant::Rp2Art: {
      // Four small rectangles scattered toward the corners.
      const double qx[4] = {-0.28, 0.28, -0.28, 0.28};
      const double qy[4] = {-0.28, -0.28, 0.28, 0.28};
      for (int i = 0; i < 4; ++i) {
        Perturbation p;
        p.kind = Perturbation::Kind::Sticker;
        p.color = i % 2 == 0 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
        p.w = 0.12;
        p.h = 0.10;
        p.x = qx[i] + rng.real(-0.04, 0.04);
        p.y = qy[i] + rng.real(-0.04, 0.04);
        p.severity = p.w * p.h;
        out.push_back(p);
      }
      break;
    }
    case Variant::AdvCam: {
      // Translucent weathering stains; low alpha keeps legend glyphs legible.
      static const Rgb palette[3] = {{150, 110, 70}, {150, 140, 90}, {130, 115, 95}};
      // Disjoint horizontal bands: overlapping stains would compound their
      // blends and push glyph pixels out of their color class.
      const int n = 1 + static_cast<int>(rng.below(3));
      for (int i = 0; i < n; ++i) {
        Perturbation p;
        p.kind = Perturbation::Kind::Stain;
        p.color = palette[rng.below(3)];
        p.x = (i - (n - 1) / 2.0) * 0.27 + rng.real(-0.03, 0.03);
        p.y = rng.real(-0.28, 0.28);
        p.w = rng.real(0.12, 0.20);
        p.h = rng.real(0.15, 0.35);
        p.alpha = rng.real(0.20, 0.42);
        p.severity = p.w * p.h;
        out.push_back(p);
      }
      break;
    }
  }
  return out;
}

namespace {

// Negative class templates; the cycle is half red-bearing (speed limits,
// yield) and half red-less (warning diamond, blue info rectangle) so small
// training samples can miss a discriminating feature.
enum class NegClass { Sp30, Sp45, Sp60, Yield, Diamond, Info };

constexpr NegClass kNegCycle[20] = {
    NegClass::Sp30, NegClass::Diamond, NegClass::Sp45,  NegClass::Info,
    NegClass::Sp60, NegClass::Diamond, NegClass::Yield, NegClass::Info,
    NegClass::Sp30, NegClass::Diamond, NegClass::Sp45,  NegClass::Info,
    NegClass::Sp60, NegClass::Diamond, NegClass::Yield, NegClass::Info,
    NegClass::Sp30, NegClass::Diamond, NegClass::Sp45,  NegClass::Info};

SignSpec negative_spec(NegClass cls, int index, Rng& rng) {
  SignSpec s;
  s.sign_id = "n" + std::to_string(index + 1);
  s.rotation_deg = static_cast<double>(rng.range(-8, 8));
  s.scale = static_cast<int>(rng.range(80, 120));
  switch (cls) {
    case NegClass::Sp30:
    case NegClass::Sp45:
    case NegClass::Sp60: {
      s.shape = Shape::Circle;
      s.fill_color = ColorName::White;
      s.border_color = ColorName::Red;
      const char* t = cls == NegClass::Sp30   ? "30"
                      : cls == NegClass::Sp45 ? "45"
                                              : "60";
      s.legend = Legend::number(t);
      break;
    }
    case NegClass::Yield:
      s.shape = Shape::Triangle;
      s.fill_color = ColorName::White;
      s.border_color = ColorName::Red;
      s.legend = Legend::none();
      break;
    case NegClass::Diamond:
      s.shape = Shape::Diamond;
      s.fill_color = ColorName::Yellow;
      s.border_color = ColorName::Black;
      s.legend = Legend::none();
      break;
    case NegClass::Info:
      s.shape = Shape::Rectangle;
      s.fill_color = ColorName::Blue;
      s.border_color = ColorName::White;
      s.legend = Legend::word("PARK");
      break;
  }
  return s;
}

}  // namespace

std::vector<DatasetItem> generate_dataset(const DatasetConfig& cfg) {
  if (cfg.positives < 0 || cfg.negatives < 0)
    throw InvalidSpec("dataset counts must be non-negative");
  Rng rng(cfg.seed);
  std::vector<DatasetItem> items;
  items.reserve(static_cast<std::size_t>(cfg.positives + cfg.negatives));

  auto emit = [&](SignSpec spec, bool positive) {
    Scene sc = render_scene(spec);
    DatasetItem item{std::move(spec), {}, positive, cfg.variant, 0.0};
    if (cfg.variant == Variant::Base) {
      item.raster = std::move(sc.raster);
    } else {
      const std::uint64_t noise_seed = rng.next();
      PerturbResult pr = perturb(sc, make_attack(cfg.variant, rng), noise_seed);
      item.raster = std::move(pr.raster);
      item.occlusion = pr.occlusion;
    }
    items.push_back(std::move(item));
  };

  for (int i = 0; i < cfg.positives; ++i) {
    SignSpec s;
    s.sign_id = "p" + std::to_string(i + 1);
    s.shape = Shape::Octagon;
    s.fill_color = ColorName::Red;
    s.border_color = ColorName::White;
    s.legend = Legend::word("STOP");
    s.rotation_deg = static_cast<double>(rng.range(-8, 8));
    s.scale = static_cast<int>(rng.range(80, 120));
    emit(std::move(s), true);
  }
  for (int i = 0; i < cfg.negatives; ++i)
    emit(negative_spec(kNegCycle[i % 20], i, rng), false);
  return items;
}

void save_dataset(const std::string& dir, const std::vector<DatasetItem>& items) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json manifest = nlohmann::json::array();
  for (const DatasetItem& it : items) {
    const std::string file = it.spec.sign_id + ".ppm";
    write_ppm((fs::path(dir) / file).string(), it.raster);
    manifest.push_back({{"id", it.spec.sign_id},
                        {"file", file},
                        {"label", it.positive ? "pos" : "neg"},
                        {"variant", to_string(it.variant)},
                        {"occlusion", it.occlusion},
                        {"shape", to_string(it.spec.shape)},
                        {"scale", it.spec.scale},
                        {"rotation_deg", it.spec.rotation_deg}});
  }
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

std::vector<DatasetItem> load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + dir);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed manifest.json: " + std::string(e.what()));
  }
  if (!manifest.is_array())
    throw std::runtime_error("manifest.json must be a JSON array");
  std::vector<DatasetItem> items;
  for (const auto& e : manifest) {
    DatasetItem it;
    it.spec.sign_id = e.at("id").get<std::string>();
    it.positive = e.at("label").get<std::string>() == "pos";
    if (auto v = variant_from_string(e.value("variant", "base")))
      it.variant = *v;
    it.occlusion = e.value("occlusion", 0.0);
    it.raster = read_ppm((fs::path(dir) / e.at("file").get<std::string>()).string());
    items.push_back(std::move(it));
  }
  return items;
}

}  // namespace signlp::scene
