#include "signlp/facts.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>
#include <tuple>

#include "signlp/font.hpp"

namespace signlp::facts {

namespace {

using scene::Mask;
using scene::Shape;

constexpr int kNumClasses = 7;
constexpr std::array<ColorClass, kNumClasses> kClassOrder = {
    ColorClass::Red,    ColorClass::White, ColorClass::Blue, ColorClass::Yellow,
    ColorClass::Black,  ColorClass::Green, ColorClass::Orange};

constexpr double kAreaThreshold = 0.02;   // of all classified pixels
constexpr double kCircleRadiusRatio = 0.95;
constexpr double kSimplifyEps = 0.02;     // of the contour perimeter
constexpr double kRingSpanFraction = 0.85;
constexpr int kMinComponentPixels = 8;
constexpr int kMinGlyphAgreement = 26;    // of 35 bits
constexpr int kMinCommonLetters = 3;

struct Hsv {
  double h = 0, s = 0, v = 0;  // h in degrees [0, 360)
};

Hsv to_hsv(Rgb p) {
  const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
  const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
  Hsv out;
  out.v = mx;
  out.s = mx > 0 ? 1.0 - mn / mx : 0.0;
  const double d = mx - mn;
  if (d > 0) {
    double h;
    if (mx == r)
      h = std::fmod((g - b) / d + 6.0, 6.0);
    else if (mx == g)
      h = (b - r) / d + 2.0;
    else
      h = (r - g) / d + 4.0;
    out.h = h * 60.0;
  }
  return out;
}

// One exclusive class per pixel; background and off-box pixels map to none.
std::optional<ColorClass> classify_pixel(Rgb p) {
  const Hsv c = to_hsv(p);
  if (c.v <= 0.20) return ColorClass::Black;
  if (c.s <= 0.18 && c.v >= 0.75) return ColorClass::White;
  if (c.s < 0.5 || c.v < 0.3) return std::nullopt;
  if (c.h <= 14.0 || c.h >= 346.0) return ColorClass::Red;
  if (c.h >= 15.0 && c.h < 40.0) return ColorClass::Orange;
  if (c.h >= 40.0 && c.h < 70.0) return ColorClass::Yellow;
  if (c.h >= 90.0 && c.h < 170.0) return ColorClass::Green;
  if (c.h >= 200.0 && c.h < 260.0) return ColorClass::Blue;
  return std::nullopt;
}

Mask erode3(const Mask& m) {
  Mask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1 && all; ++dx)
          if (!m.get(x + dx, y + dy)) all = false;
      if (all) out.set(x, y);
    }
  return out;
}

Mask dilate3(const Mask& m) {
  Mask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (int dy = -1; dy <= 1 && !any; ++dy)
        for (int dx = -1; dx <= 1 && !any; ++dx)
          if (m.get(x + dx, y + dy)) any = true;
      if (any) out.set(x, y);
    }
  return out;
}

Mask open_close(const Mask& m) { return erode3(dilate3(dilate3(erode3(m)))); }

struct Pt {
  int x = 0, y = 0;
};

struct Component {
  std::vector<Pt> pixels;
  int minx = 0, miny = 0, maxx = 0, maxy = 0;
  int width() const { return maxx - minx + 1; }
  int height() const { return maxy - miny + 1; }
};

std::vector<Component> components(const Mask& m, bool eight_connected) {
  Mask seen(m.width(), m.height());
  std::vector<Component> out;
  for (int sy = 0; sy < m.height(); ++sy) {
    for (int sx = 0; sx < m.width(); ++sx) {
      if (!m.get(sx, sy) || seen.get(sx, sy)) continue;
      Component comp{{}, sx, sy, sx, sy};
      std::vector<Pt> stack{{sx, sy}};
      seen.set(sx, sy);
      while (!stack.empty()) {
        Pt p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        comp.minx = std::min(comp.minx, p.x);
        comp.miny = std::min(comp.miny, p.y);
        comp.maxx = std::max(comp.maxx, p.x);
        comp.maxy = std::max(comp.maxy, p.y);
        const Pt nbrs[8] = {{p.x + 1, p.y},     {p.x - 1, p.y},
                            {p.x, p.y + 1},     {p.x, p.y - 1},
                            {p.x + 1, p.y + 1}, {p.x + 1, p.y - 1},
                            {p.x - 1, p.y + 1}, {p.x - 1, p.y - 1}};
        const int nn = eight_connected ? 8 : 4;
        for (int ni = 0; ni < nn; ++ni) {
          const Pt n = nbrs[ni];
          if (m.get(n.x, n.y) && !seen.get(n.x, n.y)) {
            seen.set(n.x, n.y);
            stack.push_back(n);
          }
        }
      }
      out.push_back(std::move(comp));
    }
  }
  return out;
}

// Moore-neighbor tracing with Jacob's stopping criterion, clockwise in
// screen coordinates.
std::vector<Pt> trace_boundary(const Mask& m) {
  Pt start{-1, -1};
  for (int y = 0; y < m.height() && start.x < 0; ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m.get(x, y)) {
        start = {x, y};
        break;
      }
  if (start.x < 0) throw EmptyMask("no pixels to trace");

  // Neighbor offsets clockwise starting at west.
  const Pt off[8] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1},
                     {1, 0},  {1, 1},   {0, 1},  {-1, 1}};
  std::vector<Pt> contour{start};
  Pt cur = start;
  int backtrack = 0;  // we scanned from the west to find the start pixel
  // Terminate when a (pixel, backtrack) state repeats: the walk is a
  // deterministic function of that state, so a repeat means a full cycle.
  std::set<std::tuple<int, int, int>> states;
  while (states.insert({cur.x, cur.y, backtrack}).second) {
    bool found = false;
    int k = backtrack;
    for (int step = 0; step < 8; ++step) {
      k = (k + 1) % 8;
      const Pt n{cur.x + off[k].x, cur.y + off[k].y};
      if (m.get(n.x, n.y)) {
        // Back-track for the next scan: the neighbor just before this one,
        // seen from the new pixel.
        const int prev = (k + 7) % 8;
        const Pt bp{cur.x + off[prev].x, cur.y + off[prev].y};
        cur = n;
        backtrack = 0;
        for (int j = 0; j < 8; ++j)
          if (cur.x + off[j].x == bp.x && cur.y + off[j].y == bp.y)
            backtrack = j;
        found = true;
        break;
      }
    }
    if (!found) break;  // isolated pixel
    contour.push_back(cur);
  }
  for (std::size_t i = 1; i < contour.size(); ++i) {
    if (contour[i].x == start.x && contour[i].y == start.y) {
      contour.resize(i);
      break;
    }
  }
  return contour;
}

double point_line_dist(Pt p, Pt a, Pt b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (len == 0) return std::hypot(p.x - a.x, p.y - a.y);
  return std::abs(dy * (p.x - a.x) - dx * (p.y - a.y)) / len;
}

void douglas_peucker(const std::vector<Pt>& pts, std::size_t i, std::size_t j,
                     double eps, std::vector<char>& keep) {
  if (j <= i + 1) return;
  double best = -1;
  std::size_t bi = i;
  for (std::size_t k = i + 1; k < j; ++k) {
    const double d = point_line_dist(pts[k], pts[i], pts[j]);
    if (d > best) {
      best = d;
      bi = k;
    }
  }
  if (best > eps) {
    keep[bi] = 1;
    douglas_peucker(pts, i, bi, eps, keep);
    douglas_peucker(pts, bi, j, eps, keep);
  }
}

// Closed-curve simplification: split at the two mutually farthest points,
// then run the open-chain pass on both halves.
std::vector<Pt> simplify_closed(const std::vector<Pt>& contour, double eps) {
  const std::size_t n = contour.size();
  if (n < 3) return contour;
  std::size_t a = 0, b = 0;
  double best = -1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = contour[i].x - contour[j].x;
      const double dy = contour[i].y - contour[j].y;
      const double d = dx * dx + dy * dy;
      if (d > best) {
        best = d;
        a = i;
        b = j;
      }
    }
  }
  std::vector<Pt> rot(n + 1);
  for (std::size_t i = 0; i < n; ++i) rot[i] = contour[(a + i) % n];
  rot[n] = contour[a];
  const std::size_t mid = (b + n - a) % n;
  std::vector<char> keep(n + 1, 0);
  keep[0] = keep[mid] = 1;
  douglas_peucker(rot, 0, mid, eps, keep);
  douglas_peucker(rot, mid, n, eps, keep);
  std::vector<Pt> out;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.push_back(rot[i]);
  return out;
}

}  // namespace

std::string to_string(ColorClass c) {
  switch (c) {
    case ColorClass::Red: return "red";
    case ColorClass::White: return "white";
    case ColorClass::Blue: return "blue";
    case ColorClass::Yellow: return "yellow";
    case ColorClass::Black: return "black";
    case ColorClass::Green: return "green";
    case ColorClass::Orange: return "orange";
  }
  return "red";
}

const scene::Mask* ColorMasks::mask_for(ColorClass c) const {
  for (const auto& [cls, m] : masks)
    if (cls == c) return &m;
  return nullptr;
}

const scene::Mask* ColorMasks::raw_for(ColorClass c) const {
  for (const auto& [cls, m] : raw_masks)
    if (cls == c) return &m;
  return nullptr;
}

ColorMasks classify_colors(const Raster& img) {
  ColorMasks out;
  out.width = img.width();
  out.height = img.height();
  out.any = Mask(img.width(), img.height());

  std::array<Mask, kNumClasses> raw;
  std::array<bool, kNumClasses> nonempty{};
  for (auto& m : raw) m = Mask(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (auto cls = classify_pixel(img.at(x, y))) {
        const int i = static_cast<int>(*cls);
        raw[static_cast<std::size_t>(i)].set(x, y);
        nonempty[static_cast<std::size_t>(i)] = true;
      }
    }
  }

  std::size_t total = 0;
  std::array<std::size_t, kNumClasses> area{};
  std::array<Mask, kNumClasses> clean;
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    if (!nonempty[i]) continue;
    clean[i] = open_close(raw[i]);
    area[i] = clean[i].count();
    total += area[i];
  }
  for (ColorClass c : kClassOrder) {
    const auto i = static_cast<std::size_t>(c);
    if (!nonempty[i] || area[i] == 0) continue;
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        if (clean[i].get(x, y)) out.any.set(x, y);
    out.masks.emplace_back(c, std::move(clean[i]));
    out.raw_masks.emplace_back(c, std::move(raw[i]));
    if (total > 0 &&
        static_cast<double>(area[i]) >= kAreaThreshold * static_cast<double>(total))
      out.present.push_back(c);
  }
  return out;
}

scene::Shape detect_shape(const ColorMasks& cm) {
  const std::vector<Component> comps = components(cm.any, false);
  if (comps.empty()) throw EmptyMask("no classified pixels");
  const Component* largest = &comps[0];
  for (const Component& c : comps)
    if (c.pixels.size() > largest->pixels.size()) largest = &c;

  Mask region(cm.width, cm.height);
  for (Pt p : largest->pixels) region.set(p.x, p.y);
  const std::vector<Pt> contour = trace_boundary(region);
  if (contour.size() < 8) return Shape::Rectangle;

  double perimeter = 0;
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const Pt& a = contour[i];
    const Pt& b = contour[(i + 1) % contour.size()];
    perimeter += std::hypot(a.x - b.x, a.y - b.y);
  }
  const std::vector<Pt> verts = simplify_closed(contour, kSimplifyEps * perimeter);

  if (verts.size() == 3) return Shape::Triangle;
  if (verts.size() == 4) {
    // Rectangles sit nearly axis-aligned; diamonds have ~45-degree edges.
    double longest = -1, angle = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      const Pt& a = verts[i];
      const Pt& b = verts[(i + 1) % 4];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      if (len > longest) {
        longest = len;
        angle = std::atan2(std::abs(static_cast<double>(b.y - a.y)),
                           std::abs(static_cast<double>(b.x - a.x))) *
                180.0 / 3.14159265358979323846;
      }
    }
    const double dev = std::min(angle, 90.0 - angle);
    return dev < 30.0 ? Shape::Rectangle : Shape::Diamond;
  }

  double cx = 0, cy = 0;
  for (Pt p : contour) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(contour.size());
  cy /= static_cast<double>(contour.size());
  double rmin = 1e18, rmax = 0;
  for (Pt p : contour) {
    const double r = std::hypot(p.x - cx, p.y - cy);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  return rmax > 0 && rmin / rmax >= kCircleRadiusRatio ? Shape::Circle
                                                       : Shape::Octagon;
}

std::optional<LegendToken> read_legend(const ColorMasks& cm) {
  if (cm.present.empty()) return std::nullopt;

  ColorClass fill = cm.present[0];
  std::size_t fill_area = 0;
  for (ColorClass c : cm.present) {
    const Mask* m = cm.mask_for(c);
    const std::size_t a = m ? m->count() : 0;
    if (a > fill_area) {
      fill_area = a;
      fill = c;
    }
  }

  // Raw (pre-morphology) non-fill pixels: thin glyph strokes only survive
  // before the 3x3 open pass.
  Mask candidates(cm.width, cm.height);
  for (const auto& [cls, m] : cm.raw_masks) {
    if (cls == fill) continue;
    for (int y = 0; y < cm.height; ++y)
      for (int x = 0; x < cm.width; ++x)
        if (m.get(x, y)) candidates.set(x, y);
  }

  Component sign_box{{}, cm.width, cm.height, -1, -1};
  for (int y = 0; y < cm.height; ++y)
    for (int x = 0; x < cm.width; ++x)
      if (cm.any.get(x, y)) {
        sign_box.minx = std::min(sign_box.minx, x);
        sign_box.miny = std::min(sign_box.miny, y);
        sign_box.maxx = std::max(sign_box.maxx, x);
        sign_box.maxy = std::max(sign_box.maxy, y);
      }
  if (sign_box.maxx < 0) return std::nullopt;

  // 8-connected: several font glyphs join strokes only diagonally.
  std::vector<Component> comps = components(candidates, true);
  std::erase_if(comps, [&](const Component& c) {
    if (static_cast<int>(c.pixels.size()) < kMinComponentPixels) return true;
    // The border ring spans (almost) the whole sign box; glyphs never do.
    return c.width() >= kRingSpanFraction * sign_box.width() ||
           c.height() >= kRingSpanFraction * sign_box.height();
  });
  if (comps.empty()) return std::nullopt;
  std::sort(comps.begin(), comps.end(),
            [](const Component& a, const Component& b) { return a.minx < b.minx; });

  const scene::GlyphFont& font = scene::GlyphFont::standard();
  std::string text;
  for (const Component& comp : comps) {
    const double cw = comp.width() / static_cast<double>(scene::kGlyphCols);
    const double ch = comp.height() / static_cast<double>(scene::kGlyphRows);
    std::array<int, scene::kGlyphBits> count{};
    for (Pt p : comp.pixels) {
      const int c = std::min(scene::kGlyphCols - 1,
                             static_cast<int>((p.x - comp.minx) / cw));
      const int r = std::min(scene::kGlyphRows - 1,
                             static_cast<int>((p.y - comp.miny) / ch));
      ++count[static_cast<std::size_t>(r * scene::kGlyphCols + c)];
    }
    std::uint64_t observed = 0;
    for (int i = 0; i < scene::kGlyphBits; ++i)
      if (count[static_cast<std::size_t>(i)] >= 0.5 * cw * ch)
        observed |= std::uint64_t{1} << i;
    const auto [ch_best, agreement] = font.best_match(observed);
    if (agreement >= kMinGlyphAgreement) text.push_back(ch_best);
  }
  if (text.empty()) return std::nullopt;

  const bool all_digits =
      std::all_of(text.begin(), text.end(),
                  [](char c) { return c >= '0' && c <= '9'; });
  if (!all_digits)
    for (char& c : text)
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return LegendToken{all_digits, text};
}

int letters_in_common(const std::string& a, const std::string& b) {
  std::array<int, 26> ca{}, cb{};
  for (char c : a) {
    const int i = std::tolower(static_cast<unsigned char>(c)) - 'a';
    if (i >= 0 && i < 26) ++ca[static_cast<std::size_t>(i)];
  }
  for (char c : b) {
    const int i = std::tolower(static_cast<unsigned char>(c)) - 'a';
    if (i >= 0 && i < 26) ++cb[static_cast<std::size_t>(i)];
  }
  int n = 0;
  for (int i = 0; i < 26; ++i)
    n += std::min(ca[static_cast<std::size_t>(i)], cb[static_cast<std::size_t>(i)]);
  return n;
}

Extraction extract(const Raster& img) {
  Extraction out;
  ColorMasks cm = classify_colors(img);
  out.colors = cm.present;
  out.shape = detect_shape(cm);
  out.token = read_legend(cm);
  return out;
}

std::vector<logic::Clause> emit_facts(const std::string& sign_id,
                                      const Extraction& ex,
                                      const std::vector<std::string>& lexicon) {
  using logic::Atom;
  using logic::Clause;
  using logic::Term;
  std::vector<Clause> out;
  auto fact = [&](std::string pred, std::vector<Term> args) {
    out.push_back(Clause{Atom{std::move(pred), std::move(args)}, {}});
  };
  const Term sign = Term::constant(sign_id);
  for (ColorClass c : ex.colors)
    fact("color", {sign, Term::constant(to_string(c))});
  fact("shape", {sign, Term::constant(scene::to_string(ex.shape))});
  if (ex.token) {
    if (ex.token->is_number) {
      const Term entity = Term::constant(sign_id + "_n1");
      fact("number", {sign, entity});
      fact("digits", {entity, Term::constant(ex.token->text)});
    } else {
      const Term entity = Term::constant(sign_id + "_w1");
      fact("has_word", {sign, entity});
      for (const std::string& w : lexicon)
        if (letters_in_common(ex.token->text, w) >= kMinCommonLetters)
          fact("closely_match", {entity, Term::constant(w)});
    }
  }
  return out;
}

logic::Clause sign_fact(const std::string& sign_id) {
  return logic::Clause{
      logic::Atom{"sign", {logic::Term::constant(sign_id)}}, {}};
}

std::vector<logic::Clause> lexicon_facts(const std::vector<std::string>& lexicon) {
  std::vector<logic::Clause> out;
  for (const std::string& w : lexicon)
    out.push_back(logic::Clause{
        logic::Atom{"known_word", {logic::Term::constant(w)}}, {}});
  return out;
}

}  // namespace signlp::facts
