#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace signlp::scene {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// Row-major 8-bit RGB pixel grid, fully opaque.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgb fill = {0, 0, 0})
      : w_(width), h_(height), px_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return w_; }
  int height() const { return h_; }
  Rgb& at(int x, int y) { return px_[static_cast<std::size_t>(y) * w_ + x]; }
  const Rgb& at(int x, int y) const { return px_[static_cast<std::size_t>(y) * w_ + x]; }
  bool inside(int x, int y) const { return x >= 0 && x < w_ && y >= 0 && y < h_; }
  const std::vector<Rgb>& pixels() const { return px_; }

  bool operator==(const Raster&) const = default;

 private:
  int w_ = 0;
  int h_ = 0;
  std::vector<Rgb> px_;
};

// Binary mask with raster dimensions.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false)
      : w_(width), h_(height), bits_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return w_; }
  int height() const { return h_; }
  bool get(int x, int y) const {
    return x >= 0 && x < w_ && y >= 0 && y < h_ &&
           bits_[static_cast<std::size_t>(y) * w_ + x];
  }
  void set(int x, int y, bool v = true) {
    if (x >= 0 && x < w_ && y >= 0 && y < h_)
      bits_[static_cast<std::size_t>(y) * w_ + x] = v;
  }
  std::size_t count() const;

 private:
  int w_ = 0;
  int h_ = 0;
  std::vector<char> bits_;
};

// Binary PPM (P6) interchange, bit-exact.
std::string encode_ppm(const Raster& r);
Raster decode_ppm(const std::string& bytes);
void write_ppm(const std::string& path, const Raster& r);
Raster read_ppm(const std::string& path);

}  // namespace signlp::scene
