#include "signlp/raster.hpp"

#include <fstream>
#include <sstream>

namespace signlp::scene {

std::size_t Mask::count() const {
  std::size_t n = 0;
  for (char b : bits_)
    if (b) ++n;
  return n;
}

std::string encode_ppm(const Raster& r) {
  std::ostringstream os;
  os << "P6\n" << r.width() << ' ' << r.height() << "\n255\n";
  for (const Rgb& p : r.pixels()) {
    os.put(static_cast<char>(p.r));
    os.put(static_cast<char>(p.g));
    os.put(static_cast<char>(p.b));
  }
  return os.str();
}

Raster decode_ppm(const std::string& bytes) {
  std::istringstream is(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  is >> magic >> w >> h >> maxval;
  if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
    throw std::runtime_error("not a P6/255 PPM");
  is.get();  // single whitespace after maxval
  Raster r(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int cr = is.get(), cg = is.get(), cb = is.get();
      if (cb == EOF) throw std::runtime_error("truncated PPM payload");
      r.at(x, y) = {static_cast<std::uint8_t>(cr), static_cast<std::uint8_t>(cg),
                    static_cast<std::uint8_t>(cb)};
    }
  }
  return r;
}

void write_ppm(const std::string& path, const Raster& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  std::string s = encode_ppm(r);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

Raster read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return decode_ppm(os.str());
}

}  // namespace signlp::scene
