#include "so21/nonrel/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "so21/errors.hpp"

namespace so21::nonrel {

namespace {

std::filesystem::path with_ext(std::filesystem::path stem, const char* ext) {
  stem += ext;
  return stem;
}

void put_le(std::ostream& os, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (char& b : bytes) {
    b = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  os.write(bytes, 8);
}

double get_le(std::istream& is) {
  unsigned char bytes[8];
  is.read(reinterpret_cast<char*>(bytes), 8);
  if (!is) throw InvalidArgument("snapshot: truncated raw block");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_csv(const WaveField& field, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("snapshot: cannot open " + path.string());
  os << "x,y,re_psi1,im_psi1,re_psi2,im_psi2\n" << std::setprecision(17);
  const Grid2D& g = field.grid();
  const std::size_t n = g.n();
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const auto i = static_cast<Eigen::Index>(iy * n + ix);
      const cplx a = field.component(0)[i];
      const cplx b = field.components() == 2 ? field.component(1)[i] : cplx{};
      os << g.coordinate(ix) << ',' << g.coordinate(iy) << ',' << a.real() << ',' << a.imag()
         << ',' << b.real() << ',' << b.imag() << '\n';
    }
}

void write_raw(const WaveField& field, const std::filesystem::path& stem) {
  std::ofstream bin(with_ext(stem, ".bin"), std::ios::binary);
  if (!bin) throw InvalidArgument("snapshot: cannot open " + stem.string() + ".bin");
  for (int c = 0; c < field.components(); ++c)
    for (const cplx v : field.component(c)) {
      put_le(bin, v.real());
      put_le(bin, v.imag());
    }
  nlohmann::ordered_json meta{{"N", field.grid().n()},
                              {"L", field.grid().length()},
                              {"components", field.components()},
                              {"time", field.time()},
                              {"gauge_frame", field.gauge_frame()}};
  std::ofstream js(with_ext(stem, ".json"));
  if (!js) throw InvalidArgument("snapshot: cannot open " + stem.string() + ".json");
  js << meta.dump(2) << '\n';
}

WaveField read_raw(const std::filesystem::path& stem) {
  std::ifstream js(with_ext(stem, ".json"));
  if (!js) throw InvalidArgument("snapshot: cannot open " + stem.string() + ".json");
  const auto meta = nlohmann::json::parse(js);
  WaveField f(Grid2D(meta.at("N").get<std::size_t>(), meta.at("L").get<double>()),
              meta.at("components").get<int>());
  f.set_time(meta.at("time").get<double>());
  f.set_gauge_frame(meta.at("gauge_frame").get<bool>());
  std::ifstream bin(with_ext(stem, ".bin"), std::ios::binary);
  if (!bin) throw InvalidArgument("snapshot: cannot open " + stem.string() + ".bin");
  for (int c = 0; c < f.components(); ++c)
    for (cplx& v : f.component(c)) {
      const double re = get_le(bin);
      v = cplx(re, get_le(bin));
    }
  return f;
}

}  // namespace so21::nonrel
