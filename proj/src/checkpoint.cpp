#include "hmf/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <system_error>

#include "hmf/error.hpp"

namespace hmf {
namespace {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return to_little(v);
}

void put_array(std::ostream& os, std::span<const double> a) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(a.data()),
             static_cast<std::streamsize>(a.size() * sizeof(double)));
  } else {
    for (double v : a) put(os, v);
  }
}

std::vector<double> get_array(std::istream& is, std::uint64_t n) {
  std::vector<double> a(n);
  is.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if constexpr (std::endian::native != std::endian::little)
    for (double& v : a) v = to_little(v);
  return a;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const WeightedEnsemble& e) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    put<std::uint32_t>(os, kCheckpointVersion);
    put<std::uint32_t>(os, e.symmetry_reduced() ? 1u : 0u);
    put<std::uint64_t>(os, e.size());
    put<double>(os, e.time());
    put<double>(os, e.pmax());
    put_array(os, e.x());
    put_array(os, e.p());
    put_array(os, e.weights());
    os.flush();
    if (!os) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into " + path.string() + ": " + ec.message());
}

WeightedEnsemble read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path.string());
  char magic[sizeof(kCheckpointMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw IoError(path.string() + " is not a checkpoint file");
  const auto version = get<std::uint32_t>(is);
  if (version != kCheckpointVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  const auto flag = get<std::uint32_t>(is);
  const auto n = get<std::uint64_t>(is);
  const auto time = get<double>(is);
  const auto pmax = get<double>(is);
  if (!is) throw IoError("truncated checkpoint header in " + path.string());
  const auto expected = 40 + 3 * n * sizeof(double);
  std::error_code ec;
  if (std::filesystem::file_size(path, ec) != expected || ec)
    throw IoError("checkpoint " + path.string() + " has the wrong size for " + std::to_string(n) +
                  " particles");
  auto x = get_array(is, n);
  auto p = get_array(is, n);
  auto w = get_array(is, n);
  if (!is) throw IoError("truncated checkpoint body in " + path.string());
  return WeightedEnsemble(std::move(x), std::move(p), std::move(w), time, flag != 0, pmax);
}

}  // namespace hmf
