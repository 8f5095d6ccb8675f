#include "adsbrange/observation_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "adsbrange/errors.hpp"

namespace adsbrange {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T get_le(const std::vector<std::uint8_t>& in, std::size_t offset) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, in.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_window(const ObservationWindow& window) {
  const auto rows = static_cast<std::uint32_t>(window.Y.rows());
  const auto cols = static_cast<std::uint32_t>(window.Y.cols());
  std::vector<std::uint8_t> out(std::begin(kWindowMagic), std::end(kWindowMagic));
  out.reserve(kWindowHeaderBytes + 16ULL * rows * cols);
  put_le<std::uint32_t>(out, rows);
  put_le<std::uint32_t>(out, cols);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(window.K));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(window.M));
  put_le<double>(out, window.lambda_c);
  for (std::uint32_t l = 0; l < rows; ++l) {
    for (std::uint32_t n = 0; n < cols; ++n) {
      put_le<double>(out, window.Y(l, n).real());
      put_le<double>(out, window.Y(l, n).imag());
    }
  }
  return out;
}

ObservationWindow decode_window(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kWindowHeaderBytes ||
      !std::equal(std::begin(kWindowMagic), std::end(kWindowMagic), bytes.begin())) {
    throw InputShapeError("not an observation window dump");
  }
  const auto rows = get_le<std::uint32_t>(bytes, 8);
  const auto cols = get_le<std::uint32_t>(bytes, 12);
  if (bytes.size() != kWindowHeaderBytes + 16ULL * rows * cols) {
    throw InputShapeError("window dump size does not match its header");
  }
  ObservationWindow w;
  w.K = static_cast<int>(get_le<std::uint32_t>(bytes, 16));
  w.M = static_cast<int>(get_le<std::uint32_t>(bytes, 20));
  w.lambda_c = get_le<double>(bytes, 24);
  w.Y.resize(rows, cols);
  std::size_t offset = kWindowHeaderBytes;
  for (std::uint32_t l = 0; l < rows; ++l) {
    for (std::uint32_t n = 0; n < cols; ++n) {
      const double re = get_le<double>(bytes, offset);
      const double im = get_le<double>(bytes, offset + 8);
      w.Y(l, n) = Complex(re, im);
      offset += 16;
    }
  }
  return w;
}

void write_window(const std::filesystem::path& path, const ObservationWindow& window) {
  const auto bytes = encode_window(window);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ObservationWindow read_window(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_window(bytes);
}

}  // namespace adsbrange
