#include "sci/tensor_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "sci/errors.hpp"

namespace sci {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'C', 'I', 'T', 'N', 'S', 'R', '1'};
constexpr std::size_t kPrefix = 7;  // "SCITNSR" without the version byte

using Kind = FormatError::Kind;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), b.size());
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void write_payload(std::ostream& out, std::span<const double> data, Dtype dtype) {
  std::vector<char> bytes;
  if (dtype == Dtype::Float64) {
    bytes.resize(data.size() * 8);
    for (std::size_t n = 0; n < data.size(); ++n) {
      const auto bits = std::bit_cast<std::uint64_t>(data[n]);
      for (int i = 0; i < 8; ++i) bytes[n * 8 + i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
    }
  } else {
    bytes.resize(data.size() * 4);
    for (std::size_t n = 0; n < data.size(); ++n) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(data[n]));
      for (int i = 0; i < 4; ++i) bytes[n * 4 + i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_header(std::ostream& out, Dtype dtype, std::span<const std::uint64_t> dims) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(dtype));
  out.put(static_cast<char>(dims.size()));
  for (auto d : dims) put_u64(out, d);
}

void check_stream(const std::ostream& out) {
  if (!out) throw IoError("failed to write tensor data");
}

}  // namespace

void write_tensor(std::ostream& out, const Frame& frame, Dtype dtype) {
  const std::array<std::uint64_t, 2> dims = {frame.n_x(), frame.n_y()};
  write_header(out, dtype, dims);
  write_payload(out, frame.data(), dtype);
  check_stream(out);
}

void write_tensor(std::ostream& out, const VideoCube& cube, Dtype dtype) {
  const std::array<std::uint64_t, 3> dims = {cube.n_x(), cube.n_y(), cube.frames()};
  write_header(out, dtype, dims);
  write_payload(out, cube.data(), dtype);
  check_stream(out);
}

Tensor read_tensor(std::istream& in) {
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < kPrefix || std::memcmp(bytes.data(), kMagic.data(), kPrefix) != 0) {
    throw FormatError(Kind::BadMagic, "bad magic: not a SCIT tensor file");
  }
  if (bytes.size() < kMagic.size() || bytes[7] != static_cast<unsigned char>(kMagic[7])) {
    throw FormatError(Kind::BadVersion, "unsupported SCIT format version");
  }
  if (bytes.size() < 10) throw FormatError(Kind::Truncated, "truncated header");

  const unsigned char dtype = bytes[8];
  if (dtype != static_cast<unsigned char>(Dtype::Float32) && dtype != static_cast<unsigned char>(Dtype::Float64)) {
    throw FormatError(Kind::BadDtype, "unknown dtype code " + std::to_string(dtype));
  }
  const unsigned char rank = bytes[9];
  if (rank != 2 && rank != 3) throw FormatError(Kind::BadRank, "unsupported rank " + std::to_string(rank));

  const std::size_t header = 10 + 8 * static_cast<std::size_t>(rank);
  if (bytes.size() < header) throw FormatError(Kind::Truncated, "truncated header");

  std::array<std::uint64_t, 3> dims = {1, 1, 1};
  std::uint64_t count = 1;
  for (std::size_t d = 0; d < rank; ++d) {
    dims[d] = get_u64(bytes.data() + 10 + 8 * d);
    if (dims[d] == 0) throw FormatError(Kind::BadDims, "dimension " + std::to_string(d) + " is zero");
    if (count > std::numeric_limits<std::uint64_t>::max() / dims[d] / 8) {
      throw FormatError(Kind::BadDims, "declared dimensions overflow");
    }
    count *= dims[d];
  }

  const std::size_t width = dtype == static_cast<unsigned char>(Dtype::Float64) ? 8 : 4;
  const std::size_t available = bytes.size() - header;
  if (available < count * width) {
    throw FormatError(Kind::Truncated, "truncated payload: header declares " + std::to_string(count) +
                                           " samples, file holds " + std::to_string(available / width));
  }
  if (available > count * width) {
    throw FormatError(Kind::TrailingData, "dimension mismatch: " + std::to_string(available - count * width) +
                                              " bytes beyond the declared payload");
  }

  std::vector<double> data(count);
  const unsigned char* p = bytes.data() + header;
  for (std::size_t n = 0; n < count; ++n, p += width) {
    if (width == 8) {
      data[n] = std::bit_cast<double>(get_u64(p));
    } else {
      std::uint32_t bits = 0;
      for (int i = 3; i >= 0; --i) bits = (bits << 8) | p[i];
      data[n] = static_cast<double>(std::bit_cast<float>(bits));
    }
    if (!std::isfinite(data[n])) {
      throw FormatError(Kind::NonFinite, "non-finite sample at offset " + std::to_string(n));
    }
  }

  if (rank == 2) return Frame(dims[0], dims[1], std::move(data));
  return VideoCube(Shape{dims[0], dims[1], dims[2]}, std::move(data));
}

namespace {

template <typename T>
void save_impl(const std::filesystem::path& path, const T& value, Dtype dtype) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_tensor(out, value, dtype);
}

}  // namespace

void save_tensor(const std::filesystem::path& path, const Frame& frame, Dtype dtype) {
  save_impl(path, frame, dtype);
}

void save_tensor(const std::filesystem::path& path, const VideoCube& cube, Dtype dtype) {
  save_impl(path, cube, dtype);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return read_tensor(in);
  } catch (const FormatError& e) {
    throw FormatError(e.kind(), path.string() + ": " + e.what());
  }
}

VideoCube load_cube(const std::filesystem::path& path) {
  Tensor t = load_tensor(path);
  if (auto* f = std::get_if<Frame>(&t)) return VideoCube(Shape{f->n_x(), f->n_y(), 1}, f->values());
  return std::get<VideoCube>(std::move(t));
}

Frame load_frame(const std::filesystem::path& path) {
  Tensor t = load_tensor(path);
  if (auto* c = std::get_if<VideoCube>(&t)) {
    if (c->frames() != 1) throw DimensionError(path.string() + ": expected a single frame");
    return c->frame_copy(0);
  }
  return std::get<Frame>(std::move(t));
}

}  // namespace sci
