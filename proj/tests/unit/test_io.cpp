#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "sci/config_file.hpp"
#include "sci/errors.hpp"
#include "sci/images.hpp"
#include "sci/tensor_io.hpp"
#include "support/oracles.hpp"

namespace sci {
namespace {

namespace fs = std::filesystem;
using testing::random_cube;

// Builds a SCIT byte stream by hand, independent of write_tensor.
std::string scit_bytes(std::uint8_t dtype, std::uint8_t rank, const std::vector<std::uint64_t>& dims,
                       const std::vector<double>& payload) {
  std::string s = "SCITNSR1";
  s.push_back(static_cast<char>(dtype));
  s.push_back(static_cast<char>(rank));
  auto put = [&s](const void* p, std::size_t n) {
    // Little-endian host assumed; the check below guards it.
    s.append(static_cast<const char*>(p), n);
  };
  for (std::uint64_t d : dims) put(&d, 8);
  for (double v : payload) {
    if (dtype == 1) {
      const float f = static_cast<float>(v);
      put(&f, 4);
    } else {
      put(&v, 8);
    }
  }
  return s;
}

FormatError::Kind read_error(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_tensor(in);
  } catch (const FormatError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no FormatError raised";
  return FormatError::Kind::BadMagic;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sci_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

static_assert(std::endian::native == std::endian::little, "test helpers assume a little-endian host");

TEST(Scit, HeaderLayoutIsExact) {
  std::ostringstream out;
  write_tensor(out, VideoCube(Shape{2, 3, 4}, 0.5));
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, 8), "SCITNSR1");
  EXPECT_EQ(s[8], 2);
  EXPECT_EQ(s[9], 3);
  std::uint64_t dims[3];
  std::memcpy(dims, s.data() + 10, 24);
  EXPECT_EQ(dims[0], 2u);
  EXPECT_EQ(dims[1], 3u);
  EXPECT_EQ(dims[2], 4u);
  EXPECT_EQ(s.size(), 34u + 24u * 8u);
  EXPECT_EQ(s, scit_bytes(2, 3, {2, 3, 4}, std::vector<double>(24, 0.5)));
}

TEST(Scit, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  const VideoCube c = random_cube(rng, Shape{5, 7, 3}, -1e6, 1e6);
  std::stringstream buf;
  write_tensor(buf, c);
  EXPECT_EQ(std::get<VideoCube>(read_tensor(buf)), c);

  const Frame f = testing::random_frame(rng, 4, 9);
  std::stringstream fbuf;
  write_tensor(fbuf, f);
  EXPECT_EQ(std::get<Frame>(read_tensor(fbuf)), f);
}

TEST(Scit, Float32IsWidenedOnLoad) {
  std::istringstream in(scit_bytes(1, 2, {1, 3}, {0.1, 0.5, -2.0}));
  const Frame f = std::get<Frame>(read_tensor(in));
  EXPECT_EQ(f(0, 0), static_cast<double>(0.1f));
  EXPECT_EQ(f(0, 1), 0.5);
  EXPECT_EQ(f(0, 2), -2.0);

  std::stringstream buf;
  write_tensor(buf, f, Dtype::Float32);
  EXPECT_EQ(buf.str().size(), 10u + 16u + 12u);
  EXPECT_EQ(std::get<Frame>(read_tensor(buf)), f);
}

TEST(Scit, DistinctDiagnostics) {
  using K = FormatError::Kind;
  EXPECT_EQ(read_error(""), K::BadMagic);
  EXPECT_EQ(read_error("NOTATENSORFILE"), K::BadMagic);
  EXPECT_EQ(read_error(std::string("SCITNSR2") + '\x02' + '\x02'), K::BadVersion);
  EXPECT_EQ(read_error(scit_bytes(3, 2, {1, 1}, {0.0})), K::BadDtype);
  EXPECT_EQ(read_error(scit_bytes(2, 4, {1, 1, 1, 1}, {0.0})), K::BadRank);
  EXPECT_EQ(read_error(scit_bytes(2, 3, {2, 2, 2}, std::vector<double>(7))), K::Truncated);
  EXPECT_EQ(read_error(scit_bytes(2, 3, {2, 2, 2}, std::vector<double>(9))), K::TrailingData);
  EXPECT_EQ(read_error(scit_bytes(2, 3, {2, 0, 2}, {})), K::BadDims);
  EXPECT_EQ(read_error(scit_bytes(2, 2, {1, 2}, {0.0, std::numeric_limits<double>::quiet_NaN()})), K::NonFinite);
  EXPECT_EQ(read_error(scit_bytes(2, 3, {2, 2, 2}, {}).substr(0, 20)), K::Truncated);
}

TEST(Scit, TruncatedPayloadMessage) {
  std::istringstream in(scit_bytes(2, 3, {2, 2, 2}, std::vector<double>(7)));
  try {
    read_tensor(in);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated payload"), std::string::npos);
  }
}

TEST_F(TempDir, FilesAndPromotion) {
  std::mt19937_64 rng(2);
  const VideoCube c = random_cube(rng, Shape{3, 4, 2});
  save_tensor(dir_ / "c.scit", c);
  EXPECT_EQ(load_cube(dir_ / "c.scit"), c);
  EXPECT_THROW(load_frame(dir_ / "c.scit"), DimensionError);

  const Frame f = c.frame_copy(1);
  save_tensor(dir_ / "f.scit", f);
  EXPECT_EQ(load_frame(dir_ / "f.scit"), f);
  EXPECT_EQ(load_cube(dir_ / "f.scit").frame_copy(0), f);

  std::ofstream(dir_ / "empty.scit").close();
  try {
    load_tensor(dir_ / "empty.scit");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.kind(), FormatError::Kind::BadMagic);
  }
  EXPECT_THROW(load_tensor(dir_ / "missing.scit"), IoError);
  EXPECT_THROW(save_tensor(dir_ / "no" / "such" / "dir.scit", f), IoError);
}

TEST(Gray8, ClampAndRounding) {
  EXPECT_EQ(to_gray8(0.5), 128);
  EXPECT_EQ(to_gray8(1.5), 255);
  EXPECT_EQ(to_gray8(-0.2), 0);
  EXPECT_EQ(to_gray8(1.0), 255);
  EXPECT_EQ(to_gray8(std::numeric_limits<double>::quiet_NaN()), 0);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST_F(TempDir, PgmExportIsByteExact) {
  const auto files = export_frames(VideoCube(Shape{2, 3, 10}, 0.5), dir_ / "frames");
  ASSERT_EQ(files.size(), 10u);
  EXPECT_EQ(files[0].filename(), "frame_0000.pgm");
  EXPECT_EQ(files[9].filename(), "frame_0009.pgm");
  EXPECT_EQ(slurp(files[3]), std::string("P5\n3 2\n255\n") + std::string(6, static_cast<char>(128)));
}

TEST_F(TempDir, PngExportWritesValidHeaders) {
  VideoCube c(Shape{3, 5, 2}, 1.5);
  const auto files = export_frames(c, dir_, ImageFormat::Png, "snap");
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[1].filename(), "snap_0001.png");
  const std::string bytes = slurp(files[0]);
  ASSERT_GT(bytes.size(), 24u);
  EXPECT_EQ(bytes.substr(0, 8), "\x89PNG\r\n\x1a\n");
  auto be32 = [&](std::size_t at) {
    return (static_cast<unsigned>(static_cast<unsigned char>(bytes[at])) << 24) |
           (static_cast<unsigned>(static_cast<unsigned char>(bytes[at + 1])) << 16) |
           (static_cast<unsigned>(static_cast<unsigned char>(bytes[at + 2])) << 8) |
           static_cast<unsigned>(static_cast<unsigned char>(bytes[at + 3]));
  };
  EXPECT_EQ(be32(16), 5u);  // width
  EXPECT_EQ(be32(20), 3u);  // height
}

TEST_F(TempDir, ExportToUnwritableLocationFails) {
  std::ofstream(dir_ / "blocker").put('x');
  EXPECT_THROW(export_frames(VideoCube(2, 2, 1), dir_ / "blocker" / "sub"), IoError);
  EXPECT_THROW(parse_image_format("tiff"), ConfigError);
}

TEST(ConfigFile, ParsesFlatKeyValue) {
  std::istringstream in("# comment\n\nlambda = 0.1\n--solver=admm\n  tv=itv3d-fgp  \n");
  const ConfigEntries e = parse_config(in);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], (std::pair<std::string, std::string>{"lambda", "0.1"}));
  EXPECT_EQ(e[1], (std::pair<std::string, std::string>{"solver", "admm"}));
  EXPECT_EQ(e[2], (std::pair<std::string, std::string>{"tv", "itv3d-fgp"}));
}

TEST(ConfigFile, MalformedLinesThrow) {
  std::istringstream no_eq("lambda 0.1\n");
  EXPECT_THROW(parse_config(no_eq), ConfigError);
  std::istringstream no_key("=3\n");
  EXPECT_THROW(parse_config(no_key), ConfigError);
  EXPECT_THROW(parse_config_file("/nonexistent/run.cfg"), IoError);
}

}  // namespace
}  // namespace sci
