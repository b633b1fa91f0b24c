#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "rsgdim/io.hpp"
#include "rsgdim/julia.hpp"

using namespace rsg;

namespace {

std::filesystem::path temp_file(const char* tag) {
  return std::filesystem::temp_directory_path() / (std::string("rsgdim_io_") + tag);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

}  // namespace

TEST_CASE("csv quoting follows the quoting rules") {
  CsvWriter w({"a", "b"});
  w.cell(std::string("plain"));
  w.cell(std::string("comma,inside"));
  w.end_row();
  w.cell(std::string("say \"hi\""));
  w.cell(std::string("line\nbreak"));
  w.end_row();
  w.cell(0.1);
  w.cell(std::uint64_t(7));
  w.end_row();
  std::string s = w.str();
  CHECK(s ==
        "a,b\r\n"
        "plain,\"comma,inside\"\r\n"
        "\"say \"\"hi\"\"\",\"line\nbreak\"\r\n"
        "0.10000000000000001,7\r\n");
}

TEST_CASE("doubles round-trip through their formatted form") {
  for (double x : {1.0 / 3, 0.1, -2.5e-17, 1e300, 6.02214076e23, -0.0}) {
    std::string s = format_g17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("png output is a decodable grayscale image") {
  Image img;
  img.width = 5;
  img.height = 3;
  img.pixels = {0,  10,  20,  30,  40,   //
                50, 60,  70,  80,  90,   //
                100, 110, 120, 130, 255};
  auto path = temp_file("gray.png");
  write_png_gray8(path.string(), img);
  std::string bytes = slurp(path);

  REQUIRE(bytes.size() > 45);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  CHECK(std::memcmp(p, sig, 8) == 0);
  CHECK(be32(p + 8) == 13);                      // IHDR length
  CHECK(std::memcmp(p + 12, "IHDR", 4) == 0);
  CHECK(be32(p + 16) == 5);                      // width
  CHECK(be32(p + 20) == 3);                      // height
  CHECK(p[24] == 8);                             // bit depth
  CHECK(p[25] == 0);                             // grayscale

  // decompress the IDAT payload and compare the filtered scanlines
  std::size_t off = 8 + 12 + 13;  // signature + IHDR chunk
  REQUIRE(std::memcmp(p + off + 4, "IDAT", 4) == 0);
  std::uint32_t idat_len = be32(p + off);
  std::vector<unsigned char> raw(3 * (1 + 5));
  uLongf raw_len = uLongf(raw.size());
  int rc = uncompress(raw.data(), &raw_len, p + off + 8, idat_len);
  REQUIRE(rc == Z_OK);
  REQUIRE(raw_len == raw.size());
  for (int y = 0; y < 3; ++y) {
    CHECK(raw[std::size_t(y) * 6] == 0);  // filter byte: none
    for (int x = 0; x < 5; ++x)
      CHECK(raw[std::size_t(y) * 6 + 1 + std::size_t(x)] == img.pixels[std::size_t(y) * 5 + std::size_t(x)]);
  }

  // deterministic bytes
  auto path2 = temp_file("gray2.png");
  write_png_gray8(path2.string(), img);
  CHECK(slurp(path2) == bytes);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("png rejects malformed dimensions") {
  Image bad;
  bad.width = 2;
  bad.height = 2;
  bad.pixels = {1, 2, 3};  // short payload
  CHECK(rsgtest::thrown_code([&] { write_png_gray8(temp_file("bad.png").string(), bad); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("text and csv files land on disk intact") {
  auto path = temp_file("note.txt");
  write_text_file(path.string(), "two\nlines\n");
  CHECK(slurp(path) == "two\nlines\n");

  CsvWriter w({"x"});
  w.cell(1.5);
  w.end_row();
  auto cpath = temp_file("t.csv");
  w.save(cpath.string());
  CHECK(slurp(cpath) == "x\r\n1.5\r\n");
  std::filesystem::remove(path);
  std::filesystem::remove(cpath);
}
