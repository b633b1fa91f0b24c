#include "rsgdim/io.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "rsgdim/errors.hpp"

namespace rsg {

namespace {

void push_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& data) {
  push_be32(out, std::uint32_t(data.size()));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  std::uint32_t crc = std::uint32_t(
      ::crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start)));
  push_be32(out, crc);
}

}  // namespace

void write_png_gray8(const std::string& path, const Image& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != std::size_t(img.width) * std::size_t(img.height))
    raise(ErrorCode::invalid_argument, "write_png_gray8: inconsistent image dimensions");

  // raw scanlines, filter byte 0 per row
  std::vector<std::uint8_t> raw;
  raw.reserve(std::size_t(img.height) * (std::size_t(img.width) + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    const std::uint8_t* row = img.pixels.data() + std::size_t(y) * std::size_t(img.width);
    raw.insert(raw.end(), row, row + img.width);
  }

  uLongf zlen = ::compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> zdata(zlen);
  if (::compress2(zdata.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    raise(ErrorCode::invalid_argument, "write_png_gray8: deflate failed");
  zdata.resize(zlen);

  std::vector<std::uint8_t> ihdr;
  push_be32(ihdr, std::uint32_t(img.width));
  push_be32(ihdr, std::uint32_t(img.height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // grayscale
  ihdr.push_back(0);  // deflate
  ihdr.push_back(0);  // adaptive filtering, per-row byte
  ihdr.push_back(0);  // no interlace

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  push_chunk(png, "IHDR", ihdr);
  push_chunk(png, "IDAT", zdata);
  push_chunk(png, "IEND", {});
  write_binary_file(path, png);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::cell(const std::string& s) {
  if (row_open_) buf_ += ',';
  row_open_ = true;
  if (s.find_first_of(",\"\r\n") == std::string::npos) {
    buf_ += s;
    return;
  }
  buf_ += '"';
  for (char c : s) {
    if (c == '"') buf_ += '"';
    buf_ += c;
  }
  buf_ += '"';
}

void CsvWriter::end_row() {
  buf_ += "\r\n";
  row_open_ = false;
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, buf_); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(ErrorCode::invalid_argument, "cannot open for writing: " + path);
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) raise(ErrorCode::invalid_argument, "write failed: " + path);
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(ErrorCode::invalid_argument, "cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!f) raise(ErrorCode::invalid_argument, "write failed: " + path);
}

}  // namespace rsg
