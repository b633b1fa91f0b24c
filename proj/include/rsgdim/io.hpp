#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsgdim/julia.hpp"

namespace rsg {

// 8-bit grayscale PNG (color type 0), deflate at a fixed level, no ancillary
// chunks: identical pixels always give identical bytes.
void write_png_gray8(const std::string& path, const Image& img);

std::string format_g17(double v);  // shortest-exact %.17g cell format

// RFC-4180 accumulator: comma separated, CRLF row ends, minimal quoting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void cell(const std::string& s);
  void cell(double v) { cell(format_g17(v)); }
  void cell(std::uint64_t v) { cell(std::to_string(v)); }
  void cell(int v) { cell(std::to_string(v)); }
  void end_row();
  const std::string& str() const { return buf_; }
  void save(const std::string& path) const;

 private:
  std::string buf_;
  bool row_open_ = false;
};

void write_text_file(const std::string& path, const std::string& content);
void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace rsg
