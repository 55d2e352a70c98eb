#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rigidlab/gaf.hpp"

namespace rigidlab::io {

// Shortest round-trip decimal representation ('.' decimal point).
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// RFC-4180 style table (CRLF records), preceded by a `# config_hash=` line.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::string& config_hash);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_ = 0;
};

// Fixed-viewport scatter plot of a point configuration: the window disk
// outline plus one dot per point.
std::string svg_scatter(const std::string& config_hash, const PointConfiguration& cfg);

// Number-line rendering for one-dimensional configurations.
std::string svg_number_line(const std::string& config_hash,
                            const PointConfiguration& cfg);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace rigidlab::io
