#include "rigidlab/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rigidlab/errors.hpp"

namespace rigidlab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[std::size_t(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

namespace {

std::string csv_escape(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

CsvBuilder::CsvBuilder(const std::string& config_hash) {
  out_ = "# config_hash=" + config_hash + "\r\n";
}

void CsvBuilder::header(const std::vector<std::string>& names) {
  columns_ = names.size();
  row(names);
}

void CsvBuilder::row(const std::vector<std::string>& fields) {
  if (columns_ != 0 && fields.size() != columns_)
    throw BadParams("CsvBuilder: column count mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ += ',';
    out_ += csv_escape(fields[i]);
  }
  out_ += "\r\n";
}

std::string svg_scatter(const std::string& config_hash, const PointConfiguration& cfg) {
  const int size = 800;
  const double half = double(size) / 2.0;
  double R = cfg.window_radius > 0.0 ? cfg.window_radius : 1.0;
  double scale = (half - 10.0) / R;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
     << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  os << "<!-- config_hash=" << config_hash << " model=" << cfg.model_tag
     << " seed=" << cfg.seed << " -->\n";
  os << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
  os << "<circle cx=\"" << half << "\" cy=\"" << half << "\" r=\""
     << format_double(R * scale) << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  for (auto z : cfg.points) {
    double x = half + z.real() * scale;
    double y = half - z.imag() * scale;
    os << "<circle cx=\"" << format_double(x) << "\" cy=\"" << format_double(y)
       << "\" r=\"2\" fill=\"#1f4e8c\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_number_line(const std::string& config_hash,
                            const PointConfiguration& cfg) {
  const int width = 1000, height = 120;
  double R = cfg.window_radius > 0.0 ? cfg.window_radius : 1.0;
  double scale = (double(width) / 2.0 - 10.0) / R;
  double cx = double(width) / 2.0, cy = double(height) / 2.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<!-- config_hash=" << config_hash << " model=" << cfg.model_tag
     << " seed=" << cfg.seed << " -->\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<line x1=\"10\" y1=\"" << cy << "\" x2=\"" << width - 10 << "\" y2=\"" << cy
     << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  for (auto z : cfg.points) {
    double x = cx + z.real() * scale;
    if (x < 0.0 || x > double(width)) continue;
    os << "<circle cx=\"" << format_double(x) << "\" cy=\"" << cy
       << "\" r=\"2.5\" fill=\"#1f4e8c\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) throw ConfigError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw ConfigError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace rigidlab::io
