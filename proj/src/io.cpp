#include "osclab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace osclab {

std::string content_hash_hex(const std::string& bytes) {
  static const std::uint64_t salts[4] = {0xcbf29ce484222325ull, 0x9ddfea08eb382d69ull,
                                         0xa0761d6478bd642full, 0xe7037ed1a0b428dbull};
  char hex[65];
  for (int lane = 0; lane < 4; ++lane) {
    std::uint64_t h = salts[lane];
    for (unsigned char c : bytes) {
      h ^= std::uint64_t(c) + (std::uint64_t(lane) << 56);
      h *= 0x100000001b3ull;
    }
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 32;
    std::snprintf(hex + 16 * lane, 17, "%016llx", static_cast<unsigned long long>(h));
  }
  return std::string(hex, 64);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), columns_(columns) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  require(out_.good(), errc::io_error, "cannot open " + path + " for writing");
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
  require(!header_written_, errc::invalid_argument, "metadata must precede rows");
  meta_lines_.push_back("# " + key + "=" + value);
}

void CsvWriter::meta(const std::string& key, double value) { meta(key, format_double(value)); }

void CsvWriter::flush_header() {
  if (header_written_) return;
  for (const auto& line : meta_lines_) out_ << line << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i)
    out_ << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  header_written_ = true;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(long v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(const std::string& v) {
  flush_header();
  if (row_open_) out_ << ",";
  out_ << v;
  row_open_ = true;
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\n";
  row_open_ = false;
}

CsvWriter::~CsvWriter() {
  flush_header();
  out_.flush();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), errc::io_error, "cannot open " + path + " for writing");
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace osclab
