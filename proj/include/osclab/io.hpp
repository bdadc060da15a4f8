#ifndef OSCLAB_IO_HPP
#define OSCLAB_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "osclab/common.hpp"

namespace osclab {

/// 32-byte content hash (four salted 64-bit FNV-1a lanes) of a byte string;
/// returned as 64 hex characters. A stable cache/config key, not a
/// cryptographic digest.
std::string content_hash_hex(const std::string& bytes);

/// Canonical dump (sorted keys) used for hashing configurations.
inline std::string canonical_dump(const nlohmann::json& j) { return j.dump(); }

/// CSV writer with fixed %.17g formatting so identical runs are
/// byte-identical. Metadata is embedded as leading "# key=value" lines.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);

  CsvWriter& field(double v);
  CsvWriter& field(long v);
  CsvWriter& field(const std::string& v);
  void end_row();

  const std::string& path() const { return path_; }
  ~CsvWriter();

 private:
  void flush_header();
  std::string path_;
  std::vector<std::string> columns_;
  std::vector<std::string> meta_lines_;
  std::ofstream out_;
  bool header_written_ = false;
  bool row_open_ = false;
};

std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace osclab

#endif
