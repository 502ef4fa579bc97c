#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "dgsam/harness/config.hpp"

namespace dgsam::harness {

/// Round-trippable decimal text for a double ("nan"/"inf"/"-inf" for non-finite).
std::string format_number(double v);

/// RFC-4180 table: header row, comma separators, quoted fields when needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  void add_numeric_row(const std::vector<double>& cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

/// Serialises every file write into one directory and remembers what was
/// written, so the manifest can list each file with its hash.
class OutputDirectory {
 public:
  explicit OutputDirectory(std::filesystem::path root);

  void write(const std::string& name, const std::string& contents);
  void write_csv(const std::string& name, const CsvTable& table) { write(name, table.str()); }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  std::vector<OutputFile> files() const;
  const std::filesystem::path& root() const { return root_; }

  /// Writes manifest.json: the given body plus a "files" index.
  void write_manifest(Json body);

 private:
  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::vector<OutputFile> files_;
};

/// Re-hashes every file listed in a manifest; returns the names that differ or are missing.
std::vector<std::string> verify_manifest(const std::filesystem::path& manifest_path);

}  // namespace dgsam::harness
