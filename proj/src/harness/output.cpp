#include "dgsam/harness/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "dgsam/errors.hpp"

namespace dgsam::harness {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("CsvTable: row width differs from header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_numeric_row(const std::vector<double>& cells) {
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (double v : cells) text.push_back(format_number(v));
  add_row(std::move(text));
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote(cells[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) append_line(out, r);
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

OutputDirectory::OutputDirectory(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ConfigError("cannot create output directory '" + root_.string() + "': " + ec.message());
}

void OutputDirectory::write(const std::string& name, const std::string& contents) {
  std::lock_guard lock(mutex_);
  const auto path = root_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << contents;
  out.close();
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
  for (auto& f : files_) {
    if (f.path == name) {
      f = {name, sha256_hex(contents), contents.size()};
      return;
    }
  }
  files_.push_back({name, sha256_hex(contents), contents.size()});
}

std::vector<OutputFile> OutputDirectory::files() const {
  std::lock_guard lock(mutex_);
  return files_;
}

void OutputDirectory::write_manifest(Json body) {
  Json index = Json::array();
  for (const auto& f : files()) {
    index.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  body["files"] = index;
  const std::string text = body.dump(2) + "\n";
  std::lock_guard lock(mutex_);
  std::ofstream out(root_ / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write manifest in '" + root_.string() + "'");
  out << text;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ConfigError("cannot open manifest '" + manifest_path.string() + "'");
  const Json m = Json::parse(in);
  std::vector<std::string> bad;
  const auto dir = manifest_path.parent_path();
  for (const auto& f : m.at("files")) {
    const std::string name = f.at("path").get<std::string>();
    const auto p = dir / name;
    if (!std::filesystem::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>()) {
      bad.push_back(name);
    }
  }
  return bad;
}

}  // namespace dgsam::harness
