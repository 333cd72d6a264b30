#ifndef LOGLAP_TOOLS_OUTPUT_HPP
#define LOGLAP_TOOLS_OUTPUT_HPP

// Artifact writers.  Numbers are printed with 17 significant digits so
// files round-trip and reruns are byte-identical; every file starts with
// the tool version and the resolved configuration.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "loglap/version.hpp"

namespace loglap::tool {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const RunConfig& cfg, std::vector<std::string> columns) : columns_(std::move(columns)) {
    os_ << "# loglap " << kVersion << "\n";
    os_ << "# config " << resolved_config(cfg).dump() << "\n";
  }

  /// Extra metadata line, written before the column header.
  void note(const std::string& key, const std::string& value) { notes_ << "# " << key << " " << value << "\n"; }
  void note(const std::string& key, double value) { note(key, num(value)); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) rows_ << (i ? "," : "") << cells[i];
    rows_ << "\n";
  }

  void write(const std::string& path) const {
    std::string text = os_.str() + notes_.str();
    for (std::size_t i = 0; i < columns_.size(); ++i) text += (i ? "," : "") + columns_[i];
    text += "\n" + rows_.str();
    write_text(path, text);
  }

  static void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
  }

 private:
  std::vector<std::string> columns_;
  std::ostringstream os_, notes_, rows_;
};

/// JSON artifact with the version and resolved configuration first.
inline json json_artifact(const RunConfig& cfg) {
  json j;
  j["version"] = kVersion;
  j["config"] = resolved_config(cfg);
  return j;
}

inline void write_json(const std::string& path, const json& j) { CsvWriter::write_text(path, j.dump(2) + "\n"); }

}  // namespace loglap::tool

#endif  // LOGLAP_TOOLS_OUTPUT_HPP
