#pragma once

#include <string>
#include <vector>

namespace mesojj {

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// RFC-4180 CSV: header row then data rows, LF line endings, fields quoted
// only when needed. Numeric cells use format_double.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

std::vector<std::string> csv_split_line(const std::string& line);  // throws IoError on bad quoting

// One emitted file plus a content checksum (FNV-1a 64, hex).
struct FileEntry {
  std::string path;
  std::string checksum;
};

std::string fnv1a_hex(const std::string& bytes);

// Writes bytes to disk, creating parent directories; returns the entry.
FileEntry write_file(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);  // IoError on failure

// Minimal line-plot SVG writer (self-contained SVG 1.1).
struct PlotSeries {
  std::string label;
  std::string color = "#1f6fb2";
  bool dashed = false;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title;
  std::string x_label, y_label;
  bool log_y = false;  // y values are plotted as log10(y); requires y > 0
  std::vector<PlotSeries> series;
};

std::string render_plot(const PlotSpec& spec);  // throws ConfigError when a series is empty

}  // namespace mesojj
