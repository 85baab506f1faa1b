#include "mesojj/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mesojj/errors.hpp"

namespace mesojj {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quote(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string CsvTable::to_string() const {
  std::string out;
  auto emit_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += quote(row[i]);
    }
    out += '\n';
  };
  emit_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw IoError("csv: row width does not match the header");
    emit_row(row);
  }
  return out;
}

std::vector<std::string> csv_split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty()) throw IoError("csv: quote inside unquoted field");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else {
      cur += c;
    }
  }
  if (quoted) throw IoError("csv: unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

FileEntry write_file(const std::string& path, const std::string& bytes) {
  std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("short write to " + path);
  return {path, fnv1a_hex(bytes)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return ss.str();
}

namespace {

struct Ticks {
  std::vector<double> values;
};

// Round tick spacing to 1/2/5 times a power of ten.
Ticks make_ticks(double lo, double hi, int target) {
  Ticks t;
  if (!(hi > lo)) {
    t.values.push_back(lo);
    return t;
  }
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  double v = std::ceil(lo / step) * step;
  for (; v <= hi + step * 1e-9; v += step) t.values.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  return t;
}

std::string trim_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string render_plot(const PlotSpec& spec) {
  if (spec.series.empty()) throw ConfigError("plot: no series to draw");
  for (const auto& s : spec.series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw ConfigError("plot: series '" + s.label + "' is empty or ragged");
  }

  const double width = 800, height = 500;
  const double ml = 72, mr = 24, mt = 40, mb = 56;

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double yv = s.y[i];
      if (spec.log_y) {
        if (!(yv > 0)) throw ConfigError("plot: log scale requires positive values");
        yv = std::log10(yv);
      }
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = yv;
        first = false;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, yv);
        ymax = std::max(ymax, yv);
      }
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  const double ypad = (ymax - ymin) * 0.06;
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << spec.title << "</text>\n";

  // axes box
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
      << "\" height=\"" << height - mt - mb << "\" fill=\"none\" stroke=\"#333\"/>\n";

  const Ticks xt = make_ticks(xmin, xmax, 8);
  for (double v : xt.values) {
    svg << "<line x1=\"" << px(v) << "\" y1=\"" << height - mb << "\" x2=\"" << px(v) << "\" y2=\""
        << height - mb + 5 << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << px(v) << "\" y=\"" << height - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << trim_number(v)
        << "</text>\n";
  }
  const Ticks yt = make_ticks(ymin, ymax, 6);
  for (double v : yt.values) {
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << ml << "\" y2=\"" << py(v)
        << "\" stroke=\"#333\"/>\n";
    std::string label = spec.log_y ? "1e" + trim_number(v) : trim_number(v);
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label
        << "</text>\n";
  }

  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.x_label
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (mt + height - mb) / 2 << ")\">" << spec.y_label << "</text>\n";

  double legend_y = mt + 16;
  for (const auto& s : spec.series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double yv = spec.log_y ? std::log10(s.y[i]) : s.y[i];
      svg << px(s.x[i]) << "," << py(yv) << " ";
    }
    svg << "\"/>\n";
    if (!s.label.empty()) {
      svg << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << legend_y << "\" x2=\""
          << width - mr - 120 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
          << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
      svg << "<text x=\"" << width - mr - 114 << "\" y=\"" << legend_y + 4
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
      legend_y += 18;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mesojj
