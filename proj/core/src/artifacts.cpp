#include "paraconvex/artifacts.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace paraconvex {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& fmt_one) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += fmt_one(xs[i]);
  }
  return out;
}

void require_header(const CsvTable& table, const std::vector<std::string>& expected, const char* schema) {
  if (table.header != expected) {
    throw Error(ErrorKind::invalid_argument, std::string("csv: header does not match the ") + schema + " schema");
  }
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps data coordinates into a square plot area with a y axis pointing up.
struct Frame {
  double x0, x1, y0, y1;
  double left = 60, top = 40, width = 520, height = 520;

  double sx(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double sy(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  }
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::invalid_argument, "csv: no column named " + std::string(name));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::invalid_argument, "csv: not a number: " + std::string(text));
  }
  return v;
}

std::string to_csv(const CsvTable& table) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += field(cells[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"') {
      if (!cur.empty()) throw Error(ErrorKind::invalid_argument, "csv: stray quote inside a field");
      quoted = true;
      any = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !cur.empty()) {
        cells.push_back(std::move(cur));
        lines.push_back(std::move(cells));
      }
      cells.clear();
      cur.clear();
      any = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorKind::invalid_argument, "csv: unterminated quoted field");
  if (any || !cur.empty()) {
    cells.push_back(std::move(cur));
    lines.push_back(std::move(cells));
  }
  CsvTable table;
  if (lines.empty()) return table;
  table.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != table.header.size()) {
      throw Error(ErrorKind::invalid_argument, fmt::format("csv: row {} has {} fields, expected {}", i,
                                                           lines[i].size(), table.header.size()));
    }
    table.rows.push_back(std::move(lines[i]));
  }
  return table;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- profile ---------------------------------------------------------------

static const std::vector<std::string> kProfileHeader = {"scene",      "r",          "alpha_hat", "witness_cx",
                                                        "witness_cy", "witness_qx", "witness_qy"};

std::vector<ProfileRow> profile_rows(const std::string& scene, const NonconvexityProfile& profile) {
  std::vector<ProfileRow> out;
  for (const ProfileEntry& e : profile.entries) {
    ProfileRow row;
    row.scene = scene;
    row.r = e.radius;
    if (e.present) {
      row.alpha_hat = e.alpha_hat;
      row.witness_cx = e.witness_ball.center[0];
      row.witness_cy = e.witness_ball.center[1];
      row.witness_qx = e.witness_point.point[0];
      row.witness_qy = e.witness_point.point[1];
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.alpha_hat = row.witness_cx = row.witness_cy = row.witness_qx = row.witness_qy = nan;
    }
    out.push_back(row);
  }
  return out;
}

CsvTable to_table(const std::vector<ProfileRow>& rows) {
  CsvTable t{kProfileHeader, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.scene, format_number(r.r), format_number(r.alpha_hat), format_number(r.witness_cx),
                      format_number(r.witness_cy), format_number(r.witness_qx), format_number(r.witness_qy)});
  }
  return t;
}

std::vector<ProfileRow> profile_rows_from_table(const CsvTable& table) {
  require_header(table, kProfileHeader, "profile");
  std::vector<ProfileRow> out;
  for (const auto& c : table.rows) {
    out.push_back({c[0], parse_number(c[1]), parse_number(c[2]), parse_number(c[3]), parse_number(c[4]),
                   parse_number(c[5]), parse_number(c[6])});
  }
  return out;
}

// --- constants -------------------------------------------------------------

static const std::vector<std::string> kConstantsHeader = {"alpha", "phi", "banach", "hilbert", "threshold"};

std::vector<ConstantsRow> constants_rows(const std::vector<double>& alphas) {
  const double root = threshold_root();
  std::vector<ConstantsRow> out;
  for (double a : alphas) {
    const ParaconvexityBounds b = phi_and_bounds(a);
    out.push_back({a, b.phi, b.banach_bound, b.hilbert_bound, root});
  }
  return out;
}

CsvTable to_table(const std::vector<ConstantsRow>& rows) {
  CsvTable t{kConstantsHeader, {}};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.alpha), format_number(r.phi), format_number(r.banach), format_number(r.hilbert),
                      format_number(r.threshold)});
  }
  return t;
}

std::vector<ConstantsRow> constants_rows_from_table(const CsvTable& table) {
  require_header(table, kConstantsHeader, "constants");
  std::vector<ConstantsRow> out;
  for (const auto& c : table.rows) {
    out.push_back({parse_number(c[0]), parse_number(c[1]), parse_number(c[2]), parse_number(c[3]),
                   parse_number(c[4])});
  }
  return out;
}

// --- retraction field ------------------------------------------------------

static const std::vector<std::string> kFieldHeader = {"x", "y", "rx", "ry", "d", "displacement"};

CsvTable to_table(const std::vector<FieldRow>& rows) {
  CsvTable t{kFieldHeader, {}};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.x), format_number(r.y), format_number(r.rx), format_number(r.ry),
                      format_number(r.d), format_number(r.displacement)});
  }
  return t;
}

std::vector<FieldRow> field_rows_from_table(const CsvTable& table) {
  require_header(table, kFieldHeader, "field");
  std::vector<FieldRow> out;
  for (const auto& c : table.rows) {
    out.push_back({parse_number(c[0]), parse_number(c[1]), parse_number(c[2]), parse_number(c[3]),
                   parse_number(c[4]), parse_number(c[5])});
  }
  return out;
}

// --- modulus ---------------------------------------------------------------

static const std::vector<std::string> kModulusHeader = {"index", "delta", "sup_dist", "ratio", "flagged"};

CsvTable to_table(const std::vector<ModulusRow>& rows) {
  CsvTable t{kModulusHeader, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.index), format_number(r.delta), format_number(r.sup_dist),
                      format_number(r.ratio), r.flagged ? "1" : "0"});
  }
  return t;
}

std::vector<ModulusRow> modulus_rows_from_table(const CsvTable& table) {
  require_header(table, kModulusHeader, "modulus");
  std::vector<ModulusRow> out;
  for (const auto& c : table.rows) {
    ModulusRow r;
    r.index = static_cast<std::size_t>(std::stoull(c[0]));
    r.delta = parse_number(c[1]);
    r.sup_dist = parse_number(c[2]);
    r.ratio = parse_number(c[3]);
    r.flagged = c[4] == "1";
    out.push_back(r);
  }
  return out;
}

// --- space samples ---------------------------------------------------------

static const std::vector<std::string> kSpaceHeader = {"sample",       "members", "weights", "radius", "max_rho",
                                                      "sup_distance", "bound",   "ratio"};

CsvTable to_table(const std::vector<SpaceSample>& rows) {
  CsvTable t{kSpaceHeader, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SpaceSample& s = rows[i];
    t.rows.push_back({std::to_string(i), join(s.members, [](std::size_t m) { return std::to_string(m); }),
                      join(s.weights, format_number), format_number(s.radius), format_number(s.max_rho),
                      format_number(s.sup_distance),
                      format_number(s.bound), format_number(s.ratio)});
  }
  return t;
}

std::vector<SpaceSample> space_rows_from_table(const CsvTable& table) {
  require_header(table, kSpaceHeader, "space");
  std::vector<SpaceSample> out;
  for (const auto& c : table.rows) {
    SpaceSample s;
    for (const auto& m : split(c[1], ';')) s.members.push_back(static_cast<std::size_t>(std::stoull(m)));
    for (const auto& w : split(c[2], ';')) s.weights.push_back(parse_number(w));
    s.radius = parse_number(c[3]);
    s.max_rho = parse_number(c[4]);
    s.sup_distance = parse_number(c[5]);
    s.bound = parse_number(c[6]);
    s.ratio = parse_number(c[7]);
    out.push_back(std::move(s));
  }
  return out;
}

// --- figures ---------------------------------------------------------------

std::string field_svg(const PointCloud& cloud, const std::vector<FieldRow>& field, const std::string& title) {
  if (cloud.dim() != 2) throw Error(ErrorKind::dimension_mismatch, "field_svg: planar clouds only");
  double x0 = cloud.bounds().lo[0], x1 = cloud.bounds().hi[0];
  double y0 = cloud.bounds().lo[1], y1 = cloud.bounds().hi[1];
  for (const auto& r : field) {
    x0 = std::min({x0, r.x, r.rx});
    x1 = std::max({x1, r.x, r.rx});
    y0 = std::min({y0, r.y, r.ry});
    y1 = std::max({y1, r.y, r.ry});
  }
  widen(x0, x1);
  widen(y0, y1);
  // Equal scales on both axes.
  const double span = std::max(x1 - x0, y1 - y0) * 1.05;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  Frame f{cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"600\" viewBox=\"0 0 640 600\">\n";
  s += "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
       "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"600\" fill=\"white\"/>\n";
  s += fmt::format("<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
                   escape_xml(title));
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n", f.left, f.top,
                   f.width, f.height);
  s += "<g class=\"arrows\" stroke=\"#c0392b\" stroke-width=\"0.8\">\n";
  for (const auto& r : field) {
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" marker-end=\"url(#head)\"/>\n",
                     f.sx(r.x), f.sy(r.y), f.sx(r.rx), f.sy(r.ry));
  }
  s += "</g>\n<g class=\"cloud\" fill=\"#1f4e79\">\n";
  for (const Point& p : cloud.points()) {
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"1.6\"/>\n", f.sx(p[0]), f.sy(p[1]));
  }
  s += "</g>\n</svg>\n";
  return s;
}

std::string line_plot_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title,
                          const std::string& x_label, const std::string& y_label, double reference) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::invalid_argument, "line_plot_svg: xs and ys differ in length");
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!xs.empty()) {
    x0 = *std::min_element(xs.begin(), xs.end());
    x1 = *std::max_element(xs.begin(), xs.end());
    y0 = std::min(0.0, *std::min_element(ys.begin(), ys.end()));
    y1 = *std::max_element(ys.begin(), ys.end());
  }
  if (!std::isnan(reference)) y1 = std::max(y1, reference);
  widen(x0, x1);
  widen(y0, y1);
  y1 += 0.05 * (y1 - y0);
  Frame f{x0, x1, y0, y1};
  f.height = 400;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"500\" viewBox=\"0 0 640 500\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"500\" fill=\"white\"/>\n";
  s += fmt::format("<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
                   escape_xml(title));
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>\n", f.left, f.top,
                   f.width, f.height);
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                   f.left + f.width / 2, f.top + f.height + 36, escape_xml(x_label));
  s += fmt::format("<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                   "transform=\"rotate(-90 16 {})\">{}</text>\n",
                   f.top + f.height / 2, f.top + f.height / 2, escape_xml(y_label));
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                     "font-size=\"10\">{:.3g}</text>\n",
                     f.sx(xv), f.top + f.height + 16, xv);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-family=\"sans-serif\" "
                     "font-size=\"10\">{:.3g}</text>\n",
                     f.left - 6, f.sy(yv) + 3, yv);
  }
  if (!std::isnan(reference)) {
    s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n",
                     f.left, f.sy(reference), f.left + f.width, f.sy(reference));
  }
  if (!xs.empty()) {
    s += "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) s += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", f.sx(xs[i]), f.sy(ys[i]));
    s += "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.2\" fill=\"#1f4e79\"/>\n", f.sx(xs[i]), f.sy(ys[i]));
    }
  }
  s += "</svg>\n";
  return s;
}

}  // namespace paraconvex
