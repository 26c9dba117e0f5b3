#include "qiso/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qiso {

namespace {

double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string loop_to_csv(const Loop& loop, nlohmann::json header) {
  header["M"] = loop.dim();
  header["n"] = loop.size();
  std::string out = "# " + header.dump() + "\n";
  out += "index";
  for (Eigen::Index i = 0; i < loop.dim(); ++i) {
    out += ",re" + std::to_string(i) + ",im" + std::to_string(i);
  }
  out += "\n";
  for (Eigen::Index j = 0; j < loop.size(); ++j) {
    out += std::to_string(j);
    for (Eigen::Index i = 0; i < loop.dim(); ++i) {
      const cplx z = loop.columns()(i, j);
      out += "," + format_double(z.real()) + "," + format_double(z.imag());
    }
    out += "\n";
  }
  return out;
}

LoopFile loop_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  nlohmann::json header = nlohmann::json::object();
  std::vector<std::vector<double>> rows;
  bool seen_columns = false;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      try {
        header = nlohmann::json::parse(line.substr(1));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("bad loop header: ") + e.what());
      }
      continue;
    }
    const auto cells = split_commas(line);
    if (!seen_columns) {
      seen_columns = true;
      if (cells.front() == "index") {
        width = static_cast<Eigen::Index>(cells.size());
        continue;
      }
    }
    if (width < 0) width = static_cast<Eigen::Index>(cells.size());
    if (static_cast<Eigen::Index>(cells.size()) != width || width < 3 || width % 2 == 0) {
      throw Error(ErrorKind::InvalidArgument, "loop CSV row has the wrong number of columns");
    }
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(parse_double(cells[c]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "loop CSV has no states");
  const Eigen::Index m = (width - 1) / 2;
  if (header.contains("M") && header["M"].get<Eigen::Index>() != m) {
    throw Error(ErrorKind::DimensionMismatch, "loop header M disagrees with the column count");
  }
  CMatrix c(m, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      c(i, static_cast<Eigen::Index>(j)) = cplx(rows[j][static_cast<std::size_t>(2 * i)], rows[j][static_cast<std::size_t>(2 * i + 1)]);
    }
  }
  return {Loop::from_columns(std::move(c)), header};
}

void write_loop_csv(const std::filesystem::path& path, const Loop& loop, nlohmann::json header) {
  write_text(path, loop_to_csv(loop, std::move(header)));
}

LoopFile read_loop_csv(const std::filesystem::path& path) { return loop_from_csv(read_text(path)); }

nlohmann::json to_json(const LoopSummary& s) {
  return {{"d_fs", s.d_fs},
          {"gamma_b", s.gamma_b},
          {"gamma_total", s.gamma_total},
          {"n_segments", s.n_segments},
          {"dim", s.dim},
          {"convergence_est", s.convergence_est}};
}

nlohmann::json to_json(const IneqReport& r) {
  nlohmann::json j{{"name", std::string(to_string(r.name))},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"margin", r.margin},
                   {"saturated", r.saturated},
                   {"tol", r.tol},
                   {"conjecture", r.conjecture},
                   {"inputs", r.inputs}};
  if (r.name == IneqKind::WeakQII || r.name == IneqKind::Aggregate) j["margin_abs"] = r.margin_abs;
  if (!r.extras.empty()) j["extras"] = r.extras;
  return j;
}

nlohmann::json to_json(const BoundChain& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : c.entries) entries.push_back({{"label", e.label}, {"value", e.value}, {"unit", e.unit}});
  return {{"name", c.name},
          {"entries", entries},
          {"monotone", c.monotone()},
          {"max_violation", c.max_violation()},
          {"notes", c.notes}};
}

nlohmann::json to_json(const FourierLoopSpec& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.coeffs.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index m = 0; m < s.coeffs.cols(); ++m) row.push_back({s.coeffs(i, m).real(), s.coeffs(i, m).imag()});
    coeffs.push_back(row);
  }
  return {{"M", s.M}, {"K", s.K}, {"n", s.n}, {"coeffs", coeffs}};
}

FourierLoopSpec fourier_spec_from_json(const nlohmann::json& j) {
  try {
    FourierLoopSpec s = FourierLoopSpec::zeros(j.at("M").get<int>(), j.at("K").get<int>(), j.at("n").get<int>());
    const auto& coeffs = j.at("coeffs");
    for (Eigen::Index i = 0; i < s.coeffs.rows(); ++i) {
      for (Eigen::Index m = 0; m < s.coeffs.cols(); ++m) {
        const auto& c = coeffs.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(m));
        s.coeffs(i, m) = cplx(c.at(0).get<double>(), c.at(1).get<double>());
      }
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad Fourier spec: ") + e.what());
  }
}

nlohmann::json to_json(const SearchConfig& c) {
  return {{"M", c.M},           {"K", c.K},         {"n", c.n},
          {"budget", c.budget}, {"restarts", c.restarts}, {"seed", c.seed},
          {"coeff_bound", c.coeff_bound}, {"violation_tol", c.violation_tol}};
}

nlohmann::json to_json(const SearchResult& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& [idx, v] : r.history) history.push_back({idx, v});
  nlohmann::json j{{"best_margin", r.best_margin},
                   {"best_spec", to_json(r.best_spec)},
                   {"evals", r.evals},
                   {"history", history},
                   {"restart_best", r.restart_best},
                   {"rechecked", r.rechecked},
                   {"violation", r.violation},
                   {"status", r.status}};
  if (r.rechecked) {
    j["recheck_margin"] = r.recheck_margin;
    j["recheck_n"] = r.recheck_n;
  }
  return j;
}

std::string chain_to_csv(const BoundChain& c, bool with_header) {
  CsvTable t({"label", "value", "unit"});
  for (const auto& e : c.entries) t.add_row({e.label, format_double(e.value), e.unit});
  std::string s = t.str();
  if (!with_header) s = s.substr(s.find('\n') + 1);
  return s;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
  rows_.push_back(cells);
}

std::string CsvTable::str() const {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + quote(columns_[i]);
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + quote(row[i]);
    out += "\n";
  }
  return out;
}

SvgPlot::SvgPlot(double width, double height, double x_min, double x_max, double y_min, double y_max)
    : width_(width), height_(height), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!(x_max > x_min) || !(y_max > y_min)) throw Error(ErrorKind::InvalidArgument, "empty plot range");
}

double SvgPlot::px(double x) const { return 50.0 + (x - x_min_) / (x_max_ - x_min_) * (width_ - 70.0); }
double SvgPlot::py(double y) const { return height_ - 40.0 - (y - y_min_) / (y_max_ - y_min_) * (height_ - 60.0); }

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double stroke_width) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + xml_escape(stroke) + "\" stroke-width=\"" +
                  format_double(stroke_width) + "\" points=\"";
  for (const auto& [x, y] : pts) s += format_double(px(x)) + "," + format_double(py(y)) + " ";
  s += "\"/>";
  items_.push_back(std::move(s));
}

void SvgPlot::circle(double x, double y, double radius_px, const std::string& fill) {
  items_.push_back("<circle cx=\"" + format_double(px(x)) + "\" cy=\"" + format_double(py(y)) + "\" r=\"" +
                   format_double(radius_px) + "\" fill=\"" + xml_escape(fill) + "\"/>");
}

void SvgPlot::text(double x, double y, const std::string& label, double size_px) {
  items_.push_back("<text x=\"" + format_double(px(x)) + "\" y=\"" + format_double(py(y)) + "\" font-size=\"" +
                   format_double(size_px) + "\" font-family=\"sans-serif\">" + xml_escape(label) + "</text>");
}

void SvgPlot::axes(const std::string& x_label, const std::string& y_label) {
  polyline({{x_min_, y_min_}, {x_max_, y_min_}}, "black", 1.0);
  polyline({{x_min_, y_min_}, {x_min_, y_max_}}, "black", 1.0);
  items_.push_back("<text x=\"" + format_double(width_ / 2) + "\" y=\"" + format_double(height_ - 10.0) +
                   "\" font-size=\"13\" font-family=\"sans-serif\">" + xml_escape(x_label) + "</text>");
  items_.push_back("<text x=\"12\" y=\"" + format_double(height_ / 2) +
                   "\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 12 " +
                   format_double(height_ / 2) + ")\">" + xml_escape(y_label) + "</text>");
  text(x_min_, y_min_, format_double(x_min_), 10.0);
  text(x_max_, y_min_, format_double(x_max_), 10.0);
  text(x_min_, y_max_, format_double(y_max_), 10.0);
}

std::string SvgPlot::str() const {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width_) + "\" height=\"" +
                  format_double(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& item : items_) s += item + "\n";
  return s + "</svg>\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qiso
