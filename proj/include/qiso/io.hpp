#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qiso/applications.hpp"
#include "qiso/inequalities.hpp"
#include "qiso/loops.hpp"
#include "qiso/search.hpp"

namespace qiso {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);

/// Loop CSV: a first line "# {json header}" with M, n, generator,
/// parameters and seed, then "index,re0,im0,re1,im1,..." and one row per state.
struct LoopFile {
  Loop loop;
  nlohmann::json header;
};

std::string loop_to_csv(const Loop& loop, nlohmann::json header);
LoopFile loop_from_csv(const std::string& text);
void write_loop_csv(const std::filesystem::path& path, const Loop& loop, nlohmann::json header);
LoopFile read_loop_csv(const std::filesystem::path& path);

nlohmann::json to_json(const LoopSummary& s);
nlohmann::json to_json(const IneqReport& r);
nlohmann::json to_json(const BoundChain& c);
nlohmann::json to_json(const FourierLoopSpec& s);
FourierLoopSpec fourier_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchConfig& c);
nlohmann::json to_json(const SearchResult& r);

/// Rows "label,value,unit".
std::string chain_to_csv(const BoundChain& c, bool with_header = true);

/// Minimal CSV table writer with a fixed column order.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Polyline/circle/text SVG emitter in data coordinates.
class SvgPlot {
 public:
  SvgPlot(double width, double height, double x_min, double x_max, double y_min, double y_max);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double stroke_width = 1.5);
  void circle(double x, double y, double radius_px, const std::string& fill);
  void text(double x, double y, const std::string& label, double size_px = 12.0);
  void axes(const std::string& x_label, const std::string& y_label);
  std::string str() const;

 private:
  double px(double x) const;
  double py(double y) const;
  double width_, height_, x_min_, x_max_, y_min_, y_max_;
  std::vector<std::string> items_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace qiso
