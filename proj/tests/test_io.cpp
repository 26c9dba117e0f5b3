#include <doctest.h>

#include <clocale>
#include <filesystem>

#include "oracles.hpp"
#include "qiso/error.hpp"
#include "qiso/io.hpp"
#include "qiso/loops.hpp"

using namespace qiso;
using oracle::pi;

TEST_CASE("format_double round trips and ignores locale") {
  for (double x : {0.0, -1.5, pi, 1e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.5).find(',') == std::string::npos);
}

TEST_CASE("loop CSV round trip is exact") {
  std::mt19937_64 rng = make_rng(71, 0);
  const Loop loop = fourier_loop(random_fourier_spec(3, 2, 64, rng));
  const std::string text = loop_to_csv(loop, {{"generator", "fourier"}, {"seed", 71}});
  CHECK(text.rfind("# {", 0) == 0);
  const LoopFile back = loop_from_csv(text);
  CHECK(back.header["M"] == 3);
  CHECK(back.header["n"] == 64);
  CHECK(back.header["generator"] == "fourier");
  CHECK((back.loop.columns() - loop.columns()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("loop CSV rejects malformed input") {
  CHECK_THROWS_AS(loop_from_csv("index,re0,im0\n0,1,0\n"), Error);
  CHECK_THROWS_AS(loop_from_csv("# {\"M\":2}\nindex,re0,im0,re1,im1\n0,1,0,x,0\n"), Error);
  CHECK_THROWS_AS(read_loop_csv("/nonexistent/loop.csv"), Error);
}

TEST_CASE("file helpers create directories") {
  const auto dir = std::filesystem::temp_directory_path() / "qiso_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_loop_csv(dir / "c.csv", bloch_circle(1.0, 16), {{"generator", "circle"}});
  CHECK(read_loop_csv(dir / "c.csv").loop.size() == 16);
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("chain CSV and tables") {
  BoundChain c;
  c.name = "demo";
  c.entries = {{"a", 2.0, "u"}, {"b", 1.0, "u"}};
  CHECK(chain_to_csv(c) == "label,value,unit\na,2,u\nb,1,u\n");
  CsvTable t({"x", "y"});
  t.add_row({"1", "2"});
  CHECK(t.str() == "x,y\n1,2\n");
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
}

TEST_CASE("SVG emitter produces a closed document") {
  SvgPlot p(100, 80, 0, 1, 0, 1);
  p.polyline({{0, 0}, {1, 1}}, "#000");
  p.circle(0.5, 0.5, 2, "#f00");
  p.text(0.1, 0.9, "a<b");
  const std::string s = p.str();
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("a&lt;b") != std::string::npos);
}
