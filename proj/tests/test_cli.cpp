#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "qiso/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qiso::cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "qiso_cli_test" / name;
  fs::remove_all(p);
  return p;
}

json read_json(const fs::path& p) { return json::parse(qiso::read_text(p)); }

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == qiso::cli::kUsage);
  CHECK(run({"bogus"}).code == qiso::cli::kUsage);
  CHECK(run({"verify", "--m", "1", "--out", scratch("m1").string()}).code == qiso::cli::kUsage);
  CHECK(run({"verify", "--loops", "abc"}).code == qiso::cli::kUsage);
  CHECK(run({"models", "--model", "graphene"}).code == qiso::cli::kUsage);
  CHECK(run({"verify", "--config", "/nonexistent.json"}).code == qiso::cli::kUsage);
  CHECK(run({"--help"}).code == qiso::cli::kOk);
}

TEST_CASE("verify writes margins and a manifest") {
  for (const char* m : {"2", "4"}) {
    const fs::path dir = scratch(std::string("verify") + m);
    const Run r = run({"verify", "--m", m, "--loops", "200", "--n", "512", "--seed", "1", "--out", dir.string()});
    CHECK(r.code == qiso::cli::kOk);
    const std::string csv = qiso::read_text(dir / "margins.csv");
    CHECK(csv.rfind("index,generator,seed,M,K,n,d_fs,gamma_b,weak_margin", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 201);
    const json summary = read_json(dir / "verify_summary.json");
    CHECK(summary["min_weak_margin"].get<double>() >= -1e-6);
    const json manifest = read_json(dir / "manifest.json");
    CHECK(manifest["version"] == qiso::kVersion);
    CHECK(manifest["config"]["seed"] == "1");
    CHECK(manifest["config"]["m"] == m);
  }
}

TEST_CASE("verify output is reproducible") {
  const fs::path a = scratch("rep_a"), b = scratch("rep_b");
  run({"verify", "--m", "3", "--loops", "50", "--n", "256", "--seed", "5", "--out", a.string()});
  run({"verify", "--m", "3", "--loops", "50", "--n", "256", "--seed", "5", "--out", b.string()});
  CHECK(qiso::read_text(a / "margins.csv") == qiso::read_text(b / "margins.csv"));
}

TEST_CASE("config file keys act as defaults and flags override them") {
  const fs::path dir = scratch("config");
  qiso::write_text(dir / "cfg.json", json{{"m", 3}, {"loops", 10}, {"n", 128}, {"seed", 4}}.dump());
  const Run r = run({"verify", "--config", (dir / "cfg.json").string(), "--loops", "12", "--out", (dir / "run").string()});
  CHECK(r.code == qiso::cli::kOk);
  const json manifest = read_json(dir / "run" / "manifest.json");
  CHECK(manifest["config"]["m"] == "3");
  CHECK(manifest["config"]["loops"] == "12");
  CHECK(manifest["config_file"] == (dir / "cfg.json").string());
}

TEST_CASE("figure1 tables") {
  const fs::path dir = scratch("figure1");
  const Run r = run({"figure1", "--n-list", "3,4,6,10000", "--out", dir.string()});
  CHECK(r.code == qiso::cli::kOk);
  const std::string planar = qiso::read_text(dir / "figure1_planar.csv");
  CHECK(planar.find("3,1.65398") != std::string::npos);
  CHECK(planar.find("inf,1\n") != std::string::npos);
  CHECK(fs::exists(dir / "figure1_spherical.csv"));
  CHECK(fs::exists(dir / "figure1.svg"));

  const fs::path jdir = scratch("figure1_json");
  run({"figure1", "--n-list", "64", "--format", "json", "--out", jdir.string()});
  const json sph = read_json(jdir / "figure1_spherical.json");
  CHECK(sph[0]["quotient"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("models and apps") {
  const fs::path dir = scratch("models");
  Run r = run({"models", "--model", "ssh", "--v", "0", "--w", "1", "--format", "json", "--out", dir.string()});
  CHECK(r.code == qiso::cli::kOk);
  const json rep = read_json(dir / "models.json");
  CHECK(rep["summary"]["d_fs"].get<double>() == doctest::Approx(3.141592653589793));
  CHECK(std::abs(rep["summary"]["gamma_b"].get<double>()) == doctest::Approx(3.141592653589793));

  const fs::path adir = scratch("apps");
  r = run({"apps", "--app", "eph", "--model", "dirac", "--ef", "1", "--out", adir.string()});
  CHECK(r.code == qiso::cli::kOk);
  const std::string csv = qiso::read_text(adir / "chain_eph.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.find("1.5707963") != std::string::npos);

  r = run({"apps", "--app", "eph", "--model", "ssh", "--out", adir.string()});
  CHECK(r.code == qiso::cli::kViolation);
}

TEST_CASE("search writes run records and resumes by seed") {
  const fs::path dir = scratch("search");
  const std::vector<std::string> args{"search", "--m", "2", "--k", "1", "--budget", "300", "--restarts", "2",
                                      "--seeds", "0,1", "--out", dir.string()};
  CHECK(run(args).code == qiso::cli::kOk);
  CHECK(fs::exists(dir / "search_seed_0.json"));
  CHECK(fs::exists(dir / "search_seed_1.json"));
  const json rec = read_json(dir / "search_seed_0.json");
  CHECK(rec["result"]["best_margin"].get<double>() >= -1e-5);
  const Run again = run(args);
  CHECK(again.out.find("skipped") != std::string::npos);
}

TEST_CASE("loop-io export and import") {
  const fs::path dir = scratch("loopio");
  const std::string path = (dir / "eq.csv").string();
  CHECK(run({"loop-io", "export", path, "--generator", "great-circle", "--n", "128", "--turns", "2"}).code ==
        qiso::cli::kOk);
  const Run r = run({"loop-io", "import", path});
  CHECK(r.code == qiso::cli::kOk);
  const json rep = json::parse(r.out);
  CHECK(rep["aggregate"]["lhs"].get<double>() == doctest::Approx(2 * 3.141592653589793));
  CHECK(rep["split_events"].size() == 1);
  CHECK(run({"loop-io", "import", (dir / "missing.csv").string()}).code == qiso::cli::kViolation);
}
