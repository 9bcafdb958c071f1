#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "dlab/corpus.hpp"
#include "dlab/scenarios.hpp"
#include "dlab/sha256.hpp"

using namespace dlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double pi = 3.14159265358979323846;

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("dlab_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_simulate() {
  ExperimentConfig cfg = scenario_defaults("simulate");
  cfg.n = {256};
  cfg.L = {100.0};
  cfg.d = 1;
  cfg.k = 4;
  cfg.t1 = 2.0;
  cfg.snap_t0 = 0.5;
  cfg.snapshots = 4;
  cfg.window0 = 0.5;
  cfg.window1 = 2.0;
  return cfg;
}

}  // namespace

TEST_CASE("sha256 matches published vectors and file hashing") {
  CHECK(sha256_hex(std::string("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string("")) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  fs::path dir = temp_dir("sha");
  fs::path f = dir / "payload.bin";
  std::ofstream(f, std::ios::binary) << "dispersive decay laboratory\n";
  CHECK(sha256_file(f.string()) ==
        sha256_hex(std::string("dispersive decay laboratory\n")));
  CHECK_THROWS_AS(sha256_file((dir / "missing").string()), usage_error);
  fs::remove_all(dir);
}

TEST_CASE("per-sample seeds are deterministic, distinct and never zero") {
  CHECK(sample_seed(123, 0) == sample_seed(123, 0));
  CHECK(sample_seed(123, 0) != sample_seed(123, 1));
  CHECK(sample_seed(123, 7) != sample_seed(124, 7));
  for (int i = 0; i < 1000; ++i) CHECK(sample_seed(0, i) != 0);
}

TEST_CASE("corpus samples are reproducible unit-mass real fields") {
  GridPtr g = make_grid(1, 1024, 100.0);
  for (int id : {0, 1, 2, 3}) {
    Field a = corpus_sample(g, id, 777);
    Field b = corpus_sample(g, id, 777);
    REQUIRE(a.size() == b.size());
    for (size_t j = 0; j < a.size(); ++j) CHECK(a.data[j] == b.data[j]);
    CHECK(l2(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.real_flag);
    for (size_t j = 0; j < a.size(); ++j) CHECK(a.data[j].imag() == 0.0);
  }
  Field x = corpus_sample(g, 5, 777);
  Field y = corpus_sample(g, 5, 778);
  double diff = 0.0;
  for (size_t j = 0; j < x.size(); ++j)
    diff = std::max(diff, std::abs(x.data[j] - y.data[j]));
  CHECK(diff > 1e-6);
}

TEST_CASE("random sobolev fields respect the spectral cutoff") {
  GridPtr g = make_grid(1, 512, 2 * pi);
  Field f = corpus_random_sobolev(g, 2.0, 99);
  Field fh = to_spectral(f);
  const double nyq = 256.0;
  for_each_mode(*g, [&](std::size_t flat, const std::array<double, 4>& xi,
                        const std::array<bool, 4>&) {
    if (std::abs(xi[0]) > 0.66 * nyq + 1e-9)
      CHECK(std::abs(fh.data[flat]) < 1e-13);
  });
  CHECK(std::abs(fh.data[0]) < 1e-13);  // no DC mass

  Field cut = corpus_random_sobolev(g, 2.0, 99, 0.66, /*xi_cut=*/10.0);
  Field ch = to_spectral(cut);
  for_each_mode(*g, [&](std::size_t flat, const std::array<double, 4>& xi,
                        const std::array<bool, 4>&) {
    if (std::abs(xi[0]) > 10.0 + 1e-9) CHECK(std::abs(ch.data[flat]) < 1e-13);
  });
}

TEST_CASE("scenario defaults cover the catalog and validate") {
  for (const std::string& name : scenario_names()) {
    ExperimentConfig cfg = scenario_defaults(name);
    CHECK(cfg.scenario == name);
    CHECK_NOTHROW(validate_config(cfg));
  }
  CHECK_THROWS_AS(scenario_defaults("no_such_thing"), config_error);

  ExperimentConfig kdv = scenario_defaults("linear_decay_kdv");
  CHECK(kdv.family == "airy");
  CHECK(kdv.d == 1);
  CHECK(kdv.n == std::vector<int>{8192});
  CHECK(kdv.r_target == 4.0);
  CHECK(kdv.target_exponent == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("config files overlay scenario defaults and reject junk") {
  fs::path dir = temp_dir("cfg");
  {
    std::ofstream out(dir / "min.json");
    out << R"({"scenario": "simulate"})";
  }
  ExperimentConfig cfg = load_config((dir / "min.json").string());
  CHECK(cfg.scenario == "simulate");
  CHECK(cfg.family == "airy");
  CHECK(cfg.amplitude > 0.0);

  {
    std::ofstream out(dir / "override.json");
    out << R"({"scenario": "simulate", "k": 2, "L_over_pi": 100,
               "r_target": "inf", "grid": {"n": 512}})";
  }
  ExperimentConfig c2 = load_config((dir / "override.json").string());
  CHECK(c2.k == 2);
  CHECK(c2.L == std::vector<double>{100 * pi});
  CHECK(std::isinf(c2.r_target));
  CHECK(c2.n == std::vector<int>{512});

  {
    std::ofstream out(dir / "junk.json");
    out << R"({"scenario": "simulate", "dt_rulee": 0.3})";
  }
  try {
    load_config((dir / "junk.json").string());
    CHECK(false);
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("dt_rulee") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("config validation catches inconsistent physics") {
  ExperimentConfig cfg = tiny_simulate();
  cfg.k = 0;
  CHECK_THROWS_AS(validate_config(cfg), config_error);
  cfg = tiny_simulate();
  cfg.amplitude = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), config_error);
  cfg = tiny_simulate();
  cfg.family = "zk";  // zk needs d >= 2
  CHECK_THROWS_AS(validate_config(cfg), config_error);
  cfg = tiny_simulate();
  cfg.window1 = cfg.window0;
  CHECK_THROWS_AS(validate_config(cfg), config_error);
  cfg = tiny_simulate();
  cfg.seed = cfg.calibration_seed;
  CHECK_THROWS_AS(validate_config(cfg), config_error);
}

TEST_CASE("overrides parse values and can rebase the scenario") {
  ExperimentConfig cfg = scenario_defaults("simulate");
  apply_override(cfg, "k=2");
  CHECK(cfg.k == 2);
  apply_override(cfg, "amplitude=0.25");
  CHECK(cfg.amplitude == 0.25);
  apply_override(cfg, "data_family=spectral_bump");
  CHECK(cfg.data_family == "spectral_bump");
  apply_override(cfg, "scenario=lorentz_unit");
  CHECK(cfg.scenario == "lorentz_unit");
  CHECK_THROWS_AS(apply_override(cfg, "nonsense"), config_error);
  CHECK_THROWS_AS(apply_override(cfg, "frobnicate=1"), config_error);
}

TEST_CASE("config echo is valid json with the full knob set") {
  ExperimentConfig cfg = scenario_defaults("linear_decay_kdv");
  json j = json::parse(config_json(cfg));
  CHECK(j["scenario"] == "linear_decay_kdv");
  CHECK(j["family"] == "airy");
  CHECK(j["n"][0] == 8192);
  CHECK(j["target_exponent"].get<double>() == doctest::Approx(-1.0 / 3.0));
  CHECK(j.contains("seed"));
  CHECK(j.contains("guard_threshold"));
}

TEST_CASE("norms.csv round-trips exactly with the documented header") {
  fs::path dir = temp_dir("csv");
  std::vector<NormRow> rows(3);
  rows[0] = {0.0, 1.0, 0.5, 0.7, 1.1, 2.0, 0.33, 1e-12};
  rows[1] = {1.5, 0.9, 0.41234567890123456, 0.6, 1.0, 2.0, 0.33, 2e-9};
  rows[2] = {50.0, 0.5, 1.0 / 3.0, 0.4, 0.8, 2.0, 0.33, 0.1};
  const std::string path = (dir / "norms.csv").string();
  write_norms_csv(path, rows);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "t, L2, Linf, Lr_target, Hhalf, mass, energy, boundary_mass_fraction");

  std::vector<NormRow> back = read_norms_csv(path);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].t == rows[i].t);
    CHECK(back[i].Linf == rows[i].Linf);
    CHECK(back[i].bfrac == rows[i].bfrac);
  }
  fs::remove_all(dir);
}

TEST_CASE("fit and inequality artifacts parse back as documented") {
  fs::path dir = temp_dir("emit");
  FitRecord rec;
  rec.label = "Linf";
  rec.fit.w0 = 5;
  rec.fit.w1 = 50;
  rec.fit.exponent = -0.3341;
  rec.fit.stderr_slope = 0.002;
  rec.fit.amplitude = 1.7;
  rec.fit.weighted_sup = 0.91;
  rec.target = -1.0 / 3.0;
  rec.tolerance = 0.03;
  rec.pass = true;
  write_fit_json((dir / "fit.json").string(), {rec});
  json j = json::parse(slurp(dir / "fit.json"));
  REQUIRE(j.contains("fits"));
  REQUIRE(j["fits"].is_array());
  const json& f0 = j["fits"][0];
  CHECK(f0["window"][0] == 5.0);
  CHECK(f0["exponent"].get<double>() == doctest::Approx(-0.3341));
  CHECK(f0.contains("stderr"));
  CHECK(f0.contains("amplitude"));
  CHECK(f0.contains("weighted_sup"));
  CHECK(f0["target"].get<double>() == doctest::Approx(-1.0 / 3.0));
  CHECK(f0["pass"] == true);

  InequalityEntry e;
  e.sample_id = 3;
  e.form = "kato_ponce";
  e.s = 0.7;
  e.p = 2.5;
  e.lhs = 0.4;
  e.rhs = 0.9;
  e.ratio = 0.4 / 0.9;
  write_inequality_csv((dir / "inequality.csv").string(), {e});
  std::ifstream in(dir / "inequality.csv");
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "sample_id, form, s, p, lhs, rhs, ratio");
  std::getline(in, line);
  CHECK(line.find("kato_ponce") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("manifests hash their artifacts faithfully") {
  fs::path dir = temp_dir("manifest");
  std::ofstream(dir / "norms.csv") << "t, L2\n0, 1\n";
  RunManifest m;
  m.scenario = "simulate";
  m.pass = true;
  m.files.emplace_back("norms.csv", "");
  m.config_echo = "{\"scenario\": \"simulate\"}";
  write_manifest(dir.string(), m);

  json j = json::parse(slurp(dir / "manifest.json"));
  CHECK(j["scenario"] == "simulate");
  CHECK(j["pass"] == true);
  const std::string digest = j["files"]["norms.csv"];
  CHECK(digest == sha256_file((dir / "norms.csv").string()));
  CHECK(digest.size() == 64);
  fs::remove_all(dir);
}

TEST_CASE("dry runs validate without touching the filesystem") {
  ExperimentConfig cfg = tiny_simulate();
  fs::path dir = fs::temp_directory_path() / "dlab_test_dry_out";
  fs::remove_all(dir);
  cfg.outdir = dir.string();
  cfg.dry_run = true;
  RunManifest m = run_scenario(cfg);
  CHECK_FALSE(fs::exists(dir));
  CHECK(!m.config_echo.empty());
  CHECK(json::parse(m.config_echo)["scenario"] == "simulate");
}

TEST_CASE("a small driven run emits coherent, reproducible artifacts") {
  ExperimentConfig cfg = tiny_simulate();
  fs::path d1 = temp_dir("run1"), d2 = temp_dir("run2");

  cfg.outdir = d1.string();
  RunManifest m1 = run_scenario(cfg);
  CHECK(m1.pass);
  CHECK(m1.steps > 0);
  CHECK(fs::exists(d1 / "norms.csv"));
  CHECK(fs::exists(d1 / "manifest.json"));
  CHECK(m1.mass_drift <= 1e-10);

  std::vector<NormRow> rows = read_norms_csv((d1 / "norms.csv").string());
  REQUIRE(rows.size() >= 4);
  CHECK(rows.front().t == 0.0);
  CHECK(rows.front().mass == doctest::Approx(rows.back().mass).epsilon(1e-9));
  for (const auto& r : rows) {
    CHECK(r.L2 > 0.0);
    CHECK(r.Linf > 0.0);
    CHECK(r.Linf <= r.L2 * 10);  // sane magnitudes on this box
  }

  cfg.outdir = d2.string();
  RunManifest m2 = run_scenario(cfg);
  CHECK(slurp(d1 / "norms.csv") == slurp(d2 / "norms.csv"));
  CHECK(m2.steps == m1.steps);

  json j = json::parse(slurp(d1 / "manifest.json"));
  CHECK(j["files"]["norms.csv"] ==
        sha256_file((d1 / "norms.csv").string()));
  CHECK(j["config"]["scenario"] == "simulate");
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("scenario dispatch rejects unknown names and bad data families") {
  ExperimentConfig cfg = tiny_simulate();
  cfg.scenario = "warp_drive";
  fs::path dir = temp_dir("bad");
  cfg.outdir = dir.string();
  CHECK_THROWS_AS(run_scenario(cfg), config_error);

  ExperimentConfig c2 = tiny_simulate();
  c2.data_family = "mystery";
  c2.outdir = dir.string();
  CHECK_THROWS_AS(run_scenario(c2), config_error);
  fs::remove_all(dir);
}

TEST_CASE("initial data builders respect normalization switches") {
  ExperimentConfig cfg = tiny_simulate();
  GridPtr g = grid_from(cfg);
  Field u = build_data(cfg, g);
  CHECK(linf(u) == doctest::Approx(cfg.amplitude).epsilon(1e-12));

  cfg.normalize_hhalf = 0.1;
  Field v = build_data(cfg, g);
  CHECK(norm(v, NormSpec::Sobolev(0.5)) == doctest::Approx(0.1).epsilon(1e-12));

  cfg.normalize_hhalf = 0.0;
  cfg.amplitude_scale = 2.0;
  Field w = build_data(cfg, g);
  CHECK(linf(w) == doctest::Approx(2 * cfg.amplitude).epsilon(1e-12));

  cfg.amplitude_scale = 1.0;
  cfg.data_family = "spectral_bump";
  Field b = build_data(cfg, g);
  CHECK(linf(b) == doctest::Approx(cfg.amplitude).epsilon(1e-12));
  CHECK(b.real_flag);
}

TEST_CASE("norm rows carry the conserved pair of the equation spec") {
  ExperimentConfig cfg = tiny_simulate();
  GridPtr g = grid_from(cfg);
  Field u = build_data(cfg, g);
  EquationSpec spec = equation_from(cfg);
  NormRow row = norm_row(0.0, u, spec, 4.0, 0.05);
  CHECK(row.L2 == doctest::Approx(l2(u)).epsilon(1e-13));
  CHECK(row.Linf == doctest::Approx(linf(u)).epsilon(1e-13));
  auto [mass, energy] = conserved(u, spec);
  CHECK(row.mass == doctest::Approx(mass).epsilon(1e-13));
  CHECK(row.energy == doctest::Approx(energy).epsilon(1e-13));
  CHECK(row.Lr == doctest::Approx(norm(u, NormSpec::Lebesgue(4.0))).epsilon(1e-13));
  CHECK(row.Hhalf ==
        doctest::Approx(norm(u, NormSpec::Sobolev(0.5))).epsilon(1e-13));
}
