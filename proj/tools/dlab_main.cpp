#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlab/scenarios.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string outdir;
  std::string seed_str;
  int threads = 0;
  bool dry_run = false;
  std::vector<std::string> overrides;
};

void attach_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "JSON config file");
  sub->add_option("--out", o.outdir, "output directory");
  sub->add_option("--seed", o.seed_str, "corpus seed (uint64)");
  sub->add_option("--threads", o.threads, "worker threads");
  sub->add_flag("--dry-run", o.dry_run, "validate config and exit");
  sub->add_option("overrides", o.overrides, "key=value config overrides");
}

void print_manifest(const dlab::RunManifest& m) {
  for (const auto& f : m.fits) {
    std::printf("  fit %-24s exponent % .6f  target % .4f +/- %.4f  %s%s\n",
                f.label.c_str(), f.fit.exponent, f.target, f.tolerance,
                f.pass ? "ok" : "FAIL", f.gated ? "" : " (ungated)");
  }
  for (const auto& r : m.ratios) {
    std::printf("  ratio %-38s % .9g  %s%s\n", r.label.c_str(), r.value,
                r.pass ? "ok" : "FAIL", r.gated ? "" : " (ungated)");
  }
  for (const auto& n : m.notes) std::printf("  note: %s\n", n.c_str());
  std::printf("scenario %s: %s (%.1fs, %d steps)\n", m.scenario.c_str(),
              m.pass ? "PASS" : "FAIL", m.wall_seconds, m.steps);
}

int run_one(const std::string& default_scenario, const CommonOpts& o) {
  dlab::ExperimentConfig cfg;
  if (!o.config_path.empty())
    cfg = dlab::load_config(o.config_path);
  else
    cfg = dlab::scenario_defaults(default_scenario);
  for (const auto& kv : o.overrides) dlab::apply_override(cfg, kv);
  if (!o.outdir.empty()) cfg.outdir = o.outdir;
  if (!o.seed_str.empty()) cfg.seed = std::stoull(o.seed_str);
  if (o.threads > 0) cfg.threads = o.threads;
  if (o.dry_run) cfg.dry_run = true;

  dlab::RunManifest m = dlab::run_scenario(cfg);
  if (cfg.dry_run) {
    std::printf("%s\n", m.config_echo.c_str());
    return 0;
  }
  print_manifest(m);
  return m.pass ? 0 : 1;
}

int run_report(const std::string& outdir) {
  if (outdir.empty()) {
    std::fprintf(stderr, "report needs --out pointing at run outputs\n");
    return 2;
  }
  std::vector<fs::path> manifests;
  const fs::path root(outdir);
  if (fs::is_regular_file(root) && root.filename() == "manifest.json")
    manifests.push_back(root);
  else if (fs::is_directory(root))
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file() && e.path().filename() == "manifest.json")
        manifests.push_back(e.path());
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) {
    std::fprintf(stderr, "no manifest.json found under %s\n", outdir.c_str());
    return 2;
  }

  bool all_pass = true;
  for (const auto& p : manifests) {
    std::ifstream in(p);
    json j = json::parse(in);
    const bool pass = j.value("pass", false);
    all_pass = all_pass && pass;
    std::printf("%-24s %-4s  wall %8.1fs  steps %6d  files %zu\n",
                j.value("scenario", std::string("?")).c_str(),
                pass ? "PASS" : "FAIL", j.value("wall_seconds", 0.0),
                j.value("steps", 0), j.value("files", json::object()).size());
    for (const auto& f : j.value("fits", json::array())) {
      if (!f.value("gated", false) || f.value("pass", false)) continue;
      std::printf("    failed fit %s: exponent %.6f vs target %.4f\n",
                  f.value("label", std::string("?")).c_str(),
                  f.value("exponent", 0.0), f.value("target", 0.0));
    }
    for (const auto& r : j.value("ratios", json::array())) {
      if (!r.value("gated", false) || r.value("pass", false)) continue;
      std::printf("    failed ratio %s: %.9g vs target %.9g\n",
                  r.value("label", std::string("?")).c_str(),
                  r.value("value", 0.0), r.value("target", 0.0));
    }
  }
  std::printf("overall: %s (%zu runs)\n", all_pass ? "PASS" : "FAIL",
              manifests.size());
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dispersive decay laboratory"};
  app.require_subcommand(1);

  struct SubDef {
    const char* name;
    const char* scenario;
    const char* help;
  };
  const SubDef defs[] = {
      {"simulate", "simulate", "evolve an initial-value problem"},
      {"linear-decay", "linear_decay_kdv", "free-evolution decay fits"},
      {"nonlinear-decay", "nonlinear_decay_gkdv",
       "small-data nonlinear decay fits"},
      {"kato", "kato_identity", "local smoothing identity checks"},
      {"strichartz", "strichartz_scan", "space-time norm ratio scans"},
      {"commutators", "commutator_corpus",
       "fractional Leibniz / commutator corpus"},
      {"lorentz", "lorentz_unit", "Lorentz-norm identities and bounds"},
  };

  std::vector<CommonOpts> opts(std::size(defs));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(defs); ++i) {
    CLI::App* sub = app.add_subcommand(defs[i].name, defs[i].help);
    attach_common(sub, opts[i]);
    subs.push_back(sub);
  }

  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "summarize run manifests");
  report->add_option("--out", report_out, "directory holding manifests")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return run_report(report_out);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return run_one(defs[i].scenario, opts[i]);
    return 2;
  } catch (const dlab::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const dlab::usage_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const dlab::numeric_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
