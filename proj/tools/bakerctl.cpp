// bakerctl: batch driver for spectra, counting, Weyl fits, toy checks, transport and
// classical escape data.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bakerlab/config.hpp"
#include "bakerlab/jobs.hpp"
#include "bakerlab/manifest.hpp"

namespace {

using namespace bakerlab;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  int workers = 0;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("config", args.config_path, "config file (key = value lines)")->check(CLI::ExistingFile);
  sub->add_option("--set", args.overrides, "override a config entry, e.g. --set dims.list=100,500")
      ->type_name("KEY=VALUE");
  sub->add_option("--out", args.out_dir, "output directory (overrides output.dir)");
  sub->add_option("--workers", args.workers, "worker threads (overrides BAKER_WORKERS and the config)")
      ->check(CLI::PositiveNumber);
}

RunConfig load(const CommonArgs& args) {
  std::map<std::string, std::string> entries;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("cannot open " + args.config_path);
    entries = read_config_entries(in);
  }
  for (const auto& o : args.overrides) {
    auto [k, v] = split_assignment(o);
    entries[k] = v;
  }
  if (!args.out_dir.empty()) entries["output.dir"] = args.out_dir;
  return build_config(entries);
}

int report(const RunManifest& m, const RunConfig& cfg) {
  int failed = 0;
  for (const auto& j : m.jobs) {
    if (j.ok) continue;
    ++failed;
    std::cerr << "error: " << j.name << ": " << j.error << '\n';
  }
  std::cout << m.command << ": " << m.jobs.size() - failed << "/" << m.jobs.size() << " jobs ok, "
            << m.files().size() << " files in " << cfg.output_dir.string() << '\n';
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bakerctl: open baker map spectra and transport"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonArgs args;
  struct Verb {
    const char* name;
    const char* help;
  };
  const std::vector<Verb> verbs = {
      {"spectrum", "spectra per N plus counts, Weyl fit and profile"},
      {"count", "spectra per N plus the counts table"},
      {"weyl", "spectra per N plus the Weyl fit"},
      {"profile", "spectra per N plus rescaled profile curves"},
      {"toy-check", "compare toy-model spectra with the closed form"},
      {"transport", "transmission, conductance and shot noise per (k, theta)"},
      {"classical", "escape-time grids, fractal dimensions, transfer spectra"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    add_common(sub, args);
    subs[v.name] = sub;
  }
  std::string manifest_dir;
  auto* manifest_cmd = app.add_subcommand("manifest", "verify that a run directory matches its manifest");
  manifest_cmd->add_option("dir", manifest_dir, "output directory of a previous run")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (manifest_cmd->parsed()) {
      const auto m = read_manifest(manifest_dir);
      const auto check = verify_manifest(manifest_dir);
      for (const auto& f : check.missing) std::cerr << "missing: " << f << '\n';
      for (const auto& f : check.unlisted) std::cerr << "unlisted: " << f << '\n';
      for (const auto& f : check.duplicates) std::cerr << "duplicate: " << f << '\n';
      std::cout << m.command << " run, tool " << m.tool_version << ", " << m.jobs.size() << " jobs ("
                << (m.all_ok() ? "all ok" : "some failed") << "), " << m.files().size() << " files: "
                << (check.ok() ? "consistent" : "INCONSISTENT") << '\n';
      return check.ok() && m.all_ok() ? 0 : 2;
    }

    const RunConfig cfg = load(args);
    const int workers = resolve_workers(cfg, args.workers);
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      if (name == "transport") {
        if (cfg.transport_ks.empty()) throw ConfigError("transport needs transport.k_min / transport.k_max");
        return report(run_transport_job(cfg, workers), cfg);
      }
      if (cfg.dimensions.empty() && name != "classical") throw ConfigError(name + " needs dims.list or dims.N0");
      if (name == "classical") return report(run_classical_job(cfg, workers), cfg);
      if (name == "toy-check") {
        if (cfg.family != MapFamily::ToyDiagonal && !(cfg.family == MapFamily::Walsh && cfg.spec == OpenBakerSpec::three_baker() &&
                                                    cfg.variant == WalshVariant::W))
          throw ConfigError("toy-check needs map.family = toy-diagonal (or walsh with D=3, kept=0,2, variant W)");
        return report(run_toy_check_job(cfg, workers), cfg);
      }
      SpectrumStages stages;
      if (name != "spectrum") stages = {name == "count", name == "weyl", name == "profile"};
      auto m = run_spectrum_job(cfg, workers, stages);
      m.command = name;
      write_manifest(cfg.output_dir, m);
      return report(m, cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
