#include "bakerlab/jobs.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "bakerlab/classical.hpp"
#include "bakerlab/format.hpp"
#include "bakerlab/quantize.hpp"
#include "bakerlab/transport.hpp"

namespace bakerlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::string radius_tag(double r) { return format_double(r); }

int length_for(int base, std::int64_t n) {
  int k = 0;
  std::int64_t p = 1;
  while (p < n) p *= base, ++k;
  if (p != n) throw DomainError("N = " + std::to_string(n) + " is not a power of " + std::to_string(base));
  return k;
}

void warn(JobRecord& rec, const std::string& msg) {
  static std::mutex mu;
  rec.warnings.push_back(msg);
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "warning: " << rec.name << ": " << msg << '\n';
}

RunManifest make_manifest(const std::string& command, const RunConfig& cfg) {
  RunManifest m;
  m.command = command;
  m.config = cfg.echo;
  return m;
}

}  // namespace

std::vector<JobRecord> run_jobs(const std::vector<Job>& jobs, int workers) {
  std::vector<JobRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      auto& rec = records[i];
      rec.name = jobs[i].name;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        jobs[i].run(rec);
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      rec.seconds = seconds_since(t0);
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return records;
}

Spectrum compute_spectrum(const RunConfig& cfg, std::int64_t n) {
  const auto id = map_id(cfg, n);
  id.validate();
  const std::int64_t target = cfg.parity == Sector::Full ? n : n / 2;

  ComplexMatrix m;
  if (cfg.family == MapFamily::Dft) {
    const std::int64_t reduced = cfg.spec.kept_count() * (n / cfg.spec.branches()) / (cfg.parity == Sector::Full ? 1 : 2);
    if (reduced > cfg.dimension_cap)
      throw DomainError("dimension " + std::to_string(reduced) + " exceeds limits.dim_cap = " +
                        std::to_string(cfg.dimension_cap));
    m = quantize_open_compressed(cfg.spec, n, cfg.parity);
  } else {
    if (target > cfg.dimension_cap)
      throw DomainError("dimension " + std::to_string(target) + " exceeds limits.dim_cap = " +
                        std::to_string(cfg.dimension_cap));
    m = build_quantum_map(id);
    if (cfg.parity != Sector::Full) m = parity_restrict(m, cfg.parity);
  }

  EigenOptions opts;
  opts.dimension_cap = cfg.dimension_cap;
  Spectrum s = eigen_spectrum(m, opts);
  s.values.resize(static_cast<std::size_t>(target), cplx(0.0, 0.0));
  canonical_sort(s.values);
  s.map = id;
  s.sector = cfg.parity;
  s.map_dimension = n;
  return s;
}

RunManifest run_spectrum_job(const RunConfig& cfg, int workers, SpectrumStages stages) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);
  auto manifest = make_manifest("spectrum", cfg);

  std::vector<std::optional<Spectrum>> spectra(cfg.dimensions.size());
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cfg.dimensions.size(); ++i) {
    const auto n = cfg.dimensions[i];
    jobs.push_back({"spectrum N=" + std::to_string(n) + " " + to_string(cfg.parity), [&, i, n](JobRecord& rec) {
                      Spectrum s = compute_spectrum(cfg, n);
                      const std::string name = "spectrum_N" + std::to_string(n) + "_" + to_string(cfg.parity) + ".csv";
                      auto out = open_out(cfg.output_dir / name);
                      write_spectrum_csv(out, s);
                      rec.files.push_back(name);
                      spectra[i] = std::move(s);
                    }});
  }
  manifest.jobs = run_jobs(jobs, workers);

  std::vector<const Spectrum*> done;
  for (const auto& s : spectra)
    if (s) done.push_back(&*s);

  if (!cfg.radii.empty() && !done.empty()) {
    std::vector<Job> aggregate;
    if (stages.counts) {
      aggregate.push_back({"counts", [&](JobRecord& rec) {
                             std::vector<CountRow> rows;
                             for (const auto* s : done) {
                               for (double r : cfg.radii) {
                                 rows.push_back({s->map_dimension, r, count_sector(*s, {r, cfg.sector_theta, cfg.sector_rho})});
                                 if (const int near = boundary_proximity(*s, r))
                                   warn(rec, std::to_string(near) + " eigenvalue(s) within 1e-9 of r = " + radius_tag(r) +
                                                 " at N = " + std::to_string(s->map_dimension));
                               }
                             }
                             auto out = open_out(cfg.output_dir / "counts.csv");
                             write_counts_csv(out, rows);
                             rec.files.push_back("counts.csv");
                           }});
    }
    if (stages.weyl) {
      aggregate.push_back({"weyl", [&](JobRecord& rec) {
                             if (done.size() < 2) {
                               warn(rec, "weyl fit skipped: needs at least two dimensions");
                               return;
                             }
                             std::vector<std::pair<std::int64_t, int>> series;
                             for (const auto* s : done)
                               series.emplace_back(s->map_dimension,
                                                   count_sector(*s, {cfg.weyl_r, cfg.sector_theta, cfg.sector_rho}));
                             const auto fit = weyl_fit(series, cfg.expected_mu);
                             json pts = json::array();
                             for (const auto& p : fit.points)
                               pts.push_back({{"N", p.n}, {"count", p.count}, {"log_residual", p.log_residual}});
                             json j{{"r", cfg.weyl_r},
                                    {"slope", fit.slope},
                                    {"intercept", fit.intercept},
                                    {"points", pts},
                                    {"doubling_ratios", fit.doubling_ratios},
                                    {"expected_mu", optional_json(fit.expected_mu)},
                                    {"tolerance", fit.tolerance},
                                    {"consistent", fit.consistent()}};
                             write_json_file(cfg.output_dir / "weyl.json", j);
                             rec.files.push_back("weyl.json");
                           }});
    }
    if (stages.profile) {
      aggregate.push_back({"profile", [&](JobRecord& rec) {
                             if (!cfg.expected_mu) throw DomainError("profile needs weyl.expected_mu for a closed map");
                             std::vector<Spectrum> copies;
                             for (const auto* s : done) copies.push_back(*s);
                             const auto rows = profile_curve(copies, *cfg.expected_mu, cfg.radii, cfg.spec.branches());
                             auto out = open_out(cfg.output_dir / "profile.csv");
                             write_profile_csv(out, rows);
                             rec.files.push_back("profile.csv");
                           }});
    }
    for (auto& r : run_jobs(aggregate, 1)) manifest.jobs.push_back(std::move(r));
  }
  manifest.seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_toy_check_job(const RunConfig& cfg, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);
  auto manifest = make_manifest("toy-check", cfg);
  std::vector<Job> jobs;
  for (const auto n : cfg.dimensions) {
    jobs.push_back({"toy-check N=" + std::to_string(n), [&, n](JobRecord& rec) {
                      const int k = length_for(3, n);
                      RunConfig full = cfg;
                      full.parity = Sector::Full;
                      const Spectrum s = compute_spectrum(full, n);
                      const auto ref = toy_closed_spectrum(k);
                      const auto match = compare_spectra(s, ref, 1e-8);
                      json rings = json::object(), expected = json::object();
                      for (int p = 0; p <= k; ++p) {
                        const auto it = match.ring_tallies.find(p);
                        rings[std::to_string(p)] = it == match.ring_tallies.end() ? 0 : it->second;
                        expected[std::to_string(p)] = binomial(k, p);
                      }
                      const int kernel = kernel_dimension(s);
                      json j{{"k", k},
                             {"N", n},
                             {"max_distance", match.max_distance},
                             {"unmatched", match.unmatched},
                             {"all_matched", match.all_matched()},
                             {"nonzero_count", static_cast<int>(s.size()) - kernel},
                             {"expected_nonzero", ref.nonzero_multiplicity()},
                             {"kernel_count", kernel},
                             {"expected_kernel", ref.ring_total(-1)},
                             {"ring_tallies", rings},
                             {"ring_expected", expected}};
                      const std::string name = "toy_check_k" + std::to_string(k) + ".json";
                      write_json_file(cfg.output_dir / name, j);
                      rec.files.push_back(name);
                      if (!match.all_matched()) throw ContractViolation(std::to_string(match.unmatched) + " unmatched eigenvalues");
                    }});
  }
  manifest.jobs = run_jobs(jobs, workers);
  manifest.seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_transport_job(const RunConfig& cfg, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);
  auto manifest = make_manifest("transport", cfg);

  struct Slot {
    int k;
    std::size_t theta_index;
    std::optional<TransportResult> result;
  };
  std::vector<Slot> slots;
  for (int k : cfg.transport_ks)
    for (std::size_t j = 0; j < cfg.transport_thetas.size(); ++j) slots.push_back({k, j, std::nullopt});

  std::vector<Job> jobs;
  for (auto& slot : slots) {
    const double theta = cfg.transport_thetas[slot.theta_index];
    jobs.push_back({"transport k=" + std::to_string(slot.k) + " theta=" + format_double(theta), [&, theta](JobRecord& rec) {
                      const auto t = transmission_matrix(slot.k, theta, cfg.transport_method, cfg.transport_tol);
                      auto res = transport_quantities(t, slot.k, theta);
                      const std::string stem = "k" + std::to_string(slot.k) + "_t" + std::to_string(slot.theta_index);
                      json j{{"k", res.k},      {"theta", res.theta},        {"g", res.g},
                             {"P", res.P},      {"F", optional_json(res.F)}, {"T", res.transmissions},
                             {"method", to_string(cfg.transport_method)}};
                      write_json_file(cfg.output_dir / ("transport_" + stem + ".json"), j);
                      auto out = open_out(cfg.output_dir / ("transmissions_" + stem + ".csv"));
                      write_transmissions_csv(out, res);
                      rec.files.push_back("transport_" + stem + ".json");
                      rec.files.push_back("transmissions_" + stem + ".csv");
                      slot.result = std::move(res);
                    }});
  }
  manifest.jobs = run_jobs(jobs, workers);

  std::vector<TransportResult> results;
  for (const auto& s : slots)
    if (s.result) results.push_back(*s.result);
  if (!results.empty()) {
    std::vector<Job> report{{"transport asymptotics", [&](JobRecord& rec) {
                               const auto rep = assemble_asymptotics(results);
                               json rows = json::array(), stats = json::array();
                               for (const auto& r : rep.rows)
                                 rows.push_back({{"k", r.k},
                                                 {"theta", r.theta},
                                                 {"g", r.g},
                                                 {"g_scaled", r.g_scaled},
                                                 {"P", r.P},
                                                 {"P_scaled", r.P_scaled},
                                                 {"F", optional_json(r.F)}});
                               for (const auto& s : rep.theta_stats)
                                 stats.push_back({{"k", s.k},
                                                  {"samples", s.samples},
                                                  {"g_mean", s.g_mean},
                                                  {"g_relative_std", s.g_relative_std},
                                                  {"P_mean", s.P_mean},
                                                  {"P_relative_std", s.P_relative_std}});
                               json j{{"rows", rows},
                                      {"theta_statistics", stats},
                                      {"conductance_converging", rep.conductance_converging()},
                                      {"noise_converging", rep.noise_converging()},
                                      {"shot_noise_constant", rep.shot_noise_constant},
                                      {"random_matrix_fano", rep.random_matrix_fano}};
                               write_json_file(cfg.output_dir / "transport_asymptotics.json", j);
                               rec.files.push_back("transport_asymptotics.json");
                             }}};
    for (auto& r : run_jobs(report, 1)) manifest.jobs.push_back(std::move(r));
  }
  manifest.seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_classical_job(const RunConfig& cfg, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);
  auto manifest = make_manifest("classical", cfg);

  std::vector<Job> jobs;
  for (auto dir : {Direction::Forward, Direction::Backward}) {
    const std::string name = dir == Direction::Forward ? "escape_forward.csv" : "escape_backward.csv";
    jobs.push_back({"escape grid " + name, [&, dir, name](JobRecord& rec) {
                      const auto grid = escape_grid(cfg.spec, cfg.classical_resolution, dir, cfg.classical_t_max);
                      auto out = open_out(cfg.output_dir / name);
                      grid.write_csv(out);
                      rec.files.push_back(name);
                    }});
  }
  jobs.push_back({"dimensions", [&](JobRecord& rec) {
                    const auto d = fractal_dimensions(cfg.spec);
                    json j{{"spec", cfg.spec.label()},    {"mu", d.mu},           {"dimK", d.dim_trapped},
                           {"tau_dwell", d.tau_dwell},    {"lyapunov", d.lyapunov}, {"heuristic_mu", d.heuristic_mu}};
                    write_json_file(cfg.output_dir / "dimensions.json", j);
                    rec.files.push_back("dimensions.json");
                  }});
  if (cfg.family == MapFamily::ToyDiagonal) {
    for (const auto n : cfg.dimensions) {
      jobs.push_back({"transfer N=" + std::to_string(n), [&, n](JobRecord& rec) {
                        const int k = length_for(3, n);
                        const ComplexMatrix m = transfer_matrix(build_toy_diagonal(n)).cast<cplx>();
                        const auto s = core_nilpotent_spectrum(m);
                        json nonzero = json::array();
                        double rest = 0.0;
                        for (auto z : s.values) {
                          if (std::abs(z) > 1e-10) {
                            nonzero.push_back(complex_json(z));
                          } else {
                            rest = std::max(rest, std::abs(z));
                          }
                        }
                        json j{{"k", k}, {"N", n}, {"nonzero", nonzero}, {"max_other_modulus", rest}};
                        const std::string name = "transfer_k" + std::to_string(k) + ".json";
                        write_json_file(cfg.output_dir / name, j);
                        rec.files.push_back(name);
                      }});
    }
  }
  manifest.jobs = run_jobs(jobs, workers);
  manifest.seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

}  // namespace bakerlab
