#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bakerlab/config.hpp"
#include "bakerlab/manifest.hpp"
#include "bakerlab/spectral.hpp"

namespace bakerlab {

/// A unit of work. It writes its artifacts into the output directory and records the
/// relative paths in `record.files`; any exception marks the job failed.
struct Job {
  std::string name;
  std::function<void(JobRecord& record)> run;
};

/// Runs every job on up to `workers` threads. Records keep the input order; a failing
/// job never stops its siblings.
std::vector<JobRecord> run_jobs(const std::vector<Job>& jobs, int workers);

/// Spectrum of the configured map at dimension n (parity-reduced when requested).
/// Open DFT maps are diagonalised in compressed form and padded with exact zeros.
Spectrum compute_spectrum(const RunConfig& cfg, std::int64_t n);

/// Which aggregate artifacts run_spectrum_job emits after the per-N spectra.
struct SpectrumStages {
  bool counts = true;
  bool weyl = true;
  bool profile = true;
};

/// Spectrum CSV per N, then counts.csv, weyl.json, profile.csv over the radii grid
/// (aggregates are skipped when the radii grid is empty).
RunManifest run_spectrum_job(const RunConfig& cfg, int workers, SpectrumStages stages = {});

/// Toy spectra compared with the closed form: toy_check_k<k>.json per dimension.
RunManifest run_toy_check_job(const RunConfig& cfg, int workers);

/// transport_k<k>_t<j>.json and transmissions_k<k>_t<j>.csv per (k, theta), then
/// transport_asymptotics.json.
RunManifest run_transport_job(const RunConfig& cfg, int workers);

/// escape_forward.csv, escape_backward.csv, dimensions.json, and transfer_k<k>.json per
/// dimension when the toy model is configured.
RunManifest run_classical_job(const RunConfig& cfg, int workers);

}  // namespace bakerlab
