#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bakerlab/classical.hpp"
#include "bakerlab/quantize.hpp"
#include "bakerlab/transport.hpp"

namespace bakerlab {

/// Invalid configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Batch run parameters. Text form: one `key = value` per line, `#` comments, dotted
/// section keys (see README for the full key list).
struct RunConfig {
  MapFamily family = MapFamily::Dft;
  OpenBakerSpec spec = OpenBakerSpec::five_baker();
  WalshVariant variant = WalshVariant::W;

  std::vector<std::int64_t> dimensions;  ///< expanded list
  Sector parity = Sector::Full;
  std::vector<double> radii;
  double sector_theta = 0.0;
  double sector_rho = kPi;
  double weyl_r = 0.1;
  std::optional<double> expected_mu;  ///< defaults to log s / log D for open specs

  std::vector<int> transport_ks;
  std::vector<double> transport_thetas{0.0};
  TransportMethod transport_method = TransportMethod::Series;
  double transport_tol = 1e-12;

  int classical_resolution = 243;
  int classical_t_max = 5;

  std::filesystem::path output_dir = "out";
  std::int64_t dimension_cap = 6000;
  int workers = 1;

  /// Every key seen, normalised, in key order (echoed into the manifest).
  std::map<std::string, std::string> echo;
};

/// Raw `key = value` entries of a config text (no validation beyond syntax and duplicates).
std::map<std::string, std::string> read_config_entries(std::istream& in);

/// Parses a config text. Throws ConfigError with the line number on malformed input.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Applies `key=value` overrides on top of the parsed text, then validates.
RunConfig build_config(const std::map<std::string, std::string>& entries);

/// Splits "key=value"; throws ConfigError when there is no '='.
std::pair<std::string, std::string> split_assignment(const std::string& text);

/// Worker count: flag (if > 0) beats BAKER_WORKERS beats the config value.
int resolve_workers(const RunConfig& cfg, int flag_value);

/// Map identity for one dimension of the config.
QuantumMapId map_id(const RunConfig& cfg, std::int64_t n);

}  // namespace bakerlab
