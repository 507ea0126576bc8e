#include "bakerlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "bakerlab/format.hpp"

namespace bakerlab {

namespace {

const std::set<std::string> kKnownKeys = {
    "map.family",      "map.D",          "map.kept",           "map.variant",     "dims.list",
    "dims.N0",         "dims.k_max",     "parity",             "radii",           "sector.theta",
    "sector.rho",      "weyl.r",         "weyl.expected_mu",   "transport.k_min", "transport.k_max",
    "transport.theta", "transport.theta_count", "transport.method", "transport.tol", "classical.M",
    "classical.t_max", "output.dir",     "limits.dim_cap",     "workers",
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("config: " + key + ": cannot parse '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  if (v == "pi") return kPi;
  const double x = parse_number<double>(key, v);
  if (!std::isfinite(x)) throw ConfigError("config: " + key + ": value must be finite");
  return x;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) {
    if constexpr (std::is_floating_point_v<T>) {
      out.push_back(parse_real(key, item));
    } else {
      out.push_back(parse_number<T>(key, item));
    }
  }
  return out;
}

}  // namespace

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("config: expected key = value, got '" + text + "'");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::map<std::string, std::string> read_config_entries(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      auto [k, v] = split_assignment(line);
      if (entries.count(k)) throw ConfigError("config: duplicate key '" + k + "'");
      entries[k] = v;
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return entries;
}

RunConfig parse_config(std::istream& in) { return build_config(read_config_entries(in)); }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

RunConfig build_config(const std::map<std::string, std::string>& entries) {
  for (const auto& [k, v] : entries) {
    if (!kKnownKeys.count(k)) throw ConfigError("config: unknown key '" + k + "'");
    if (v.empty()) throw ConfigError("config: " + k + ": empty value");
  }
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = entries.find(k);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  };

  RunConfig cfg;
  cfg.echo = entries;
  try {
    if (auto v = get("map.family")) cfg.family = map_family_from_string(*v);
    if (auto v = get("map.variant")) cfg.variant = walsh_variant_from_string(*v);

    int d = cfg.family == MapFamily::ToyDiagonal ? 3 : 5;
    if (auto v = get("map.D")) d = parse_number<int>("map.D", *v);
    std::vector<int> kept;
    if (auto v = get("map.kept")) {
      kept = parse_list<int>("map.kept", *v);
    } else if (d == 5) {
      kept = OpenBakerSpec::five_baker().kept();
    } else if (d == 3) {
      kept = OpenBakerSpec::three_baker().kept();
    } else {
      kept = OpenBakerSpec::closed(d).kept();
    }
    cfg.spec = OpenBakerSpec(d, kept);

    if (auto v = get("parity")) cfg.parity = sector_from_string(*v);
    if (auto v = get("radii")) cfg.radii = parse_list<double>("radii", *v);
    std::sort(cfg.radii.begin(), cfg.radii.end());
    cfg.radii.erase(std::unique(cfg.radii.begin(), cfg.radii.end()), cfg.radii.end());
    for (double r : cfg.radii)
      if (!(r > 0.0 && r < 1.0)) throw ConfigError("config: radii must lie in (0, 1)");
    if (auto v = get("sector.theta")) cfg.sector_theta = parse_real("sector.theta", *v);
    if (auto v = get("sector.rho")) cfg.sector_rho = parse_real("sector.rho", *v);
    SectorQuery{0.0, cfg.sector_theta, cfg.sector_rho}.validate();
    if (auto v = get("weyl.r")) cfg.weyl_r = parse_real("weyl.r", *v);
    if (auto v = get("weyl.expected_mu")) {
      cfg.expected_mu = parse_real("weyl.expected_mu", *v);
    } else if (cfg.spec.is_open()) {
      cfg.expected_mu = fractal_dimensions(cfg.spec).mu;
    }

    if (auto v = get("dims.list")) {
      if (get("dims.N0") || get("dims.k_max")) throw ConfigError("config: dims.list excludes dims.N0 / dims.k_max");
      cfg.dimensions = parse_list<std::int64_t>("dims.list", *v);
    } else if (auto n0 = get("dims.N0")) {
      const auto base = parse_number<std::int64_t>("dims.N0", *n0);
      const int k_max = get("dims.k_max") ? parse_number<int>("dims.k_max", *get("dims.k_max")) : 0;
      if (base < 1 || k_max < 0) throw ConfigError("config: dims.N0 must be >= 1 and dims.k_max >= 0");
      for (int k = 0; k <= k_max; ++k) cfg.dimensions.push_back(base * checked_pow(d, k, std::int64_t{1} << 40));
    }
    for (auto n : cfg.dimensions) {
      if (n < 1) throw ConfigError("config: dimensions must be positive");
      map_id(cfg, n).validate();
      if (cfg.parity != Sector::Full && n % 2 != 0)
        throw ConfigError("config: parity reduction needs even N (got " + std::to_string(n) + ")");
    }
    if (cfg.parity != Sector::Full && !cfg.spec.is_reflection_symmetric())
      throw ConfigError("config: parity reduction needs a reflection-symmetric kept set");

    const bool has_k_min = get("transport.k_min").has_value(), has_k_max = get("transport.k_max").has_value();
    if (has_k_min || has_k_max) {
      const int lo = has_k_min ? parse_number<int>("transport.k_min", *get("transport.k_min")) : 1;
      const int hi = has_k_max ? parse_number<int>("transport.k_max", *get("transport.k_max")) : lo;
      if (lo < 1) throw ConfigError("config: transport.k_min must be >= 1");
      if (hi < lo) throw ConfigError("config: transport.k_max must be >= transport.k_min");
      if (hi > 10) throw ConfigError("config: transport.k_max above 10 is out of budget");
      for (int k = lo; k <= hi; ++k) cfg.transport_ks.push_back(k);
    }
    if (auto v = get("transport.theta")) {
      if (get("transport.theta_count")) throw ConfigError("config: transport.theta excludes transport.theta_count");
      cfg.transport_thetas = parse_list<double>("transport.theta", *v);
      if (cfg.transport_thetas.empty()) throw ConfigError("config: transport.theta is empty");
    } else if (auto c = get("transport.theta_count")) {
      const int count = parse_number<int>("transport.theta_count", *c);
      if (count < 1) throw ConfigError("config: transport.theta_count must be >= 1");
      cfg.transport_thetas = theta_grid(count);
    }
    if (auto v = get("transport.method")) cfg.transport_method = transport_method_from_string(*v);
    if (auto v = get("transport.tol")) cfg.transport_tol = parse_real("transport.tol", *v);
    if (!(cfg.transport_tol > 0.0)) throw ConfigError("config: transport.tol must be positive");

    if (auto v = get("classical.M")) cfg.classical_resolution = parse_number<int>("classical.M", *v);
    if (auto v = get("classical.t_max")) cfg.classical_t_max = parse_number<int>("classical.t_max", *v);
    if (cfg.classical_resolution < 1 || cfg.classical_resolution > 8192)
      throw ConfigError("config: classical.M must lie in [1, 8192]");
    if (cfg.classical_t_max < 0) throw ConfigError("config: classical.t_max must be >= 0");

    if (auto v = get("output.dir")) cfg.output_dir = *v;
    if (auto v = get("limits.dim_cap")) cfg.dimension_cap = parse_number<std::int64_t>("limits.dim_cap", *v);
    if (cfg.dimension_cap < 1) throw ConfigError("config: limits.dim_cap must be >= 1");
    if (auto v = get("workers")) cfg.workers = parse_number<int>("workers", *v);
    if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

int resolve_workers(const RunConfig& cfg, int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("BAKER_WORKERS")) {
    int n = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || n < 1)
      throw ConfigError("BAKER_WORKERS must be a positive integer");
    return n;
  }
  return cfg.workers;
}

QuantumMapId map_id(const RunConfig& cfg, std::int64_t n) { return QuantumMapId{cfg.family, cfg.spec, n, cfg.variant}; }

}  // namespace bakerlab
