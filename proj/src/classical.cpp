#include "bakerlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace bakerlab {

OpenBakerSpec::OpenBakerSpec(int branches, std::vector<int> kept) : d_(branches), kept_(std::move(kept)) {
  if (d_ < 2) throw DomainError("OpenBakerSpec: D must be >= 2");
  if (kept_.empty()) throw DomainError("OpenBakerSpec: kept set is empty");
  for (std::size_t i = 0; i < kept_.size(); ++i) {
    if (kept_[i] < 0 || kept_[i] >= d_) throw DomainError("OpenBakerSpec: branch index out of range");
    if (i > 0 && kept_[i] <= kept_[i - 1]) throw DomainError("OpenBakerSpec: kept must be strictly increasing");
  }
}

OpenBakerSpec OpenBakerSpec::three_baker() { return OpenBakerSpec(3, {0, 2}); }
OpenBakerSpec OpenBakerSpec::five_baker() { return OpenBakerSpec(5, {1, 3}); }
OpenBakerSpec OpenBakerSpec::four_baker_interior() { return OpenBakerSpec(4, {1, 2}); }

OpenBakerSpec OpenBakerSpec::closed(int branches) {
  std::vector<int> all(static_cast<std::size_t>(std::max(branches, 0)));
  for (int i = 0; i < branches; ++i) all[static_cast<std::size_t>(i)] = i;
  return OpenBakerSpec(branches, std::move(all));
}

bool OpenBakerSpec::keeps(int branch) const {
  return std::binary_search(kept_.begin(), kept_.end(), branch);
}

bool OpenBakerSpec::is_reflection_symmetric() const {
  return std::all_of(kept_.begin(), kept_.end(), [&](int b) { return keeps(d_ - 1 - b); });
}

std::string OpenBakerSpec::label() const {
  std::string s = "D=" + std::to_string(d_) + ",kept=";
  for (std::size_t i = 0; i < kept_.size(); ++i) s += (i ? "+" : "") + std::to_string(kept_[i]);
  return s;
}

namespace {

int branch_of(double x, int d) {
  // x in [0,1); the boundary l/D belongs to branch l
  return std::clamp(static_cast<int>(std::floor(d * x)), 0, d - 1);
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace

std::optional<PhasePoint> map_step(const OpenBakerSpec& spec, PhasePoint x, Direction dir) {
  const int d = spec.branches();
  if (dir == Direction::Forward) {
    const int l = branch_of(x.q, d);
    if (!spec.keeps(l)) return std::nullopt;
    return PhasePoint{wrap_unit(d * x.q - l), (x.p + l) / d};
  }
  const int l = branch_of(x.p, d);
  if (!spec.keeps(l)) return std::nullopt;
  return PhasePoint{(x.q + l) / d, wrap_unit(d * x.p - l)};
}

std::optional<int> escape_time(const OpenBakerSpec& spec, PhasePoint x, Direction dir, int t_max) {
  if (t_max < 0) throw DomainError("escape_time: t_max must be >= 0");
  for (int n = 0; n < t_max; ++n) {
    auto next = map_step(spec, x, dir);
    if (!next) return n;
    x = *next;
  }
  return std::nullopt;
}

std::size_t EscapeGrid::trapped_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), -1));
}

void EscapeGrid::write_csv(std::ostream& out) const {
  out << "i,j,escape_time\n";
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) out << i << ',' << j << ',' << at(i, j) << '\n';
}

EscapeGrid escape_grid(const OpenBakerSpec& spec, int resolution, Direction dir, int t_max) {
  if (resolution < 1) throw DomainError("escape_grid: resolution must be >= 1");
  if (!spec.is_open()) throw DomainError("escape_grid: closed map has no escape");
  EscapeGrid g{resolution, dir, t_max, {}};
  g.cells.resize(static_cast<std::size_t>(resolution) * resolution);
  const double h = 1.0 / resolution;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const auto t = escape_time(spec, {(i + 0.5) * h, (j + 0.5) * h}, dir, t_max);
      g.cells[static_cast<std::size_t>(i) * resolution + j] = t ? *t : -1;
    }
  }
  return g;
}

FractalDimensions fractal_dimensions(const OpenBakerSpec& spec) {
  if (!spec.is_open()) throw DomainError("fractal_dimensions: closed map has no escape");
  const double d = spec.branches();
  const double s = spec.kept_count();
  FractalDimensions r{};
  r.mu = std::log(s) / std::log(d);
  r.dim_trapped = 2.0 * r.mu;
  r.tau_dwell = d / (d - s);
  r.lyapunov = std::log(d);
  r.heuristic_mu = 1.0 - 1.0 / (r.lyapunov * r.tau_dwell);
  return r;
}

double markov_weight(double t, int branches) {
  const double frac = t - std::round(t);
  if (frac == 0.0) return 1.0;
  const double ratio = std::sin(branches * kPi * frac) / (branches * std::sin(kPi * frac));
  return ratio * ratio;
}

std::optional<WeightedImages> multivalued_step(const OpenBakerSpec& spec, PhasePoint x) {
  const auto base = map_step(spec, x, Direction::Forward);
  if (!base) return std::nullopt;
  const int d = spec.branches();
  WeightedImages out;
  const int lo = -(d - 1) / 2;
  for (int j = lo; j < lo + d; ++j) {
    out.shifts.push_back(j);
    out.images.push_back({base->q, wrap_unit(base->p + static_cast<double>(j) / d)});
    out.weights.push_back(markov_weight((x.p + j - 0.5) / d, d));
  }
  return out;
}

RealMatrix transfer_matrix(const ComplexMatrix& b) { return b.cwiseAbs2(); }

}  // namespace bakerlab
