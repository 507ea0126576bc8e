#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bakerlab/common.hpp"

namespace bakerlab {

/// D-branch baker map restricted to the vertical strips listed in `kept`.
class OpenBakerSpec {
 public:
  OpenBakerSpec(int branches, std::vector<int> kept);

  /// Open 3-baker, kept = {0, 2}.
  static OpenBakerSpec three_baker();
  /// Open 5-baker, kept = {1, 3}.
  static OpenBakerSpec five_baker();
  /// Closed D-baker (all strips kept).
  static OpenBakerSpec closed(int branches);
  /// The 4-baker cavity interior, kept = {1, 2}.
  static OpenBakerSpec four_baker_interior();

  int branches() const { return d_; }
  const std::vector<int>& kept() const { return kept_; }
  int kept_count() const { return static_cast<int>(kept_.size()); }
  bool is_open() const { return kept_count() < d_; }
  bool keeps(int branch) const;
  /// kept set invariant under b -> D-1-b
  bool is_reflection_symmetric() const;
  /// "D=5,kept=1+3"
  std::string label() const;

  bool operator==(const OpenBakerSpec&) const = default;

 private:
  int d_;
  std::vector<int> kept_;
};

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

enum class Direction { Forward, Backward };

/// One step of the open map; std::nullopt means the point escaped.
/// Forward uses branch floor(D q), backward uses branch floor(D p).
std::optional<PhasePoint> map_step(const OpenBakerSpec& spec, PhasePoint x, Direction dir);

/// Escape time: smallest n >= 0 with the n-th iterate outside the domain,
/// checking iterates 0..t_max-1. std::nullopt = trapped for t_max steps.
std::optional<int> escape_time(const OpenBakerSpec& spec, PhasePoint x, Direction dir, int t_max);

struct EscapeGrid {
  int resolution = 0;
  Direction direction = Direction::Forward;
  int t_max = 0;
  /// cells[i * M + j] for q-cell i, p-cell j; -1 encodes Trapped
  std::vector<int> cells;

  int at(int i, int j) const { return cells[static_cast<std::size_t>(i) * resolution + j]; }
  std::size_t trapped_count() const;
  /// CSV with header `i,j,escape_time`
  void write_csv(std::ostream& out) const;
};

/// Escape times sampled at cell centres ((i+1/2)/M, (j+1/2)/M).
EscapeGrid escape_grid(const OpenBakerSpec& spec, int resolution, Direction dir, int t_max);

struct FractalDimensions {
  double mu;            ///< log s / log D
  double dim_trapped;   ///< 2 mu
  double tau_dwell;     ///< D / (D - s)
  double lyapunov;      ///< log D
  double heuristic_mu;  ///< 1 - 1/(lyapunov * tau_dwell)
};

FractalDimensions fractal_dimensions(const OpenBakerSpec& spec);

/// Fejér weight f(t) = (sin(D pi t) / (D sin(pi t)))^2, with f = 1 at integers.
double markov_weight(double t, int branches = 3);

struct WeightedImages {
  std::vector<PhasePoint> images;
  std::vector<double> weights;
  std::vector<int> shifts;  ///< j values, -1..1 for D = 3
};

/// Multivalued map B(x) + (0, j/D), j = -(D-1)/2 .. , reduced onto the torus,
/// with weights f((p + j - 1/2)/D). Returns std::nullopt if x escapes.
std::optional<WeightedImages> multivalued_step(const OpenBakerSpec& spec, PhasePoint x);

/// Entrywise |B_{jj'}|^2.
RealMatrix transfer_matrix(const ComplexMatrix& b);

}  // namespace bakerlab
