#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bakerlab/common.hpp"

namespace bakerlab {

/// Walsh 4-baker cavity with leads on the first digit: digit 0 is lead 1, digit 3 is
/// lead 2, digits 1 and 2 are the interior. N = 4^k.
struct LeadConfig {
  int k = 1;

  std::int64_t dimension() const;
  std::int64_t channels() const { return dimension() / 4; }
  /// first index of the lead-1 and lead-2 blocks
  std::int64_t lead1_offset() const { return 0; }
  std::int64_t lead2_offset() const { return 3 * channels(); }
};

struct LeadProjectors {
  Eigen::VectorXd lead1, lead2, interior;  ///< diagonals, entries 0 or 1
};

LeadProjectors lead_projectors(int k);

/// Largest k accepted by the dense resolvent method (N = 4096).
inline constexpr int kResolventMaxLength = 6;

enum class TransportMethod { Resolvent, Series };

std::string to_string(TransportMethod m);
TransportMethod transport_method_from_string(const std::string& s);

/// Transmission block t(theta) = sum_{n>=1} e^{i n theta} P_L2 U (P_I U)^{n-1} P_L1 with
/// U the V-variant Walsh quantization of the closed 4-baker. Rows are lead-2 states and
/// columns lead-1 states, both in the digit order of the remaining k-1 digits.
/// Series: stops once ||P_I U (P_I U)^{n-1} P_L1||_F < tol; fails after 200 k terms.
ComplexMatrix transmission_matrix(int k, double theta, TransportMethod method, double tol = 1e-12);

struct TransportResult {
  int k = 0;
  double theta = 0.0;
  std::vector<double> transmissions;  ///< T_i, descending
  double g = 0.0;
  double P = 0.0;
  std::optional<double> F;  ///< absent when g = 0
};

/// T_i are the squared singular values of t. Throws ContractViolation if some
/// T_i leaves [-1e-10, 1 + 1e-10].
TransportResult transport_quantities(const ComplexMatrix& t, int k = 0, double theta = 0.0);

inline constexpr double kShotNoiseConstant = 11.0 / 80.0;
inline constexpr double kRandomMatrixFano = 1.0 / 8.0;

struct AsymptoticsRow {
  int k;
  double theta;
  double g;
  double g_scaled;  ///< g / (4^{k-1}/2)
  double P;
  double P_scaled;  ///< P / 2^{k-1}
  std::optional<double> F;
};

struct ThetaStatistics {
  int k;
  int samples;
  double g_mean;
  double g_relative_std;
  double P_mean;
  double P_relative_std;
};

struct AsymptoticsReport {
  std::vector<AsymptoticsRow> rows;
  std::vector<ThetaStatistics> theta_stats;
  double shot_noise_constant = kShotNoiseConstant;
  double random_matrix_fano = kRandomMatrixFano;

  /// rows at theta = first grid value, ordered by k
  std::vector<AsymptoticsRow> leading_rows() const;
  /// |g_scaled - 1| strictly decreasing in k over leading_rows()
  bool conductance_converging() const;
  /// |P_scaled - 11/80| strictly decreasing in k over leading_rows()
  bool noise_converging() const;
};

/// Report rows (in input order) and per-k theta statistics from finished evaluations.
AsymptoticsReport assemble_asymptotics(const std::vector<TransportResult>& results);

AsymptoticsReport transport_asymptotics(const std::vector<int>& ks, const std::vector<double>& thetas,
                                        TransportMethod method = TransportMethod::Series, double tol = 1e-12);

/// Population standard deviation divided by |mean|.
double relative_std(const std::vector<double>& xs);

/// count equally spaced angles 2 pi j / count
std::vector<double> theta_grid(int count);

}  // namespace bakerlab
