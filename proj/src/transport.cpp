#include "bakerlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/LU>

#include "bakerlab/classical.hpp"
#include "bakerlab/quantize.hpp"
#include "bakerlab/spectral.hpp"

namespace bakerlab {

std::int64_t LeadConfig::dimension() const {
  if (k < 1) throw DomainError("LeadConfig: k must be >= 1");
  return checked_pow(4, k, std::int64_t{1} << 40);
}

LeadProjectors lead_projectors(int k) {
  const LeadConfig cfg{k};
  const auto n = cfg.dimension();
  const auto m = cfg.channels();
  LeadProjectors p;
  p.lead1 = Eigen::VectorXd::Zero(n);
  p.lead2 = Eigen::VectorXd::Zero(n);
  p.interior = Eigen::VectorXd::Zero(n);
  p.lead1.head(m).setOnes();
  p.interior.segment(m, 2 * m).setOnes();
  p.lead2.tail(m).setOnes();
  return p;
}

std::string to_string(TransportMethod m) { return m == TransportMethod::Resolvent ? "resolvent" : "series"; }

TransportMethod transport_method_from_string(const std::string& s) {
  if (s == "resolvent") return TransportMethod::Resolvent;
  if (s == "series") return TransportMethod::Series;
  throw DomainError("unknown transport method '" + s + "' (expected resolvent or series)");
}

namespace {

ComplexMatrix resolvent_transmission(int k, double theta) {
  if (k > kResolventMaxLength) {
    throw DomainError("transmission_matrix: k = " + std::to_string(k) + " exceeds the dense resolvent limit k <= " +
                      std::to_string(kResolventMaxLength) + "; use method=series");
  }
  const LeadConfig cfg{k};
  const auto n = cfg.dimension();
  const auto m = cfg.channels();
  const ComplexMatrix u = walsh_quantize(OpenBakerSpec::closed(4), k, WalshVariant::V);
  const cplx phase = std::polar(1.0, theta);

  ComplexMatrix a = -phase * u;
  a.topRows(m).setZero();
  a.bottomRows(m).setZero();
  a.diagonal().array() += 1.0;

  const Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const ComplexMatrix rhs = ComplexMatrix::Identity(n, m);
  const ComplexMatrix x = lu.solve(rhs);
  ComplexMatrix t = phase * (u.bottomRows(m) * x);
  require_finite(t, "transmission_matrix (resolvent)");
  return t;
}

ComplexMatrix series_transmission(int k, double theta, double tol) {
  const LeadConfig cfg{k};
  const auto n = cfg.dimension();
  const auto m = cfg.channels();
  const auto spec = OpenBakerSpec::closed(4);
  const int n_max = 200 * k;

  ComplexMatrix y = ComplexMatrix::Identity(n, m);
  ComplexMatrix next;
  ComplexMatrix t = ComplexMatrix::Zero(m, m);
  for (int step = 1; step <= n_max; ++step) {
    tensor_open_apply_columns(y, k, spec, WalshVariant::V, next);
    t += std::polar(1.0, step * theta) * next.bottomRows(m);
    next.topRows(m).setZero();
    next.bottomRows(m).setZero();
    if (next.norm() < tol) return t;
    std::swap(y, next);
  }
  throw SolverError("transmission_matrix: series did not reach tol " + std::to_string(tol) + " within " +
                    std::to_string(n_max) + " terms");
}

}  // namespace

ComplexMatrix transmission_matrix(int k, double theta, TransportMethod method, double tol) {
  if (k < 1) throw DomainError("transmission_matrix: k must be >= 1");
  if (!(tol > 0.0)) throw DomainError("transmission_matrix: tol must be positive");
  if (!std::isfinite(theta)) throw DomainError("transmission_matrix: theta must be finite");
  return method == TransportMethod::Resolvent ? resolvent_transmission(k, theta) : series_transmission(k, theta, tol);
}

TransportResult transport_quantities(const ComplexMatrix& t, int k, double theta) {
  TransportResult r;
  r.k = k;
  r.theta = theta;
  if (t.size() > 0) {
    const Eigen::VectorXd sv = singular_values(t);
    for (Eigen::Index i = 0; i < sv.size(); ++i) r.transmissions.push_back(sv(i) * sv(i));
  }
  std::sort(r.transmissions.begin(), r.transmissions.end(), std::greater<>());
  for (double x : r.transmissions) {
    if (x < -1e-10 || x > 1.0 + 1e-10) {
      throw ContractViolation("transport_quantities: transmission eigenvalue " + std::to_string(x) +
                              " outside [0, 1]");
    }
    r.g += x;
    r.P += x * (1.0 - x);
  }
  if (r.g > 0.0) r.F = r.P / r.g;
  return r;
}

double relative_std(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return mean == 0.0 ? 0.0 : std::sqrt(var) / std::abs(mean);
}

std::vector<double> theta_grid(int count) {
  if (count < 1) throw DomainError("theta_grid: count must be >= 1");
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(kTwoPi * j / count);
  return out;
}

std::vector<AsymptoticsRow> AsymptoticsReport::leading_rows() const {
  std::vector<AsymptoticsRow> out;
  if (rows.empty()) return out;
  const double theta0 = rows.front().theta;
  for (const auto& r : rows)
    if (r.theta == theta0) out.push_back(r);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  return out;
}

namespace {

template <class F>
bool strictly_decreasing(const std::vector<AsymptoticsRow>& rows, F metric) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(metric(rows[i]) < metric(rows[i - 1]))) return false;
  return true;
}

}  // namespace

bool AsymptoticsReport::conductance_converging() const {
  return strictly_decreasing(leading_rows(), [](const AsymptoticsRow& r) { return std::abs(r.g_scaled - 1.0); });
}

bool AsymptoticsReport::noise_converging() const {
  return strictly_decreasing(leading_rows(),
                             [](const AsymptoticsRow& r) { return std::abs(r.P_scaled - kShotNoiseConstant); });
}

AsymptoticsReport assemble_asymptotics(const std::vector<TransportResult>& results) {
  AsymptoticsReport rep;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_k;
  for (const auto& res : results) {
    const double g_unit = std::ldexp(1.0, 2 * (res.k - 1) - 1);
    const double p_unit = std::ldexp(1.0, res.k - 1);
    rep.rows.push_back({res.k, res.theta, res.g, res.g / g_unit, res.P, res.P / p_unit, res.F});
    by_k[res.k].first.push_back(res.g);
    by_k[res.k].second.push_back(res.P);
  }
  const auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  for (const auto& [k, gp] : by_k) {
    const auto& [gs, ps] = gp;
    rep.theta_stats.push_back({k, static_cast<int>(gs.size()), mean(gs), relative_std(gs), mean(ps), relative_std(ps)});
  }
  return rep;
}

AsymptoticsReport transport_asymptotics(const std::vector<int>& ks, const std::vector<double>& thetas,
                                        TransportMethod method, double tol) {
  if (ks.empty() || thetas.empty()) throw DomainError("transport_asymptotics: empty k range or theta grid");
  std::vector<TransportResult> results;
  for (int k : ks)
    for (double theta : thetas) results.push_back(transport_quantities(transmission_matrix(k, theta, method, tol), k, theta));
  return assemble_asymptotics(results);
}

}  // namespace bakerlab
