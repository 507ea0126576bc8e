#include "bakerlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace bakerlab {

std::vector<cplx> Spectrum::nonzero(double threshold) const {
  std::vector<cplx> out;
  for (auto z : values)
    if (std::abs(z) > threshold) out.push_back(z);
  return out;
}

double canonical_arg(cplx z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  return a >= kTwoPi ? 0.0 : a;
}

void canonical_sort(std::vector<cplx>& values) {
  std::stable_sort(values.begin(), values.end(), [](cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return canonical_arg(a) < canonical_arg(b);
  });
}

Spectrum eigen_spectrum(const ComplexMatrix& m, const EigenOptions& opts) {
  if (m.rows() != m.cols()) throw DomainError("eigen_spectrum: matrix is not square");
  require_finite(m, "eigen_spectrum");
  const auto n = m.rows();
  if (n > opts.dimension_cap) {
    throw DomainError("eigen_spectrum: dimension " + std::to_string(n) + " exceeds the dense cap " +
                      std::to_string(opts.dimension_cap) + "; reduce by parity or compress the open map first");
  }

  ComplexMatrix work = m;
  std::vector<cplx> w(static_cast<std::size_t>(n));
  const bool vectors = opts.verify_samples > 0;
  ComplexMatrix vr(vectors ? n : 1, vectors ? n : 1);
  cplx dummy{};
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', static_cast<lapack_int>(n),
                                        work.data(), static_cast<lapack_int>(n), w.data(), &dummy, 1, vr.data(),
                                        static_cast<lapack_int>(vr.rows()));
  if (info != 0) {
    throw SolverError("eigen_spectrum: zgeev failed (info = " + std::to_string(info) + ", n = " +
                      std::to_string(n) + (info > 0 ? "; QR iteration did not converge)" : ")"));
  }

  if (vectors) {
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm bound
    std::mt19937_64 rng(opts.sample_seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    const int samples = static_cast<int>(std::min<Eigen::Index>(opts.verify_samples, n));
    for (int s = 0; s < samples; ++s) {
      const auto idx = samples == n ? s : pick(rng);
      ComplexVector v = vr.col(idx);
      const double vn = v.norm();
      if (vn == 0.0) continue;
      v /= vn;
      const cplx lambda = w[static_cast<std::size_t>(idx)];
      double res = (m * v - lambda * v).norm();
      if (res > opts.residual_tol * std::max(norm, 1e-300)) {
        // defective clusters: the back-substituted vector can be poor; refine by inverse iteration
        const ComplexMatrix shifted =
            m - (lambda + cplx(1e-13 * std::max(norm, 1e-300), 0)) * ComplexMatrix::Identity(n, n);
        const Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
        for (int it = 0; it < 3 && res > opts.residual_tol * std::max(norm, 1e-300); ++it) {
          ComplexVector next = lu.solve(v);
          const double nn = next.norm();
          if (!(nn > 0.0) || !std::isfinite(nn)) break;
          v = next / nn;
          res = (m * v - lambda * v).norm();
        }
      }
      if (res > opts.residual_tol * std::max(norm, 1e-300)) {
        throw SolverError("eigen_spectrum: residual " + std::to_string(res) + " for eigenvalue #" +
                          std::to_string(idx) + " exceeds " + std::to_string(opts.residual_tol) + " * ||M||");
      }
    }
  }

  Spectrum s;
  s.values = std::move(w);
  canonical_sort(s.values);
  s.map_dimension = n;
  return s;
}

Eigen::VectorXd singular_values(const ComplexMatrix& a, ComplexMatrix* left) {
  const auto m = a.rows(), n = a.cols();
  const auto p = std::min(m, n);
  Eigen::VectorXd s(p);
  if (p == 0) {
    if (left) left->resize(m, 0);
    return s;
  }
  require_finite(a, "singular_values");
  ComplexMatrix work = a;
  ComplexMatrix u(left ? m : 1, left ? p : 1);
  ComplexMatrix vt(left ? p : 1, left ? n : 1);
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, left ? 'S' : 'N', static_cast<lapack_int>(m), static_cast<lapack_int>(n),
                     work.data(), static_cast<lapack_int>(m), s.data(), u.data(), static_cast<lapack_int>(u.rows()),
                     vt.data(), static_cast<lapack_int>(vt.rows()));
  if (info != 0) throw SolverError("singular_values: zgesdd failed (info = " + std::to_string(info) + ")");
  if (left) *left = std::move(u);
  return s;
}

namespace {

Eigen::Index numerical_rank(const ComplexMatrix& a, double rtol, ComplexMatrix* basis) {
  ComplexMatrix u;
  const Eigen::VectorXd sv = singular_values(a, basis ? &u : nullptr);
  if (sv.size() == 0 || sv(0) == 0.0) {
    if (basis) basis->resize(a.rows(), 0);
    return 0;
  }
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rtol * sv(0) * static_cast<double>(a.rows())) ++r;
  if (basis) *basis = u.leftCols(r);
  return r;
}

}  // namespace

Spectrum core_nilpotent_spectrum(const ComplexMatrix& m, double rank_rtol) {
  if (m.rows() != m.cols()) throw DomainError("core_nilpotent_spectrum: matrix is not square");
  require_finite(m, "core_nilpotent_spectrum");
  const auto n = m.rows();

  ComplexMatrix power = m;
  Eigen::Index rank = numerical_rank(power, rank_rtol, nullptr);
  for (Eigen::Index step = 0; step <= n; ++step) {
    ComplexMatrix next = m * power;
    const auto next_rank = numerical_rank(next, rank_rtol, nullptr);
    if (next_rank == rank) break;
    power = std::move(next);
    rank = next_rank;
  }

  ComplexMatrix basis;
  rank = numerical_rank(power, rank_rtol, &basis);
  Spectrum s;
  s.map_dimension = n;
  if (rank > 0) {
    const ComplexMatrix core = basis.adjoint() * m * basis;
    const double invariance = (m * basis - basis * core).norm();
    if (invariance > 1e-8 * std::max(1.0, m.norm())) {
      throw SolverError("core_nilpotent_spectrum: range of M^m is not invariant (residual " +
                        std::to_string(invariance) + ")");
    }
    EigenOptions opts;
    opts.verify_samples = static_cast<int>(std::min<Eigen::Index>(rank, 10));
    s.values = eigen_spectrum(core, opts).values;
  }
  s.values.resize(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  canonical_sort(s.values);
  return s;
}

void SectorQuery::validate() const {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("SectorQuery: r must lie in [0, 1)");
  if (!(rho > 0.0 && rho <= kPi)) throw DomainError("SectorQuery: rho must lie in (0, pi]");
  if (!std::isfinite(theta)) throw DomainError("SectorQuery: theta must be finite");
}

int count_sector(const Spectrum& spectrum, const SectorQuery& query) {
  query.validate();
  const cplx rot = std::polar(1.0, query.theta);
  int count = 0;
  for (auto z : spectrum.values) {
    const double mod = std::abs(z);
    if (mod <= query.r || mod > 1.0 + 1e-10) continue;
    if (query.rho < kPi && std::abs(std::arg(z * rot)) > query.rho) continue;
    ++count;
  }
  return count;
}

int boundary_proximity(const Spectrum& spectrum, double r, double eps) {
  return static_cast<int>(
      std::count_if(spectrum.values.begin(), spectrum.values.end(), [&](cplx z) { return std::abs(std::abs(z) - r) <= eps; }));
}

bool WeylFit::consistent() const { return !expected_mu || std::abs(slope - *expected_mu) <= tolerance; }

WeylFit weyl_fit(const std::vector<std::pair<std::int64_t, int>>& series, std::optional<double> expected_mu,
                 double tolerance) {
  std::vector<std::pair<double, double>> xy;
  for (auto [n, c] : series) {
    if (n <= 0) throw DomainError("weyl_fit: dimensions must be positive");
    if (c > 0) xy.emplace_back(std::log(static_cast<double>(n)), std::log(static_cast<double>(c)));
  }
  if (xy.size() < 2) throw DomainError("weyl_fit: need at least two points with positive count");

  const double k = static_cast<double>(xy.size());
  double mx = 0, my = 0;
  for (auto [x, y] : xy) mx += x, my += y;
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : xy) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  if (sxx == 0.0) throw DomainError("weyl_fit: all points share the same N");

  WeylFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.expected_mu = expected_mu;
  fit.tolerance = tolerance;
  for (auto [n, c] : series) {
    const double resid =
        c > 0 ? std::log(static_cast<double>(c)) - (fit.intercept + fit.slope * std::log(static_cast<double>(n)))
              : std::nan("");
    fit.points.push_back({n, c, resid});
  }
  for (std::size_t i = 1; i < series.size(); ++i) {
    const int prev = series[i - 1].second;
    fit.doubling_ratios.push_back(prev > 0 ? static_cast<double>(series[i].second) / prev : std::nan(""));
  }
  return fit;
}

std::vector<ProfileRow> profile_curve(const std::vector<Spectrum>& spectra, double mu, const std::vector<double>& r_grid,
                                      int branches) {
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0 && r_grid[i] < 1.0)) throw DomainError("profile_curve: radii must lie in (0, 1)");
    if (i > 0 && r_grid[i] <= r_grid[i - 1]) throw DomainError("profile_curve: radii must be strictly increasing");
  }
  std::vector<ProfileRow> rows;
  for (const auto& s : spectra) {
    const double scale = std::pow(static_cast<double>(s.map_dimension) / branches, -mu);
    for (double r : r_grid) {
      const int c = count_sector(s, {r, 0.0, kPi});
      rows.push_back({s.map_dimension, r, c, c * scale});
    }
  }
  return rows;
}

int ClosedFormToySpectrum::total_multiplicity() const {
  return std::accumulate(points.begin(), points.end(), 0, [](int a, const LatticePoint& p) { return a + p.multiplicity; });
}

int ClosedFormToySpectrum::nonzero_multiplicity() const {
  int t = 0;
  for (const auto& p : points)
    if (p.ring >= 0) t += p.multiplicity;
  return t;
}

int ClosedFormToySpectrum::ring_total(int p) const {
  int t = 0;
  for (const auto& pt : points)
    if (pt.ring == p) t += pt.multiplicity;
  return t;
}

std::vector<cplx> ClosedFormToySpectrum::expanded() const {
  std::vector<cplx> out;
  for (const auto& p : points) out.insert(out.end(), static_cast<std::size_t>(p.multiplicity), p.value);
  canonical_sort(out);
  return out;
}

std::int64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::int64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

ClosedFormToySpectrum toy_closed_spectrum(int k) {
  if (k < 1 || k > 24) throw DomainError("toy_closed_spectrum: k must lie in [1, 24]");
  const std::uint32_t words = 1u << k;
  const std::uint32_t mask = words - 1;
  auto rotate = [&](std::uint32_t w) { return ((w << 1) | (w >> (k - 1))) & mask; };

  // multiplicity[p][l]
  std::vector<std::vector<int>> mult(static_cast<std::size_t>(k + 1), std::vector<int>(static_cast<std::size_t>(k), 0));
  for (std::uint32_t w = 0; w < words; ++w) {
    std::uint32_t r = rotate(w);
    int period = 1;
    bool canonical = true;
    while (r != w) {
      if (r < w) canonical = false;
      r = rotate(r);
      ++period;
    }
    if (!canonical) continue;
    const int p = std::popcount(w);
    for (int j = 0; j < period; ++j) ++mult[static_cast<std::size_t>(p)][static_cast<std::size_t>(j * (k / period))];
  }

  ClosedFormToySpectrum out;
  out.k = k;
  for (int p = 0; p <= k; ++p) {
    const double modulus = std::pow(3.0, -0.5 * p / k);
    for (int l = 0; l < k; ++l) {
      const int m = mult[static_cast<std::size_t>(p)][static_cast<std::size_t>(l)];
      if (m == 0) continue;
      const double angle = kTwoPi * l / k + 0.5 * kPi * p / k;
      out.points.push_back({std::polar(modulus, angle), m, p, l});
    }
  }
  std::int64_t three = 1;
  for (int i = 0; i < k; ++i) three *= 3;
  out.points.push_back({cplx(0.0, 0.0), static_cast<int>(three - words), -1, 0});
  return out;
}

SpectrumMatch compare_spectra(const Spectrum& computed, const ClosedFormToySpectrum& reference, double tol) {
  std::vector<std::pair<cplx, int>> ref;
  for (const auto& p : reference.points)
    for (int i = 0; i < p.multiplicity; ++i) ref.emplace_back(p.value, p.ring);
  const auto& comp = computed.values;
  if (comp.size() != ref.size()) {
    throw DomainError("compare_spectra: computed spectrum has " + std::to_string(comp.size()) +
                      " values, reference has " + std::to_string(ref.size()));
  }

  struct Pair {
    double dist;
    std::uint32_t a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(comp.size() * ref.size());
  for (std::uint32_t a = 0; a < comp.size(); ++a)
    for (std::uint32_t b = 0; b < ref.size(); ++b) pairs.push_back({std::abs(comp[a] - ref[b].first), a, b});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });

  std::vector<char> used_a(comp.size(), 0), used_b(ref.size(), 0);
  SpectrumMatch match;
  std::size_t matched = 0;
  for (const auto& pr : pairs) {
    if (matched == comp.size()) break;
    if (used_a[pr.a] || used_b[pr.b]) continue;
    used_a[pr.a] = used_b[pr.b] = 1;
    ++matched;
    match.max_distance = std::max(match.max_distance, pr.dist);
    if (pr.dist > tol) {
      ++match.unmatched;
    } else {
      ++match.ring_tallies[ref[pr.b].second];
    }
  }
  return match;
}

int kernel_dimension(const Spectrum& spectrum, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("kernel_dimension: threshold must be positive");
  return static_cast<int>(std::count_if(spectrum.values.begin(), spectrum.values.end(),
                                        [&](cplx z) { return std::abs(z) <= threshold; }));
}

}  // namespace bakerlab
