#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bakerlab/common.hpp"
#include "bakerlab/quantize.hpp"

namespace bakerlab {

/// Largest matrix accepted by the dense eigensolver.
inline constexpr std::int64_t kEigenDimensionCap = 6000;

/// Eigenvalue multiset, canonically sorted by |z| descending then arg in [0, 2 pi) ascending.
struct Spectrum {
  std::vector<cplx> values;
  std::optional<QuantumMapId> map;  ///< provenance, when known
  Sector sector = Sector::Full;
  /// Dimension N of the Hilbert space the map acts on (not the reduced block size).
  std::int64_t map_dimension = 0;

  std::size_t size() const { return values.size(); }
  std::vector<cplx> nonzero(double threshold = 1e-6) const;
};

/// arg mapped into [0, 2 pi)
double canonical_arg(cplx z);
void canonical_sort(std::vector<cplx>& values);

struct EigenOptions {
  /// eigenpairs checked against ||M v - z v|| <= residual_tol * ||M||; 0 skips eigenvectors
  int verify_samples = 10;
  double residual_tol = 1e-8;
  std::uint64_t sample_seed = 0x5eed;
  std::int64_t dimension_cap = kEigenDimensionCap;
};

/// All eigenvalues with multiplicity (LAPACK zgeev with balancing).
/// Throws DomainError (non-square, non-finite, too large) or SolverError.
Spectrum eigen_spectrum(const ComplexMatrix& m, const EigenOptions& opts = {});

/// Singular values in descending order (LAPACK zgesdd); optionally the thin left factor.
Eigen::VectorXd singular_values(const ComplexMatrix& a, ComplexMatrix* left = nullptr);

/// Spectrum of a matrix whose zero eigenvalue carries large Jordan blocks. Finds the
/// smallest power m with rank(M^m) = rank(M^{m+1}), compresses M onto range(M^m) and
/// diagonalises the compression; the remaining eigenvalues are exactly zero.
Spectrum core_nilpotent_spectrum(const ComplexMatrix& m, double rank_rtol = 1e-10);

/// Counting region 1 >= |z| > r, |arg(z e^{i theta})| <= rho. rho = pi is the full annulus.
struct SectorQuery {
  double r = 0.0;
  double theta = 0.0;
  double rho = kPi;

  void validate() const;
};

/// Eigenvalues with |z| in (1, 1 + 1e-10] are counted as on the unit circle.
int count_sector(const Spectrum& spectrum, const SectorQuery& query);
/// Number of eigenvalues with ||z| - r| <= eps (counting is ill-conditioned there).
int boundary_proximity(const Spectrum& spectrum, double r, double eps = 1e-9);

struct WeylPoint {
  std::int64_t n;
  int count;
  double log_residual;
};

struct WeylFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<WeylPoint> points;
  std::vector<double> doubling_ratios;
  std::optional<double> expected_mu;
  double tolerance = 0.08;

  /// |slope - expected_mu| <= tolerance (true when no exponent was given)
  bool consistent() const;
};

/// Least squares of log count against log N over points with count > 0.
WeylFit weyl_fit(const std::vector<std::pair<std::int64_t, int>>& series,
                 std::optional<double> expected_mu = std::nullopt, double tolerance = 0.08);

struct ProfileRow {
  std::int64_t n;
  double r;
  int count;
  double rescaled;  ///< count * (N/D)^(-mu)
};

/// Rescaled counts n(N, r) (N/D)^(-mu) for every spectrum and radius.
std::vector<ProfileRow> profile_curve(const std::vector<Spectrum>& spectra, double mu,
                                      const std::vector<double>& r_grid, int branches);

struct LatticePoint {
  cplx value;
  int multiplicity;
  int ring;   ///< p in 0..k; -1 for the zero eigenvalue
  int angle;  ///< l in 0..k-1
};

struct ClosedFormToySpectrum {
  int k = 0;
  std::vector<LatticePoint> points;

  int total_multiplicity() const;
  int nonzero_multiplicity() const;
  int ring_total(int p) const;
  /// Expanded multiset (each value repeated by multiplicity), canonically sorted.
  std::vector<cplx> expanded() const;
};

/// Closed-form spectrum of the toy model at N = 3^k: lambda_+ = 1, lambda_- = i/sqrt(3),
/// ring values e^{2 pi i l/k} lambda_-^{p/k} (principal branch), zero with multiplicity
/// 3^k - 2^k. Per-point multiplicities come from the necklace decomposition of words in
/// {+,-}^k (period L with p minus-symbols populates l in {0, k/L, 2k/L, ...}).
ClosedFormToySpectrum toy_closed_spectrum(int k);

struct SpectrumMatch {
  double max_distance = 0.0;
  int unmatched = 0;  ///< matched pairs further apart than tol
  std::map<int, int> ring_tallies;  ///< ring p (-1 zero) -> computed values matched within tol
  bool all_matched() const { return unmatched == 0; }
};

/// Greedy matching by increasing distance between the computed multiset and the expanded
/// reference. Throws DomainError if the sizes differ.
SpectrumMatch compare_spectra(const Spectrum& computed, const ClosedFormToySpectrum& reference, double tol);

/// Number of eigenvalues with |z| <= threshold.
int kernel_dimension(const Spectrum& spectrum, double threshold = 1e-6);

/// Binomial coefficient C(n, r) as int64 (small arguments only).
std::int64_t binomial(int n, int r);

}  // namespace bakerlab
