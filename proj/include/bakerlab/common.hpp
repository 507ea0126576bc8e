#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bakerlab {

using cplx = std::complex<double>;

/// Dense complex matrix carrying every operator in the library.
/// Storage is Eigen's column-major; serialisation is row-major (see matrix_io.hpp).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Precondition or argument outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to produce a result (no convergence, LAPACK info != 0).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerically checked contract (e.g. commutation with parity) did not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Which Walsh transform a construction is based on.
///  V: plain phases exp(-2 pi i e e'/D)
///  W: half-integer phases exp(-2 pi i (e+1/2)(e'+1/2)/D)
enum class WalshVariant { V, W };

std::string to_string(WalshVariant v);
WalshVariant walsh_variant_from_string(const std::string& s);

/// Throws DomainError if any entry is NaN/Inf or the matrix is empty.
void require_finite(const ComplexMatrix& m, const char* what);

/// Integer power with overflow check against `cap` (throws DomainError above it).
std::int64_t checked_pow(std::int64_t base, int exponent, std::int64_t cap);

}  // namespace bakerlab
