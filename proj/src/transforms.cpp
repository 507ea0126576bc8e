#include "bakerlab/transforms.hpp"

#include <cmath>
#include <string>

namespace bakerlab {

std::string to_string(WalshVariant v) { return v == WalshVariant::V ? "V" : "W"; }

WalshVariant walsh_variant_from_string(const std::string& s) {
  if (s == "V" || s == "v") return WalshVariant::V;
  if (s == "W" || s == "w") return WalshVariant::W;
  throw DomainError("unknown Walsh variant '" + s + "' (expected V or W)");
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (m.size() == 0) throw DomainError(std::string(what) + ": empty matrix");
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

std::int64_t checked_pow(std::int64_t base, int exponent, std::int64_t cap) {
  if (base < 1 || exponent < 0) throw DomainError("checked_pow: invalid arguments");
  std::int64_t r = 1;
  for (int i = 0; i < exponent; ++i) {
    if (r > cap / base) {
      throw DomainError("dimension " + std::to_string(base) + "^" + std::to_string(exponent) +
                        " exceeds cap " + std::to_string(cap));
    }
    r *= base;
  }
  return r;
}

DGitWord digit_encode(std::int64_t j, int base, int length) {
  if (base < 2) throw DomainError("digit_encode: base must be >= 2");
  if (length < 0) throw DomainError("digit_encode: negative length");
  const std::int64_t n = checked_pow(base, length, INT64_MAX / 2);
  if (j < 0 || j >= n) {
    throw DomainError("digit_encode: index " + std::to_string(j) + " outside [0, " +
                      std::to_string(n) + ")");
  }
  DGitWord w{base, std::vector<int>(static_cast<std::size_t>(length))};
  for (int l = length - 1; l >= 0; --l) {
    w.symbols[static_cast<std::size_t>(l)] = static_cast<int>(j % base);
    j /= base;
  }
  return w;
}

std::int64_t digit_decode(const DGitWord& word) {
  if (word.base < 2) throw DomainError("digit_decode: base must be >= 2");
  std::int64_t j = 0;
  for (int s : word.symbols) {
    if (s < 0 || s >= word.base) {
      throw DomainError("digit_decode: symbol " + std::to_string(s) + " not in Z_" +
                        std::to_string(word.base));
    }
    j = j * word.base + s;
  }
  return j;
}

TensorState TensorState::zeros(int base, int length) {
  if (base < 2 || length < 1) throw DomainError("TensorState: need base >= 2, length >= 1");
  const auto n = checked_pow(base, length, INT64_MAX / 2);
  return TensorState{base, length, ComplexVector::Zero(n)};
}

TensorState TensorState::product(std::span<const ComplexVector> factors) {
  if (factors.empty()) throw DomainError("TensorState::product: no factors");
  const auto base = factors.front().size();
  ComplexVector acc = ComplexVector::Ones(1);
  for (const auto& f : factors) {
    if (f.size() != base) throw DomainError("TensorState::product: factor sizes differ");
    ComplexVector next(acc.size() * base);
    for (Eigen::Index a = 0; a < acc.size(); ++a)
      for (Eigen::Index b = 0; b < base; ++b) next(a * base + b) = acc(a) * f(b);
    acc = std::move(next);
  }
  return TensorState{static_cast<int>(base), static_cast<int>(factors.size()), std::move(acc)};
}

namespace {

// exp(-2 pi i m / period) for m in [0, period)
std::vector<cplx> unit_roots(std::int64_t period) {
  std::vector<cplx> r(static_cast<std::size_t>(period));
  for (std::int64_t m = 0; m < period; ++m) {
    r[static_cast<std::size_t>(m)] = std::polar(1.0, -kTwoPi * static_cast<double>(m) / period);
  }
  return r;
}

}  // namespace

ComplexMatrix build_dft_centered(std::int64_t n) {
  if (n < 1) throw DomainError("build_dft_centered: N must be >= 1");
  // (j+1/2)(j'+1/2)/N = (2j+1)(2j'+1)/(4N); reduce the integer numerator exactly.
  const std::int64_t period = 4 * n;
  const auto roots = unit_roots(period);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix g(n, n);
  for (std::int64_t c = 0; c < n; ++c) {
    for (std::int64_t r = 0; r < n; ++r) {
      const std::int64_t m = ((2 * r + 1) * (2 * c + 1)) % period;
      g(r, c) = scale * roots[static_cast<std::size_t>(m)];
    }
  }
  return g;
}

ComplexMatrix build_dft_plain(std::int64_t n) {
  if (n < 1) throw DomainError("build_dft_plain: N must be >= 1");
  const auto roots = unit_roots(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix f(n, n);
  for (std::int64_t c = 0; c < n; ++c)
    for (std::int64_t r = 0; r < n; ++r) f(r, c) = scale * roots[static_cast<std::size_t>((r * c) % n)];
  return f;
}

ComplexMatrix walsh_seed(int base, WalshVariant variant) {
  return variant == WalshVariant::V ? build_dft_plain(base) : build_dft_centered(base);
}

ComplexMatrix build_walsh(int base, int length, WalshVariant variant, std::int64_t dimension_cap) {
  if (base < 2) throw DomainError("build_walsh: D must be >= 2");
  if (length < 0) throw DomainError("build_walsh: k must be >= 0");
  const std::int64_t n = checked_pow(base, length, dimension_cap);
  // Phase numerators: V uses e e' (period D), W uses (2e+1)(2e'+1) (period 4D).
  const bool half = variant == WalshVariant::W;
  const std::int64_t period = half ? 4 * base : base;
  const auto roots = unit_roots(period);
  const double scale = std::pow(static_cast<double>(base), -0.5 * length);

  std::vector<std::vector<int>> digits(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) digits[static_cast<std::size_t>(j)] = digit_encode(j, base, length).symbols;

  ComplexMatrix v(n, n);
  for (std::int64_t c = 0; c < n; ++c) {
    const auto& dc = digits[static_cast<std::size_t>(c)];
    for (std::int64_t r = 0; r < n; ++r) {
      const auto& dr = digits[static_cast<std::size_t>(r)];
      std::int64_t m = 0;
      for (int l = 0; l < length; ++l) {
        const int a = dr[static_cast<std::size_t>(l)];
        const int b = dc[static_cast<std::size_t>(length - 1 - l)];
        m += half ? (2 * a + 1) * (2 * b + 1) : a * b;
      }
      v(r, c) = scale * roots[static_cast<std::size_t>(m % period)];
    }
  }
  return v;
}

TensorState walsh_apply(const TensorState& state, WalshVariant variant) {
  const int d = state.base;
  const int k = state.length;
  if (k < 1) throw DomainError("walsh_apply: length must be >= 1");
  const std::int64_t n = state.dimension();
  const ComplexMatrix seed = walsh_seed(d, variant);

  // Apply the seed along every tensor axis.
  ComplexVector cur = state.amplitudes;
  ComplexVector tmp(n);
  std::vector<cplx> fiber(static_cast<std::size_t>(d));
  std::int64_t stride = n / d;
  for (int axis = 0; axis < k; ++axis, stride /= d) {
    const std::int64_t block = stride * d;
    for (std::int64_t hi = 0; hi < n; hi += block) {
      for (std::int64_t lo = 0; lo < stride; ++lo) {
        for (int e = 0; e < d; ++e) fiber[static_cast<std::size_t>(e)] = cur(hi + e * stride + lo);
        for (int e = 0; e < d; ++e) {
          cplx acc = 0.0;
          for (int f = 0; f < d; ++f) acc += seed(e, f) * fiber[static_cast<std::size_t>(f)];
          tmp(hi + e * stride + lo) = acc;
        }
      }
    }
    cur.swap(tmp);
  }

  // Reverse the order of the tensor factors.
  TensorState out{d, k, ComplexVector(n)};
  for (std::int64_t j = 0; j < n; ++j) {
    std::int64_t rest = j, rev = 0;
    for (int l = 0; l < k; ++l) {
      rev = rev * d + rest % d;
      rest /= d;
    }
    out.amplitudes(rev) = cur(j);
  }
  return out;
}

ComplexMatrix quantize_observable(std::span<const double> samples, Axis axis, std::int64_t n) {
  if (n < 1) throw DomainError("quantize_observable: N must be >= 1");
  if (static_cast<std::int64_t>(samples.size()) != n) {
    throw DomainError("quantize_observable: " + std::to_string(samples.size()) +
                      " samples for N = " + std::to_string(n));
  }
  ComplexMatrix diag = ComplexMatrix::Zero(n, n);
  for (std::int64_t j = 0; j < n; ++j) diag(j, j) = samples[static_cast<std::size_t>(j)];
  if (axis == Axis::Position) return diag;
  const ComplexMatrix g = build_dft_centered(n);
  return g.adjoint() * diag * g;
}

}  // namespace bakerlab
