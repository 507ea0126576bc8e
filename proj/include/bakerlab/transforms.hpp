#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bakerlab/common.hpp"

namespace bakerlab {

/// Largest dimension for which dense transforms are materialised by default.
inline constexpr std::int64_t kDenseDimensionCap = 8192;

/// A position index j in Z_{D^k} written as base-D symbols, most significant first:
/// j = sum_l eps_l D^{k-l}.
struct DGitWord {
  int base = 2;
  std::vector<int> symbols;

  int length() const { return static_cast<int>(symbols.size()); }
  bool operator==(const DGitWord&) const = default;
};

DGitWord digit_encode(std::int64_t j, int base, int length);
std::int64_t digit_decode(const DGitWord& word);

/// Amplitudes on (C^D)^{⊗k}; index order is the lexicographic word order, so the
/// position state |q_j> is e_{eps_1} ⊗ ... ⊗ e_{eps_k}.
struct TensorState {
  int base = 2;
  int length = 1;
  ComplexVector amplitudes;

  static TensorState zeros(int base, int length);
  /// Kronecker product v_1 ⊗ ... ⊗ v_k, each factor of size `base`.
  static TensorState product(std::span<const ComplexVector> factors);
  std::int64_t dimension() const { return amplitudes.size(); }
};

/// Centered DFT: N^{-1/2} exp(-2 pi i (j+1/2)(j'+1/2)/N).
ComplexMatrix build_dft_centered(std::int64_t n);
/// Plain DFT: N^{-1/2} exp(-2 pi i j j'/N).
ComplexMatrix build_dft_plain(std::int64_t n);

/// Dense Walsh transform in dimension D^k. Entry (j, j') is the product over
/// l of the D-dimensional seed entry (eps_l(j), eps_{k+1-l}(j')).
ComplexMatrix build_walsh(int base, int length, WalshVariant variant,
                          std::int64_t dimension_cap = kDenseDimensionCap);

/// The D x D seed of a Walsh variant: F_D for V, G_D for W.
ComplexMatrix walsh_seed(int base, WalshVariant variant);

/// Matrix-free Walsh transform: v_1 ⊗ ... ⊗ v_k -> S v_k ⊗ ... ⊗ S v_1.
/// Cost O(D^k k D).
TensorState walsh_apply(const TensorState& state, WalshVariant variant);

enum class Axis { Position, Momentum };

/// Op_N of an observable depending on one coordinate, given its samples at
/// the grid (j+1/2)/N. Position: diagonal; momentum: G_N^* diag G_N.
ComplexMatrix quantize_observable(std::span<const double> samples, Axis axis, std::int64_t n);

/// Grid point (j+1/2)/N.
inline double grid_point(std::int64_t j, std::int64_t n) {
  return (static_cast<double>(j) + 0.5) / static_cast<double>(n);
}

}  // namespace bakerlab
