#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bakerlab/classical.hpp"
#include "bakerlab/common.hpp"
#include "bakerlab/transforms.hpp"

namespace bakerlab {

enum class MapFamily { Dft, ToyDiagonal, Walsh };

std::string to_string(MapFamily f);
MapFamily map_family_from_string(const std::string& s);

/// Identity of a quantized map: which construction, which classical map, which N.
struct QuantumMapId {
  MapFamily family;
  OpenBakerSpec spec;
  std::int64_t dimension;
  WalshVariant variant = WalshVariant::W;

  /// Checks the divisibility rule of the family; throws DomainError.
  void validate() const;
  std::string label() const;
};

/// Parity sectors. Even means reflection-symmetric amplitudes psi_{N-1-j} = psi_j
/// (the -1 eigenspace of the signed parity operator); odd means antisymmetric.
enum class Sector { Full, Even, Odd };

std::string to_string(Sector s);
Sector sector_from_string(const std::string& s);

/// A_{D,N} = G_N^* blockdiag(G_{N/D}, ..., G_{N/D}).
ComplexMatrix quantize_closed(int branches, std::int64_t n);

/// G_N^* times blockdiag with G_{N/D} in kept blocks and zero elsewhere.
ComplexMatrix quantize_open(const OpenBakerSpec& spec, std::int64_t n);

/// Compressed form (s N/D square) of quantize_open: blockdiag_kept(G_{N/D}) (G_N^*)_{KK}
/// where K are the kept positions. Its spectrum is the nonzero spectrum of
/// quantize_open(spec, n) plus zeros. With sector Even/Odd the parity reduction is
/// applied to both factors; requires a reflection-symmetric kept set and even s N/D.
ComplexMatrix quantize_open_compressed(const OpenBakerSpec& spec, std::int64_t n,
                                       Sector sector = Sector::Full);

/// Mixed-representation entry predicted by the Van Vleck formula for the closed
/// D-baker: sqrt(D/N) exp(-2 pi i N (D q_j - l)(p_k - l/D)) when q_j and p_k lie in
/// the same strip l, zero otherwise. Compare with (G_N A_{D,N})_{k j}.
cplx van_vleck_entry(int branches, std::int64_t n, std::int64_t row, std::int64_t col);

/// Signed reversal: Pi |q_j> = -|q_{N-1-j}>.
ComplexMatrix parity_operator(std::int64_t n);

/// N x N/2 isometry onto a parity sector. Columns (e_j ± e_{N-1-j})/sqrt(2), j < N/2.
RealMatrix parity_isometry(std::int64_t n, Sector sector);

/// S^* B S for the sector isometry S. Requires even N and ||[B, Pi]||_max <= tol.
ComplexMatrix parity_restrict(const ComplexMatrix& b, Sector sector, double commutator_tol = 1e-10);

/// Toy model: 3^{-1/2} exp((2 pi i/3)(eps+1/2)(l+1/2)) at (3m+eps, m + l N/3), l in {0,2}.
ComplexMatrix build_toy_diagonal(std::int64_t n);

/// Walsh quantization: S_k^* blockdiag(S_{k-1} on kept blocks, 0 elsewhere), N = D^k,
/// with S the V or W Walsh transform. Unitary when every branch is kept.
ComplexMatrix walsh_quantize(const OpenBakerSpec& spec, int length, WalshVariant variant,
                             std::int64_t dimension_cap = kDenseDimensionCap);

/// Matrix-free Walsh open map: v_1 ⊗ ... ⊗ v_k -> v_2 ⊗ ... ⊗ v_k ⊗ (seed^* pi_kept v_1).
TensorState tensor_open_apply(const TensorState& state, const OpenBakerSpec& spec, WalshVariant variant);

/// Column-batched form of tensor_open_apply: every column of `columns` (D^k rows)
/// is one state. Writes into `out` (resized as needed).
void tensor_open_apply_columns(const ComplexMatrix& columns, int length, const OpenBakerSpec& spec,
                               WalshVariant variant, ComplexMatrix& out);

/// Dense matrix of the family named by `id`.
ComplexMatrix build_quantum_map(const QuantumMapId& id);

}  // namespace bakerlab
