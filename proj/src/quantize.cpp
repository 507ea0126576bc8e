#include "bakerlab/quantize.hpp"

#include <cmath>

namespace bakerlab {

std::string to_string(MapFamily f) {
  switch (f) {
    case MapFamily::Dft: return "dft";
    case MapFamily::ToyDiagonal: return "toy-diagonal";
    case MapFamily::Walsh: return "walsh";
  }
  return "?";
}

MapFamily map_family_from_string(const std::string& s) {
  if (s == "dft") return MapFamily::Dft;
  if (s == "toy-diagonal" || s == "toy") return MapFamily::ToyDiagonal;
  if (s == "walsh") return MapFamily::Walsh;
  throw DomainError("unknown map family '" + s + "' (expected dft, toy-diagonal or walsh)");
}

std::string to_string(Sector s) {
  switch (s) {
    case Sector::Full: return "full";
    case Sector::Even: return "even";
    case Sector::Odd: return "odd";
  }
  return "?";
}

Sector sector_from_string(const std::string& s) {
  if (s == "full" || s == "none") return Sector::Full;
  if (s == "even") return Sector::Even;
  if (s == "odd") return Sector::Odd;
  throw DomainError("unknown parity sector '" + s + "' (expected full, even or odd)");
}

namespace {

std::int64_t walsh_length(int base, std::int64_t n) {
  std::int64_t p = 1;
  int k = 0;
  while (p < n) {
    p *= base;
    ++k;
  }
  return p == n ? k : -1;
}

std::int64_t block_size(int branches, std::int64_t n, const char* who) {
  if (n < 1 || n % branches != 0) {
    throw DomainError(std::string(who) + ": N = " + std::to_string(n) + " is not a multiple of D = " +
                      std::to_string(branches));
  }
  return n / branches;
}

// G_N^* restricted to the columns of block b, times G_n: the b-th column block of
// G_N^* blockdiag(G_n, ...).
void fill_block_product(ComplexMatrix& out, const ComplexMatrix& g_adj, const ComplexMatrix& g_small, int b) {
  const auto n = g_small.rows();
  out.middleCols(b * n, n).noalias() = g_adj.middleCols(b * n, n) * g_small;
}

}  // namespace

void QuantumMapId::validate() const {
  switch (family) {
    case MapFamily::Dft:
      block_size(spec.branches(), dimension, "dft family");
      break;
    case MapFamily::ToyDiagonal:
      if (!(spec == OpenBakerSpec::three_baker())) throw DomainError("toy-diagonal family is defined for the open 3-baker only");
      block_size(3, dimension, "toy-diagonal family");
      break;
    case MapFamily::Walsh:
      if (walsh_length(spec.branches(), dimension) < 1) {
        throw DomainError("walsh family: N = " + std::to_string(dimension) + " is not a power of D = " +
                          std::to_string(spec.branches()));
      }
      break;
  }
}

std::string QuantumMapId::label() const {
  std::string s = to_string(family) + "[" + spec.label() + "],N=" + std::to_string(dimension);
  if (family == MapFamily::Walsh) s += ",variant=" + to_string(variant);
  return s;
}

ComplexMatrix quantize_closed(int branches, std::int64_t n) {
  return quantize_open(OpenBakerSpec::closed(branches), n);
}

ComplexMatrix quantize_open(const OpenBakerSpec& spec, std::int64_t n) {
  const auto m = block_size(spec.branches(), n, "quantize_open");
  const ComplexMatrix g_adj = build_dft_centered(n).adjoint();
  const ComplexMatrix g_small = build_dft_centered(m);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int b : spec.kept()) fill_block_product(out, g_adj, g_small, b);
  return out;
}

ComplexMatrix quantize_open_compressed(const OpenBakerSpec& spec, std::int64_t n, Sector sector) {
  const auto m = block_size(spec.branches(), n, "quantize_open_compressed");
  const auto s = spec.kept_count();
  const std::int64_t dim = s * m;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));

  // kept position of compressed index a
  auto position = [&](std::int64_t a) { return spec.kept()[static_cast<std::size_t>(a / m)] * m + a % m; };
  // (G_N^*)_{K_a K_c}
  auto g_adj_entry = [&](std::int64_t a, std::int64_t c) {
    const std::int64_t num = ((2 * position(a) + 1) * (2 * position(c) + 1)) % (4 * n);
    return std::polar(inv_sqrt_n, kTwoPi * static_cast<double>(num) / static_cast<double>(4 * n));
  };
  auto blockdiag_entry = [&](std::int64_t a, std::int64_t c) -> cplx {
    if (a / m != c / m) return 0.0;
    const std::int64_t num = ((2 * (a % m) + 1) * (2 * (c % m) + 1)) % (4 * m);
    return std::polar(inv_sqrt_m, -kTwoPi * static_cast<double>(num) / static_cast<double>(4 * m));
  };

  if (sector == Sector::Full) {
    ComplexMatrix gkk(dim, dim);
    for (std::int64_t c = 0; c < dim; ++c)
      for (std::int64_t a = 0; a < dim; ++a) gkk(a, c) = g_adj_entry(a, c);
    const ComplexMatrix g_small = build_dft_centered(m);
    ComplexMatrix out(dim, dim);
    for (std::int64_t b = 0; b < s; ++b) out.middleRows(b * m, m).noalias() = g_small * gkk.middleRows(b * m, m);
    return out;
  }

  if (!spec.is_reflection_symmetric()) {
    throw DomainError("quantize_open_compressed: parity sectors need a reflection-symmetric kept set");
  }
  if (dim % 2 != 0) throw DomainError("quantize_open_compressed: parity sectors need an even compressed dimension");
  const std::int64_t half = dim / 2;
  const double sign = sector == Sector::Even ? 1.0 : -1.0;
  auto reduce = [&](auto&& entry) {
    ComplexMatrix r(half, half);
    for (std::int64_t j = 0; j < half; ++j) {
      const std::int64_t jr = dim - 1 - j;
      for (std::int64_t i = 0; i < half; ++i) {
        const std::int64_t ir = dim - 1 - i;
        r(i, j) = 0.5 * (entry(i, j) + sign * entry(i, jr) + sign * entry(ir, j) + entry(ir, jr));
      }
    }
    return r;
  };
  const ComplexMatrix left = reduce(blockdiag_entry);
  const ComplexMatrix right = reduce(g_adj_entry);
  ComplexMatrix out(half, half);
  out.noalias() = left * right;
  return out;
}

cplx van_vleck_entry(int branches, std::int64_t n, std::int64_t row, std::int64_t col) {
  const double dd = branches;
  const double qj = grid_point(col, n);
  const double pk = grid_point(row, n);
  const int lq = static_cast<int>(std::floor(dd * qj));
  const int lp = static_cast<int>(std::floor(dd * pk));
  if (lq != lp) return 0.0;
  const double l = lq;
  const double action = static_cast<double>(n) * (dd * qj - l) * (pk - l / dd);
  return std::polar(std::sqrt(dd / static_cast<double>(n)), -kTwoPi * action);
}

ComplexMatrix parity_operator(std::int64_t n) {
  if (n < 1) throw DomainError("parity_operator: N must be >= 1");
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (std::int64_t j = 0; j < n; ++j) p(n - 1 - j, j) = -1.0;
  return p;
}

RealMatrix parity_isometry(std::int64_t n, Sector sector) {
  if (sector == Sector::Full) return RealMatrix::Identity(n, n);
  if (n < 2 || n % 2 != 0) throw DomainError("parity_isometry: N must be even, got " + std::to_string(n));
  const double w = 1.0 / std::sqrt(2.0);
  const double sign = sector == Sector::Even ? 1.0 : -1.0;
  RealMatrix s = RealMatrix::Zero(n, n / 2);
  for (std::int64_t j = 0; j < n / 2; ++j) {
    s(j, j) = w;
    s(n - 1 - j, j) = sign * w;
  }
  return s;
}

ComplexMatrix parity_restrict(const ComplexMatrix& b, Sector sector, double commutator_tol) {
  const auto n = b.rows();
  if (b.cols() != n) throw DomainError("parity_restrict: matrix is not square");
  if (sector == Sector::Full) return b;
  if (n % 2 != 0) throw DomainError("parity_restrict: N must be even, got " + std::to_string(n));
  double comm = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) comm = std::max(comm, std::abs(b(n - 1 - i, j) - b(i, n - 1 - j)));
  if (comm > commutator_tol) {
    throw ContractViolation("parity_restrict: ||[B, Pi]||_max = " + std::to_string(comm) + " exceeds " +
                            std::to_string(commutator_tol));
  }
  const double sign = sector == Sector::Even ? 1.0 : -1.0;
  const auto half = n / 2;
  ComplexMatrix r(half, half);
  for (Eigen::Index j = 0; j < half; ++j) {
    for (Eigen::Index i = 0; i < half; ++i) {
      r(i, j) = 0.5 * (b(i, j) + sign * b(i, n - 1 - j) + sign * b(n - 1 - i, j) + b(n - 1 - i, n - 1 - j));
    }
  }
  return r;
}

ComplexMatrix build_toy_diagonal(std::int64_t n) {
  const auto third = block_size(3, n, "build_toy_diagonal");
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  const double scale = 1.0 / std::sqrt(3.0);
  for (int ell : {0, 2}) {
    for (int eps = 0; eps < 3; ++eps) {
      const cplx v = std::polar(scale, kTwoPi / 3.0 * (eps + 0.5) * (ell + 0.5));
      for (std::int64_t l = 0; l < third; ++l) t(3 * l + eps, l + ell * third) = v;
    }
  }
  return t;
}

ComplexMatrix walsh_quantize(const OpenBakerSpec& spec, int length, WalshVariant variant,
                             std::int64_t dimension_cap) {
  if (length < 1) throw DomainError("walsh_quantize: k must be >= 1");
  const int d = spec.branches();
  const std::int64_t n = checked_pow(d, length, dimension_cap);
  const std::int64_t m = n / d;
  const ComplexMatrix outer_adj = build_walsh(d, length, variant, dimension_cap).adjoint();
  const ComplexMatrix inner = build_walsh(d, length - 1, variant, dimension_cap);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int b : spec.kept()) out.middleCols(b * m, m).noalias() = outer_adj.middleCols(b * m, m) * inner;
  return out;
}

void tensor_open_apply_columns(const ComplexMatrix& columns, int length, const OpenBakerSpec& spec,
                               WalshVariant variant, ComplexMatrix& out) {
  const int d = spec.branches();
  const std::int64_t n = checked_pow(d, length, INT64_MAX / 2);
  if (columns.rows() != n) throw DomainError("tensor_open_apply: state dimension is not D^k");
  const std::int64_t rest = n / d;
  const ComplexMatrix seed_adj = walsh_seed(d, variant).adjoint();
  out.resize(n, columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const cplx* in = columns.col(c).data();
    cplx* dst = out.col(c).data();
    for (std::int64_t r = 0; r < rest; ++r) {
      for (int e = 0; e < d; ++e) {
        cplx acc = 0.0;
        for (int b : spec.kept()) acc += seed_adj(e, b) * in[b * rest + r];
        dst[r * d + e] = acc;
      }
    }
  }
}

TensorState tensor_open_apply(const TensorState& state, const OpenBakerSpec& spec, WalshVariant variant) {
  if (state.base != spec.branches()) throw DomainError("tensor_open_apply: state base differs from D");
  ComplexMatrix out;
  tensor_open_apply_columns(state.amplitudes, state.length, spec, variant, out);
  return TensorState{state.base, state.length, out.col(0)};
}

ComplexMatrix build_quantum_map(const QuantumMapId& id) {
  id.validate();
  switch (id.family) {
    case MapFamily::Dft: return quantize_open(id.spec, id.dimension);
    case MapFamily::ToyDiagonal: return build_toy_diagonal(id.dimension);
    case MapFamily::Walsh:
      return walsh_quantize(id.spec, static_cast<int>(walsh_length(id.spec.branches(), id.dimension)), id.variant);
  }
  throw DomainError("build_quantum_map: unknown family");
}

}  // namespace bakerlab
