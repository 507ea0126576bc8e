// Acceptance runner: `acceptance --criterion N` (or no argument for all). Prints one
// PASS/FAIL line per criterion plus indented detail lines; exit code 1 on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bakerlab/classical.hpp"
#include "bakerlab/quantize.hpp"
#include "bakerlab/spectral.hpp"
#include "bakerlab/transforms.hpp"
#include "bakerlab/transport.hpp"

using namespace bakerlab;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Table of even-sector counts. Row labels are N/5 for the N x N map.
const std::vector<std::int64_t> kTableLabels{20, 100, 500, 2500};
const std::vector<double> kTableRadii{0.5, 0.1, 0.05, 0.01, 0.001};
const std::vector<std::vector<int>> kTableCounts{
    {4, 10, 10, 13, 16}, {7, 19, 19, 25, 35}, {15, 36, 36, 48, 122}, {30, 69, 69, 104, 402}};

const std::vector<Spectrum>& even_spectra() {
  static const std::vector<Spectrum> spectra = [] {
    std::vector<Spectrum> out;
    EigenOptions opts;
    opts.dimension_cap = 6000;
    for (auto label : kTableLabels) {
      const auto n = 5 * label;
      auto s = eigen_spectrum(quantize_open_compressed(OpenBakerSpec::five_baker(), n, Sector::Even), opts);
      s.map_dimension = n;
      out.push_back(std::move(s));
    }
    return out;
  }();
  return spectra;
}

int even_count(std::size_t row, double r) { return count_sector(even_spectra()[row], {r, 0.0, kPi}); }

Outcome criterion1() {
  Outcome o;
  for (std::size_t i = 0; i < kTableLabels.size(); ++i)
    for (std::size_t j = 0; j < kTableRadii.size(); ++j) {
      const int got = even_count(i, kTableRadii[j]), want = kTableCounts[i][j];
      const int near = boundary_proximity(even_spectra()[i], kTableRadii[j]);
      o.check(std::abs(got - want) <= 1,
              fmt("label %lld r=%g: count %d, table %d (tol 1)%s", (long long)kTableLabels[i], kTableRadii[j], got, want,
                  near ? " [boundary warning]" : ""));
    }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (std::size_t i = 0; i < kTableLabels.size(); ++i) {
    int inside = 0;
    for (auto z : even_spectra()[i].values) {
      const double a = std::abs(z);
      inside += a > 0.05 && a < 0.1;
    }
    o.check(inside == 0, fmt("label %lld: %d even eigenvalues in 0.05 < |z| < 0.1", (long long)kTableLabels[i], inside));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<std::pair<std::int64_t, int>> series;
  for (std::size_t i = 0; i < kTableLabels.size(); ++i) series.emplace_back(kTableLabels[i], even_count(i, 0.1));
  const double mu = std::log(2.0) / std::log(5.0);
  const auto fit = weyl_fit(series, mu, 0.08);
  o.check(std::abs(fit.slope - mu) <= 0.08, fmt("slope %.4f vs %.4f (tol 0.08)", fit.slope, mu));
  for (std::size_t i = 0; i < fit.doubling_ratios.size(); ++i) {
    const double q = fit.doubling_ratios[i];
    o.check(q >= 1.7 && q <= 2.3, fmt("doubling ratio %zu: %.3f in [1.7, 2.3]", i + 1, q));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int k = 1; k <= 7; ++k) {
    const auto n = ipow(3, k);
    EigenOptions opts;
    opts.dimension_cap = 3000;
    const auto s = eigen_spectrum(build_toy_diagonal(n), opts);
    const auto ref = toy_closed_spectrum(k);
    std::vector<cplx> big;
    for (auto z : s.values)
      if (std::abs(z) > 1e-6) big.push_back(z);
    double worst = 0.0;
    for (auto z : big) {
      double best = INFINITY;
      for (const auto& p : ref.points)
        if (p.ring >= 0) best = std::min(best, std::abs(z - p.value));
      worst = std::max(worst, best);
    }
    o.check(worst <= 1e-8, fmt("k=%d: max distance to lattice %.2e (tol 1e-8)", k, worst));
    o.check(std::int64_t(big.size()) == (1 << k), fmt("k=%d: %zu eigenvalues above 1e-6, want %d", k, big.size(), 1 << k));
    const int kernel = kernel_dimension(s);
    o.check(kernel == n - (1 << k), fmt("k=%d: kernel %d, want %lld", k, kernel, (long long)(n - (1 << k))));
    const auto match = compare_spectra(s, ref, 1e-8);
    bool rings = match.all_matched();
    for (int p = 0; p <= k; ++p) {
      const auto it = match.ring_tallies.find(p);
      rings = rings && it != match.ring_tallies.end() && it->second == binomial(k, p);
    }
    o.check(rings, fmt("k=%d: ring totals equal C(k,p)", k));
    if (k <= 5) {
      // B^k: ring p collapses onto the single value (i/sqrt3)^p
      ComplexMatrix b = build_toy_diagonal(n), pk = ComplexMatrix::Identity(n, n);
      for (int i = 0; i < k; ++i) pk = pk * b;
      const auto sp = eigen_spectrum(pk, opts);
      bool ok = true;
      for (int p = 0; p <= k; ++p) {
        const cplx v = std::pow(cplx(0, 1 / std::sqrt(3.0)), p);
        int c = 0;
        for (auto z : sp.values) c += std::abs(z - v) <= 1e-8;
        ok = ok && c == binomial(k, p);
      }
      o.check(ok, fmt("k=%d: power spectrum multiplicities equal C(k,p)", k));
    }
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (int k = 1; k <= 6; ++k) {
    const double d =
        max_abs(build_toy_diagonal(ipow(3, k)) - walsh_quantize(OpenBakerSpec::three_baker(), k, WalshVariant::W));
    o.check(d <= 1e-12, fmt("k=%d: max |toy - walsh| = %.2e (tol 1e-12)", k, d));
  }
  const cplx w = std::polar(1.0, 2 * kPi / 3), w12 = std::polar(1.0, kPi / 3);
  ComplexMatrix printed = ComplexMatrix::Zero(9, 9);
  for (int m = 0; m < 3; ++m) {
    printed(3 * m, m) = 1.0;
    printed(3 * m + 1, m) = w12;
    printed(3 * m + 2, m) = w;
    printed(3 * m, 6 + m) = w;
    printed(3 * m + 1, 6 + m) = w12;
    printed(3 * m + 2, 6 + m) = 1.0;
  }
  printed *= std::polar(1.0, kPi / 6) / std::sqrt(3.0);
  const double d9 = max_abs(build_toy_diagonal(9) - printed);
  o.check(d9 <= 1e-12, fmt("N=9 printed matrix: max deviation %.2e", d9));
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int k = 1; k <= 6; ++k) {
    const auto t = transfer_matrix(build_toy_diagonal(ipow(3, k)));
    const auto s = core_nilpotent_spectrum(t.cast<cplx>());
    const double lead = std::abs(s.values[0] - 2.0 / 3);
    double rest = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) rest = std::max(rest, std::abs(s.values[i]));
    o.check(lead <= 1e-10, fmt("k=%d: |lambda_1 - 2/3| = %.2e", k, lead));
    o.check(rest <= 1e-10, fmt("k=%d: max other modulus %.2e", k, rest));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::vector<TransportResult> lead;
  for (int k = 3; k <= 6; ++k)
    lead.push_back(transport_quantities(transmission_matrix(k, 0.0, TransportMethod::Series), k, 0.0));
  double prev_g = INFINITY, prev_p = INFINITY;
  for (const auto& r : lead) {
    const double gs = r.g / (std::pow(4.0, r.k - 1) / 2), ps = r.P / std::pow(2.0, r.k - 1);
    const double eg = std::abs(gs - 1), ep = std::abs(ps - kShotNoiseConstant);
    o.check(gs >= 0.9 && gs <= 1.1, fmt("k=%d: g/(4^(k-1)/2) = %.5f in [0.9, 1.1]", r.k, gs));
    o.check(eg < prev_g, fmt("k=%d: |g scaled - 1| = %.5f decreasing", r.k, eg));
    o.check(ep < prev_p, fmt("k=%d: |P/2^(k-1) - 11/80| = %.5f decreasing", r.k, ep));
    if (r.k == 6) o.check(ep <= 0.02, fmt("k=6: |P/2^(k-1) - 11/80| = %.5f <= 0.02", ep));
    prev_g = eg;
    prev_p = ep;
  }
  std::vector<double> gs;
  for (double th : theta_grid(16))
    gs.push_back(transport_quantities(transmission_matrix(4, th, TransportMethod::Series), 4, th).g);
  const double spread = relative_std(gs);
  o.check(spread <= 1e-8, fmt("k=4: relative spread of g over 16 angles %.2e (tol 1e-8)", spread));
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k)
    for (double th : {0.0, 1.0, 2.5})
      worst = std::max(worst, max_abs(transmission_matrix(k, th, TransportMethod::Resolvent) -
                                      transmission_matrix(k, th, TransportMethod::Series)));
  o.check(worst <= 1e-10, fmt("k<=4: max |resolvent - series| = %.2e (tol 1e-10)", worst));
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 eng(20240501);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  double uworst = 0.0;
  for (auto [d, n] : {std::pair{7, 7}, std::pair{4, 16}, std::pair{3, 45}, std::pair{5, 100}}) {
    const auto g = build_dft_centered(n);
    uworst = std::max(uworst, max_abs(g.adjoint() * g - ComplexMatrix::Identity(n, n)) / n);
    const auto a = quantize_closed(d, n);
    uworst = std::max(uworst, max_abs(a.adjoint() * a - ComplexMatrix::Identity(n, n)) / n);
  }
  for (auto [d, k] : {std::pair{2, 6}, std::pair{3, 5}, std::pair{4, 4}})
    for (auto var : {WalshVariant::V, WalshVariant::W}) {
      const auto w = build_walsh(d, k, var);
      const auto n = w.rows();
      uworst = std::max(uworst, max_abs(w.adjoint() * w - ComplexMatrix::Identity(n, n)) / double(n));
      const auto u = walsh_quantize(OpenBakerSpec::closed(d), k, var);
      uworst = std::max(uworst, max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n)) / double(n));
    }
  o.check(uworst <= 1e-12, fmt("unitarity: max defect / N = %.2e (tol 1e-12)", uworst));

  double sworst = 0.0;
  for (auto [spec, n] : {std::pair{OpenBakerSpec::five_baker(), 100}, std::pair{OpenBakerSpec::three_baker(), 81},
                         std::pair{OpenBakerSpec::four_baker_interior(), 64}}) {
    for (double s : singular_values(quantize_open(spec, n))) sworst = std::max(sworst, std::min(std::abs(s), std::abs(s - 1)));
  }
  for (double s : singular_values(walsh_quantize(OpenBakerSpec::three_baker(), 5, WalshVariant::W)))
    sworst = std::max(sworst, std::min(std::abs(s), std::abs(s - 1)));
  o.check(sworst <= 1e-10, fmt("open maps: singular values within %.2e of {0,1}", sworst));

  double pworst = 0.0, eoworst = 0.0;
  for (int n : {20, 100}) {
    const auto b = quantize_open(OpenBakerSpec::five_baker(), n);
    const auto pi = parity_operator(n);
    pworst = std::max(pworst, max_abs(b * pi - pi * b));
    const auto full = eigen_spectrum(b);
    const auto ev = eigen_spectrum(parity_restrict(b, Sector::Even));
    const auto od = eigen_spectrum(parity_restrict(b, Sector::Odd));
    std::vector<cplx> a, u;
    for (auto z : full.values)
      if (std::abs(z) > 1e-6) a.push_back(z);
    for (const auto* s : {&ev, &od})
      for (auto z : s->values)
        if (std::abs(z) > 1e-6) u.push_back(z);
    if (a.size() != u.size()) {
      eoworst = INFINITY;
      continue;
    }
    std::vector<bool> used(u.size());
    for (auto z : a) {
      std::size_t best = 0;
      double bd = INFINITY;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!used[i] && std::abs(z - u[i]) < bd) bd = std::abs(z - u[best = i]);
      used[best] = true;
      eoworst = std::max(eoworst, bd);
    }
  }
  o.check(pworst <= 1e-12, fmt("parity commutation: %.2e (tol 1e-12)", pworst));
  o.check(eoworst <= 1e-8, fmt("even+odd nonzero spectrum vs full: %.2e (tol 1e-8)", eoworst));

  double mworst = 0.0;
  int seen = 0;
  while (seen < 1000) {
    const auto w = multivalued_step(OpenBakerSpec::three_baker(), {uni(eng), uni(eng)});
    if (!w) continue;
    ++seen;
    mworst = std::max(mworst, std::abs(w->weights[0] + w->weights[1] + w->weights[2] - 1.0));
  }
  o.check(mworst <= 1e-12, fmt("Markov weights: normalization error %.2e at 1000 points", mworst));

  double vworst = 0.0;
  for (int n : {9, 27}) {
    const ComplexMatrix mixed = build_dft_centered(n) * quantize_closed(3, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) vworst = std::max(vworst, std::abs(mixed(k, j) - van_vleck_entry(3, n, k, j)));
  }
  o.check(vworst <= 1e-12, fmt("Van Vleck form at N=9,27: %.2e (tol 1e-12)", vworst));
  return o;
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> kCriteria{
    {1, {"even-sector count table", criterion1}},  {2, {"spectral gap annulus", criterion2}},
    {3, {"Weyl slope and doubling", criterion3}},  {4, {"toy-model closed form", criterion4}},
    {5, {"construction equivalence", criterion5}}, {6, {"transfer-matrix spectrum", criterion6}},
    {7, {"transport asymptotics", criterion7}},    {8, {"invariant suites", criterion8}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) which.push_back(std::atoi(argv[++i]));
  }
  if (which.empty())
    for (const auto& [id, _] : kCriteria) which.push_back(id);

  bool all = true;
  for (int id : which) {
    const auto it = kCriteria.find(id);
    if (it == kCriteria.end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << it->second.first
              << fmt(" (%.1f s)", secs) << '\n';
    for (const auto& d : o.details) std::cout << "      " << d << '\n';
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
