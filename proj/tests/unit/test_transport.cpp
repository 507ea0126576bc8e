#include "doctest.h"
#include "oracles.hpp"

#include "bakerlab/transforms.hpp"
#include "bakerlab/transport.hpp"

using namespace bakerlab;

namespace {

// dense truncated series built straight from the projector definition
ComplexMatrix direct_series(int k, double theta, int terms) {
  const auto n = oracle::ipow(4, k), m = n / 4;
  // closed 4-baker: S_k^* blockdiag(S_{k-1}, ..., S_{k-1})
  const ComplexMatrix inner = k == 1 ? ComplexMatrix::Identity(1, 1) : build_walsh(4, k - 1, WalshVariant::V);
  const ComplexMatrix u = build_walsh(4, k, WalshVariant::V).adjoint() * oracle::kron(ComplexMatrix::Identity(4, 4), inner);
  const auto pr = lead_projectors(k);
  const ComplexMatrix pi = pr.interior.cast<cplx>().asDiagonal();
  ComplexMatrix y = u.leftCols(m);
  ComplexMatrix t = ComplexMatrix::Zero(m, m);
  for (int j = 1; j <= terms; ++j) {
    t += std::polar(1.0, j * theta) * y.bottomRows(m);
    y = u * (pi * y);
  }
  return t;
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("lead layout and projectors") {
    const auto p1 = lead_projectors(1);
    CHECK(p1.lead1.sum() == 1);
    CHECK(p1.lead2.sum() == 1);
    CHECK(p1.interior.sum() == 2);
    CHECK(p1.lead1(0) == 1);
    CHECK(p1.lead2(3) == 1);

    const auto p3 = lead_projectors(3);
    CHECK(p3.lead1.sum() == 16);
    CHECK(p3.lead2.sum() == 16);
    CHECK(p3.interior.sum() == 32);
    const LeadConfig lc{3};
    CHECK(lc.dimension() == 64);
    CHECK(lc.channels() == 16);
    CHECK(lc.lead2_offset() == 48);
    CHECK_THROWS_AS(lead_projectors(0), DomainError);
  }

  TEST_CASE("projector algebra") {
    for (int k = 1; k <= 5; ++k) {
      const auto p = lead_projectors(k);
      const Eigen::VectorXd sum = p.lead1 + p.lead2 + p.interior;
      CHECK(sum.isOnes());
      CHECK(p.lead1.cwiseProduct(p.lead2).isZero());
      CHECK(p.lead1.cwiseProduct(p.interior).isZero());
      CHECK(p.lead2.cwiseProduct(p.interior).isZero());
      CHECK(p.lead1.cwiseProduct(p.lead1) == p.lead1);
    }
  }

  TEST_CASE("method names") {
    CHECK(to_string(TransportMethod::Series) == "series");
    CHECK(transport_method_from_string("resolvent") == TransportMethod::Resolvent);
    CHECK_THROWS_AS(transport_method_from_string("magic"), DomainError);
  }

  TEST_CASE("k=1 against a direct series") {
    for (double th : {0.0, 0.7}) {
      const auto t = transmission_matrix(1, th, TransportMethod::Series);
      const auto d = direct_series(1, th, 2000);
      REQUIRE(t.rows() == 1);
      CHECK(std::abs(t(0, 0) - d(0, 0)) <= 1e-11);
    }
  }

  TEST_CASE("k=2 and k=3 against a direct series") {
    for (int k : {2, 3}) {
      const auto t = transmission_matrix(k, 1.3, TransportMethod::Series, 1e-13);
      CHECK((t - direct_series(k, 1.3, 4000)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("k=2 resolvent against series") {
    const auto a = transmission_matrix(2, 0.0, TransportMethod::Resolvent);
    const auto b = transmission_matrix(2, 0.0, TransportMethod::Series);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-11);
  }

  TEST_CASE("method agreement for k <= 4") {
    const double tol = 1e-12;
    for (int k = 1; k <= 4; ++k)
      for (double th : {0.0, 1.0, 2.5}) {
        const auto a = transmission_matrix(k, th, TransportMethod::Resolvent, tol);
        const auto b = transmission_matrix(k, th, TransportMethod::Series, tol);
        CHECK((a - b).norm() <= 10 * tol * std::max(1.0, a.norm()) + 1e-11);
      }
  }

  TEST_CASE("transmission block is a contraction") {
    gen::Rng rng(71);
    for (int trial = 0; trial < 8; ++trial) {
      const int k = rng.integer(1, 4);
      const double th = rng.uniform(0, kTwoPi);
      const auto t = transmission_matrix(k, th, TransportMethod::Series);
      const auto r = transport_quantities(t, k, th);
      CHECK(r.transmissions.front() <= 1 + 1e-10);
      CHECK(r.transmissions.back() >= -1e-10);
      CHECK(std::is_sorted(r.transmissions.rbegin(), r.transmissions.rend()));
    }
  }

  TEST_CASE("transport_quantities examples") {
    const auto zero = transport_quantities(ComplexMatrix::Zero(4, 4));
    CHECK(zero.g == 0.0);
    CHECK(zero.P == 0.0);
    CHECK_FALSE(zero.F.has_value());

    const auto id = transport_quantities(ComplexMatrix::Identity(3, 3));
    CHECK(id.g == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::abs(id.P) <= 1e-14);
    REQUIRE(id.F);
    CHECK(std::abs(*id.F) <= 1e-14);

    ComplexMatrix half = ComplexMatrix::Identity(2, 2) / std::sqrt(2.0);
    const auto h = transport_quantities(half);
    CHECK(h.g == doctest::Approx(1.0));
    CHECK(h.P == doctest::Approx(0.5));
    CHECK(*h.F == doctest::Approx(0.5));

    CHECK_THROWS_AS(transport_quantities(2.0 * ComplexMatrix::Identity(2, 2)), ContractViolation);
  }

  TEST_CASE("trace identities for g and P") {
    gen::Rng rng(72);
    for (int trial = 0; trial < 20; ++trial) {
      ComplexMatrix t = rng.matrix(6, 6);
      t /= 1.01 * t.operatorNorm();
      const auto r = transport_quantities(t);
      const ComplexMatrix tt = t.adjoint() * t;
      CHECK(std::abs(r.g - tt.trace().real()) <= 1e-12);
      CHECK(std::abs(r.P - (tt - tt * tt).trace().real()) <= 1e-12);
      CHECK(std::abs(*r.F - r.P / r.g) <= 1e-14);
    }
  }

  TEST_CASE("k=4 conductance is near half the channel count") {
    const auto r = transport_quantities(transmission_matrix(4, 0.0, TransportMethod::Series), 4, 0.0);
    CHECK(std::abs(r.g - 32.0) <= 0.05 * 32.0);
  }

  TEST_CASE("resolvent refuses long systems") {
    CHECK_THROWS_AS(transmission_matrix(kResolventMaxLength + 1, 0.0, TransportMethod::Resolvent), DomainError);
    CHECK_THROWS_AS(transmission_matrix(0, 0.0, TransportMethod::Series), DomainError);
  }

  TEST_CASE("asymptotics report") {
    const auto rep = transport_asymptotics({1, 2, 3}, {0.0, kPi});
    CHECK(rep.rows.size() == 6);
    CHECK(rep.leading_rows().size() == 3);
    CHECK(rep.theta_stats.size() == 3);
    CHECK(rep.shot_noise_constant == doctest::Approx(0.1375));
    CHECK(rep.random_matrix_fano == 0.125);
    for (const auto& row : rep.rows) {
      CHECK(row.g_scaled == doctest::Approx(row.g / (std::pow(4.0, row.k - 1) / 2)));
      CHECK(row.P_scaled == doctest::Approx(row.P / std::pow(2.0, row.k - 1)));
    }
  }

  TEST_CASE("relative_std and theta_grid") {
    CHECK(relative_std({2.0, 2.0, 2.0}) == 0.0);
    CHECK(relative_std({1.0, 3.0}) == doctest::Approx(0.5));
    const auto g = theta_grid(4);
    REQUIRE(g.size() == 4);
    CHECK(g[1] == doctest::Approx(kPi / 2));
    CHECK_THROWS_AS(theta_grid(0), DomainError);
  }
}
