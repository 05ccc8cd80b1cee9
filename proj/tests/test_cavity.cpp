#include <gtest/gtest.h>

#include <random>

#include "qdcnot/cavity.hpp"
#include "test_util.hpp"

using namespace qdcnot;

namespace {

// Resonant reflection/transmission of a double-sided cavity evaluated from
// the input-output formula with explicit detunings set to zero.
std::pair<std::complex<double>, std::complex<double>> reference_rt(double g, double ks, double gx) {
  using cd = std::complex<double>;
  const cd i{0, 1};
  const double w = 0, wc = 0, wx = 0, kappa = 1;
  const cd num = -kappa * (i * (wx - w) + gx / 2);
  const cd den = (i * (wx - w) + gx / 2) * (i * (wc - w) + kappa + ks / 2) + g * g;
  const cd t = num / den;
  return {1.0 + t, t};
}

}  // namespace

TEST(Cavity, SpotValuesAtStrongCoupling) {
  const auto c = cavity_coeffs({.g = 2.5, .kappa = 1, .kappa_s = 0.05, .gamma_x = 0.1});
  // -2*0.1 / (0.1*2.05 + 25) and 0.05 / 2.05
  EXPECT_NEAR(c.t1, 0.2 / 25.205, 1e-15);
  EXPECT_NEAR(c.r0, 0.05 / 2.05, 1e-15);
  EXPECT_NEAR(c.t1, 0.0079349, 1e-6);
  EXPECT_NEAR(c.r0, 0.0243902, 1e-6);
  EXPECT_NEAR(c.r1, 1 - c.t1, 1e-15);
  EXPECT_NEAR(c.t0, 2 / 2.05, 1e-15);
}

TEST(Cavity, MatchesInputOutputFormula) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto p = testutil::random_cavity(rng);
    const auto c = cavity_coeffs(p);
    const auto [r, t] = reference_rt(p.g, p.kappa_s, p.gamma_x);
    EXPECT_NEAR(c.t, t.real(), 1e-13);
    EXPECT_NEAR(c.r, r.real(), 1e-13);
    const auto [r0, t0] = reference_rt(0.0, p.kappa_s, p.gamma_x);
    EXPECT_NEAR(c.t_0, t0.real(), 1e-13);
    EXPECT_NEAR(c.r_0, r0.real(), 1e-13);
  }
}

TEST(CavityProperty, ReflectionIsOnePlusTransmission) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    const auto c = cavity_coeffs(testutil::random_cavity(rng));
    EXPECT_LE(std::abs(c.r - 1 - c.t), 1e-12);
    EXPECT_LE(std::abs(c.r_0 - 1 - c.t_0), 1e-12);
  }
}

TEST(CavityProperty, MonotoneInCouplingStrength) {
  for (double ks : {0.0, 0.05, 0.5, 1.0, 2.0}) {
    double prev_t1 = 2, prev_r1 = -1;
    for (int k = 0; k <= 60; ++k) {
      const auto c = cavity_coeffs({.g = 0.05 * k, .kappa = 1, .kappa_s = ks, .gamma_x = 0.1});
      EXPECT_LE(c.t1, prev_t1);
      EXPECT_GE(c.r1, prev_r1);
      prev_t1 = c.t1;
      prev_r1 = c.r1;
    }
  }
}

TEST(Cavity, StrongCouplingLimit) {
  const auto c = cavity_coeffs({.g = 1e4, .kappa = 1, .kappa_s = 0, .gamma_x = 0.1});
  EXPECT_NEAR(c.r1, 1, 1e-8);
  EXPECT_NEAR(c.t1, 0, 1e-8);
  EXPECT_NEAR(c.t0, 1, 1e-15);
  EXPECT_NEAR(c.r0, 0, 1e-15);
}

TEST(Cavity, GammaZeroStillDefinesUncoupledValues) {
  const auto c = cavity_coeffs({.g = 1, .kappa = 1, .kappa_s = 0.2, .gamma_x = 0});
  EXPECT_EQ(c.t, 0.0);
  EXPECT_NEAR(c.t_0, -2 / 2.2, 1e-15);
}

TEST(Cavity, RejectsDegenerateParameters) {
  EXPECT_THROW(cavity_coeffs({.g = 1, .kappa = 0}), std::domain_error);
  EXPECT_THROW(cavity_coeffs({.g = -1}), std::domain_error);
  EXPECT_THROW(cavity_coeffs({.g = 0, .kappa = 1, .kappa_s = 0.1, .gamma_x = 0}), std::domain_error);
}

TEST(Cavity, CouplingRegimeBoundaryIsStrict) {
  EXPECT_TRUE(is_strong_coupling({.g = 2.5, .kappa = 1, .kappa_s = 0.05}));
  EXPECT_FALSE(is_strong_coupling({.g = 0.45, .kappa = 1, .kappa_s = 1.0}));
  EXPECT_FALSE(is_strong_coupling({.g = 0.5, .kappa = 1, .kappa_s = 1.0}));
}

TEST(Interaction, IdealTableSwapsDirectionExactlyWhenPolarizationFlips) {
  const auto m = qd_interaction_map(coeffs_from_magnitudes(0.3, 0.7, 0.6, 0.4));
  ASSERT_EQ(m.rules().size(), 8u);
  for (const auto& rule : m.rules()) {
    for (const auto& t : rule.out) {
      EXPECT_EQ(t.out.second, rule.in.second);  // spin preserved
      const bool pol_flip = t.out.first.pol != rule.in.first.pol;
      const bool dir_flip = t.out.first.dir != rule.in.first.dir;
      EXPECT_EQ(pol_flip, dir_flip);
    }
  }
}

TEST(Interaction, SpinDownRDownIsReflected) {
  auto s = tensor(make_state(photon1, {{BasisLabel{.p1 = {Pol::R, Dir::down}}, 1.0}}), spin_state(0.0, 1.0));
  s = qd_interact<photon1>(s, coeffs_from_magnitudes(0.1, 0.9, 0.8, 0.2));
  EXPECT_NEAR(s.amplitude({.p1 = {Pol::L, Dir::up}, .spin = Spin::down}).real(), 0.9, 1e-15);
  EXPECT_NEAR(s.amplitude({.p1 = {Pol::R, Dir::down}, .spin = Spin::down}).real(), 0.1, 1e-15);
}

TEST(Interaction, PhotonOutsideCavityThrows) {
  const auto s = tensor(photon_state(photon1, 1.0, 0.0), spin_state(1.0, 0.0));
  EXPECT_THROW(qd_interact<photon1>(s, coeffs_from_magnitudes(0, 1, 1, 0)), std::invalid_argument);
}
