#include <gtest/gtest.h>

#include <random>

#include "qdcnot/fidelity.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace qdcnot;

namespace {

CavityParams strong() { return {.g = 2.5, .kappa = 1, .kappa_s = 0.05, .gamma_x = 0.1}; }
CavityParams weak() { return {.g = 0.45, .kappa = 1, .kappa_s = 1.0, .gamma_x = 0.1}; }

DeviceErrorConfig uniform_errors(double e) {
  DeviceErrorConfig d;
  d.xi1.xi = d.xi2.xi = e;
  for (auto& c : d.cpbs) c = {e, e};
  return d;
}

// Output of an ideal gate that flips the sign of every |L1> component on both branches.
JointState sign_flipped_gate(const CnotInputs& in) {
  auto out = optimized_cnot(in, ideal_cavity(), {});
  JointState::Entries e;
  for (const auto& [l, a] : out.entries()) e[l] = l.p1.pol == Pol::L ? -a : a;
  return JointState::from_entries(out.factors(), e, out.global_weight());
}

}  // namespace

TEST(Ensemble, Basis4AndSuperposition4Contents) {
  const auto b = InputEnsemble::basis4();
  ASSERT_EQ(b.states.size(), 4u);
  EXPECT_EQ(b.states[1].alpha, Amplitude{1.0});
  EXPECT_EQ(b.states[1].gamma_amp, Amplitude{1.0});
  const auto s = InputEnsemble::superposition4();
  ASSERT_EQ(s.states.size(), 4u);
  for (const auto& in : s.states) EXPECT_NO_THROW(check(in));
}

TEST(Ensemble, HaarIsSeededAndNormalized) {
  const auto a = InputEnsemble::haar_product(50, 7), b = InputEnsemble::haar_product(50, 7);
  const auto c = InputEnsemble::haar_product(50, 8);
  ASSERT_EQ(a.states.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(a.states[i].alpha, b.states[i].alpha);
    EXPECT_NO_THROW(check(a.states[i]));
  }
  EXPECT_NE(a.states[0].alpha, c.states[0].alpha);
  EXPECT_THROW(InputEnsemble::haar_product(0, 0), std::invalid_argument);
}

TEST(Fidelity, IdealOptimizedIsOneEverywhere) {
  for (const auto& ens : {InputEnsemble::basis4(), InputEnsemble::superposition4(), InputEnsemble::haar_product(20, 1)}) {
    const auto r = average_fidelity(CircuitKind::optimized, ideal_cavity(), {}, ens);
    EXPECT_NEAR(r.f_up, 1.0, 1e-12);
    EXPECT_NEAR(r.f_down, 1.0, 1e-12);
    EXPECT_NEAR(r.f_both, 1.0, 1e-12);
    EXPECT_NEAR(r.f_up_folded, 0.5, 1e-12);
    EXPECT_NEAR(r.success, 1.0, 1e-12);
  }
}

TEST(Fidelity, IdealBaselineBranchExample) {
  // (R+L)/sqrt2 (x) R: the up branch carries (RR - LL)/2, the target (RR + LL)/sqrt2.
  // The overlap is (1/2 - 1/2)/sqrt2 = 0.
  CnotInputs in;
  in.alpha = in.beta = 1 / std::sqrt(2.0);
  const auto out = baseline_cnot(in, ideal_cavity(), {});
  EXPECT_NEAR(fidelity_single(out, in, FidelityMode::branch_up), 0.0, 1e-15);
  EXPECT_NEAR(fidelity_single(out, in, FidelityMode::branch_down), 1.0, 1e-14);
  EXPECT_NEAR(fidelity_single(out, in, FidelityMode::branch_down, BranchConvention::folded), 0.5, 1e-14);
  // Control in a basis state: the sign is global on the branch and the overlap is full.
  in.alpha = 0;
  in.beta = 1;
  EXPECT_NEAR(fidelity_single(baseline_cnot(in, ideal_cavity(), {}), in, FidelityMode::branch_up), 1.0, 1e-14);
}

TEST(Fidelity, ScalesWithWeightSquared) {
  std::mt19937_64 rng(51);
  const auto in = testutil::random_inputs(rng);
  const auto out = baseline_cnot(in, cavity_coeffs(strong()), uniform_errors(0.02));
  for (auto mode : {FidelityMode::branch_up, FidelityMode::branch_down, FidelityMode::both})
    EXPECT_NEAR(fidelity_single(out.times_weight(0.3), in, mode), 0.09 * fidelity_single(out, in, mode), 1e-14);
}

TEST(FidelityProperty, GlobalPhaseInvariance) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> ph(0, 2 * M_PI);
  for (int trial = 0; trial < 30; ++trial) {
    const auto in = testutil::random_inputs(rng);
    const auto out = optimized_cnot(in, cavity_coeffs(strong()), uniform_errors(0.01));
    const Amplitude phase = std::polar(1.0, ph(rng));
    JointState::Entries e;
    for (const auto& [l, a] : out.entries()) e[l] = phase * a;
    const auto rotated = JointState::from_entries(out.factors(), e, out.global_weight());
    for (auto mode : {FidelityMode::branch_up, FidelityMode::branch_down, FidelityMode::both})
      EXPECT_NEAR(fidelity_single(rotated, in, mode), fidelity_single(out, in, mode), 1e-13);
  }
}

TEST(FidelityProperty, Basis4IsBlindToAControlledSignWhileSuperposition4IsNot) {
  double basis = 0, super = 0;
  for (const auto& in : InputEnsemble::basis4().states)
    basis += fidelity_single(sign_flipped_gate(in), in, FidelityMode::both) / 4;
  for (const auto& in : InputEnsemble::superposition4().states)
    super += fidelity_single(sign_flipped_gate(in), in, FidelityMode::both) / 4;
  EXPECT_NEAR(basis, 1.0, 1e-12);
  EXPECT_LT(super, 1.0 - 0.1);
}

TEST(FidelityProperty, BoundedOnRandomConfigurations) {
  std::mt19937_64 rng(53);
  const auto ens = InputEnsemble::haar_product(8, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = cavity_coeffs(testutil::random_cavity(rng));
    const auto e = testutil::random_errors(rng, 0.1);
    for (auto kind : {CircuitKind::baseline, CircuitKind::optimized}) {
      const auto r = average_fidelity(kind, c, e, ens);
      for (double f : {r.f_up, r.f_down, r.f_both, r.f_up_folded, r.f_down_folded}) {
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0 + 1e-12);
      }
    }
  }
}

TEST(FidelityProperty, ErrorLadderDoesNotRaiseFidelity) {
  // Spot check, not a theorem.
  const auto ens = InputEnsemble::basis4();
  for (auto cav : {strong(), weak()}) {
    double prev = 2;
    for (double e : {0.0, 0.005, 0.01, 0.03, 0.1}) {
      auto err = uniform_errors(e);
      err.cloner.fidelity = universal_cloner_fidelity;
      const double f = average_fidelity(CircuitKind::optimized, cav, err, ens).f_both;
      EXPECT_LE(f, prev + 1e-12) << "error " << e;
      prev = f;
    }
  }
}

TEST(Fidelity, BothModeNeedsSpin) {
  CnotInputs in;
  EXPECT_THROW(fidelity_single(tensor(photon_state(photon1, 1, 0), photon_state(photon2, 1, 0)), in, FidelityMode::both),
               std::invalid_argument);
}

TEST(Fidelity, IdealOutputSpinIsComputedNotAssumed) {
  CnotInputs in;
  auto [u, d] = ideal_output_spin(in);
  EXPECT_NEAR(std::abs(u - 1 / std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(d - 1 / std::sqrt(2.0)), 0, 1e-15);
  // For an |R1 R2> input the optimized and baseline circuits coincide, so the
  // dense baseline model gives the expected spin for any spin input.
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    std::tie(in.spin_up, in.spin_down) = testutil::random_qubit(rng);
    std::tie(u, d) = ideal_output_spin(in);
    const auto ref = oracle::baseline(oracle::input(1, 0, 1, 0, in.spin_up, in.spin_down), {0, 1, 1, 0, 0, 0, 0, 0});
    const auto ru = oracle::amp(ref, oracle::R, oracle::R, oracle::SU), rd = oracle::amp(ref, oracle::R, oracle::R, oracle::SD);
    const double n = std::sqrt(std::norm(ru) + std::norm(rd));
    EXPECT_NEAR(std::abs(u - ru / n), 0, 1e-14);
    EXPECT_NEAR(std::abs(d - rd / n), 0, 1e-14);
  }
}

TEST(SuccessProbability, Examples) {
  std::mt19937_64 rng(54);
  const auto in = testutil::random_inputs(rng);
  EXPECT_NEAR(success_probability(baseline_cnot(in, ideal_cavity(), {}), Spin::down), 0.5, 1e-13);
  EXPECT_NEAR(success_probability(optimized_cnot(in, ideal_cavity(), {})), 1.0, 1e-13);
  DeviceErrorConfig e;
  e.sw1.t12 = 0.899;
  e.sw1.r22 = 0.65;
  e.sw2.t12 = 0.956;
  e.sw2.r11 = 0.648;
  e.cloner.fidelity = 0.82;
  EXPECT_NEAR(success_probability(optimized_cnot(in, ideal_cavity(), e)), 0.29684, 1e-5);
}

TEST(Fidelity, AverageIsDeterministicAcrossThreadCounts) {
  const auto ens = InputEnsemble::haar_product(64, 9);
  const auto a = average_fidelity(CircuitKind::optimized, strong(), uniform_errors(0.01), ens, 1);
  const auto b = average_fidelity(CircuitKind::optimized, strong(), uniform_errors(0.01), ens, 4);
  EXPECT_EQ(a.f_both, b.f_both);
  EXPECT_EQ(a.f_up, b.f_up);
  EXPECT_EQ(a.success, b.success);
}

TEST(Fidelity, ParallelForPropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }),
               std::runtime_error);
}

// Reference values below were produced by an independent dense-vector model
// of the same circuits (not by this library) and frozen.
TEST(FidelityRegression, CalibrationAnchors) {
  const auto ens = InputEnsemble::basis4();
  auto r = average_fidelity(CircuitKind::baseline, strong(), {}, ens);
  EXPECT_NEAR(r.f_up, 0.93709, 5e-5);
  EXPECT_NEAR(r.f_down, 0.93632, 5e-5);
  r = average_fidelity(CircuitKind::baseline, weak(), {}, ens);
  EXPECT_NEAR(best_branch(r), 0.32342, 5e-5);
  r = average_fidelity(CircuitKind::baseline, strong(), uniform_errors(0.01), ens);
  EXPECT_NEAR(best_branch(r), 0.89953, 5e-5);
  r = average_fidelity(CircuitKind::baseline, weak(), uniform_errors(0.01), ens);
  EXPECT_NEAR(best_branch(r), 0.30439, 5e-5);
}

TEST(Calibration, SelectsBasis4) {
  const auto& c = calibration();
  EXPECT_EQ(c.ensemble.describe(), "basis4");
  EXPECT_LT(c.max_residual, 0.01);
  EXPECT_EQ(c.candidates.size(), 3u);
}
