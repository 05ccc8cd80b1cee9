// fidelity.hpp
// Gate fidelity <psi|U^dag rho U|psi> of the simulated CNOT, averaged over an
// input ensemble. rho is built from the unnormalized output, so lost success
// probability lowers the fidelity.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuits.hpp"
#include "parallel.hpp"

namespace qdcnot {

enum class CircuitKind { baseline, optimized };

inline std::string to_string(CircuitKind k) { return k == CircuitKind::baseline ? "baseline" : "optimized"; }

enum class FidelityMode { branch_up, branch_down, both };

// heralded: a spin branch is compared at its ideal branch probability (the
// spin outcome is known), so a perfect heralded gate scores 1 per branch.
// folded: the raw overlap, which also carries the branch probability.
enum class BranchConvention { heralded, folded };

enum class EnsembleKind { basis4, superposition4, haar_product };

struct InputEnsemble {
  EnsembleKind kind = EnsembleKind::basis4;
  std::size_t n = 4;
  std::uint64_t seed = 0;
  std::vector<CnotInputs> states;

  std::string describe() const {
    switch (kind) {
      case EnsembleKind::basis4: return "basis4";
      case EnsembleKind::superposition4: return "superposition4";
      case EnsembleKind::haar_product:
        return "haar_product(" + std::to_string(n) + "," + std::to_string(seed) + ")";
    }
    return "?";
  }

  // {RR, RL, LR, LL}
  static InputEnsemble basis4() {
    InputEnsemble e;
    for (int c = 0; c < 2; ++c)
      for (int t = 0; t < 2; ++t) {
        CnotInputs in;
        in.alpha = c == 0 ? 1.0 : 0.0;
        in.beta = c == 0 ? 0.0 : 1.0;
        in.delta = t == 0 ? 1.0 : 0.0;
        in.gamma_amp = t == 0 ? 0.0 : 1.0;
        e.states.push_back(in);
      }
    return e;
  }

  // |+-> (x) |+-> with |+-> = (R +- L)/sqrt(2)
  static InputEnsemble superposition4() {
    InputEnsemble e;
    e.kind = EnsembleKind::superposition4;
    const double s = 1.0 / std::sqrt(2.0);
    for (double c : {1.0, -1.0})
      for (double t : {1.0, -1.0}) {
        CnotInputs in;
        in.alpha = s;
        in.beta = c * s;
        in.delta = s;
        in.gamma_amp = t * s;
        e.states.push_back(in);
      }
    return e;
  }

  // n product states, each qubit drawn from the unitarily invariant measure.
  static InputEnsemble haar_product(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("ensemble must be nonempty");
    InputEnsemble e;
    e.kind = EnsembleKind::haar_product;
    e.n = n;
    e.seed = seed;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto qubit = [&] {
      Amplitude a{normal(rng), normal(rng)}, b{normal(rng), normal(rng)};
      const double norm = std::sqrt(std::norm(a) + std::norm(b));
      return std::pair{a / norm, b / norm};
    };
    for (std::size_t i = 0; i < n; ++i) {
      CnotInputs in;
      std::tie(in.alpha, in.beta) = qubit();
      std::tie(in.delta, in.gamma_amp) = qubit();
      e.states.push_back(in);
    }
    return e;
  }
};

// U_CNOT|psi_in> (x) (spin_up|up> + spin_down|down>)
inline JointState cnot_target(const CnotInputs& in, Amplitude spin_up, Amplitude spin_down) {
  const auto photons = tensor(photon_state(photon1, in.alpha, 0.0), photon_state(photon2, in.delta, in.gamma_amp));
  JointState::Entries entries;
  for (const auto& [l, a] : photons.entries()) entries[l] += a;
  const auto flipped = tensor(photon_state(photon1, 0.0, in.beta), photon_state(photon2, in.gamma_amp, in.delta));
  for (const auto& [l, a] : flipped.entries()) entries[l] += a;
  return tensor(JointState::from_entries(photon1 | photon2, std::move(entries)), spin_state(spin_up, spin_down));
}

// Spin the error-free optimized circuit leaves behind, read off the computation.
inline std::pair<Amplitude, Amplitude> ideal_output_spin(const CnotInputs& in) {
  CnotInputs probe = in;
  probe.alpha = 1.0;
  probe.beta = 0.0;
  probe.delta = 1.0;
  probe.gamma_amp = 0.0;
  const auto out = optimized_cnot(probe, ideal_cavity(), DeviceErrorConfig{});
  Amplitude up = out.weighted({.p1 = {Pol::R}, .p2 = {Pol::R}, .spin = Spin::up});
  Amplitude down = out.weighted({.p1 = {Pol::R}, .p2 = {Pol::R}, .spin = Spin::down});
  const double n = std::sqrt(std::norm(up) + std::norm(down));
  return {up / n, down / n};
}

inline double fidelity_single(const JointState& out, const CnotInputs& in, FidelityMode mode,
                              BranchConvention convention = BranchConvention::heralded) {
  if (!out.has(spin)) throw std::invalid_argument("fidelity needs a state with a spin factor");
  if (out.factors() != (photon1 | photon2 | spin))
    throw std::invalid_argument("fidelity needs a photon-1, photon-2, spin state");
  if (mode == FidelityMode::both) {
    const auto [up, down] = ideal_output_spin(in);
    return std::norm(inner_product(cnot_target(in, up, down), out));
  }
  const Spin branch = mode == FidelityMode::branch_up ? Spin::up : Spin::down;
  const auto [part, weight] = project_spin(out, branch);
  const auto target = cnot_target(in, branch == Spin::up ? 1.0 : 0.0, branch == Spin::up ? 0.0 : 1.0);
  double f = std::norm(inner_product(target, part));
  if (convention == BranchConvention::heralded) {
    const auto [up, down] = ideal_output_spin(in);
    f /= std::norm(branch == Spin::up ? up : down);
  }
  return f;
}

// Squared norm of one spin branch, global weight included.
inline double success_probability(const JointState& out, Spin branch) { return project_spin(out, branch).second; }

inline double success_probability(const JointState& out) { return out.squared_norm(); }

struct FidelityReport {
  double f_up = 0.0;  // heralded branch fidelities
  double f_down = 0.0;
  double f_both = 0.0;
  double f_up_folded = 0.0;
  double f_down_folded = 0.0;
  double success = 0.0;  // mean output squared norm
  CircuitKind circuit = CircuitKind::baseline;
  std::string ensemble;
  CavityCoeffs coeffs;
  DeviceErrorConfig errors;
};

inline JointState run_circuit(CircuitKind kind, const CnotInputs& in, const CavityCoeffs& c,
                              const DeviceErrorConfig& err) {
  return kind == CircuitKind::baseline ? baseline_cnot(in, c, err) : optimized_cnot(in, c, err);
}

// Ensemble members are evaluated independently; the mean is summed in member order.
inline FidelityReport average_fidelity(CircuitKind kind, const CavityCoeffs& c, const DeviceErrorConfig& err,
                                       const InputEnsemble& ens, unsigned threads = 1) {
  if (ens.states.empty()) throw std::invalid_argument("ensemble must be nonempty");
  check(err);
  struct Row {
    double up, down, both, up_f, down_f, success;
  };
  std::vector<Row> rows(ens.states.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const auto& in = ens.states[i];
    const auto out = run_circuit(kind, in, c, err);
    rows[i] = {fidelity_single(out, in, FidelityMode::branch_up),
               fidelity_single(out, in, FidelityMode::branch_down),
               fidelity_single(out, in, FidelityMode::both),
               fidelity_single(out, in, FidelityMode::branch_up, BranchConvention::folded),
               fidelity_single(out, in, FidelityMode::branch_down, BranchConvention::folded),
               success_probability(out)};
  });
  FidelityReport r;
  for (const auto& row : rows) {
    r.f_up += row.up;
    r.f_down += row.down;
    r.f_both += row.both;
    r.f_up_folded += row.up_f;
    r.f_down_folded += row.down_f;
    r.success += row.success;
  }
  const double n = static_cast<double>(rows.size());
  r.f_up /= n;
  r.f_down /= n;
  r.f_both /= n;
  r.f_up_folded /= n;
  r.f_down_folded /= n;
  r.success /= n;
  r.circuit = kind;
  r.ensemble = ens.describe();
  r.coeffs = c;
  r.errors = err;
  return r;
}

inline FidelityReport average_fidelity(CircuitKind kind, const CavityParams& p, const DeviceErrorConfig& err,
                                       const InputEnsemble& ens, unsigned threads = 1) {
  return average_fidelity(kind, cavity_coeffs(p), err, ens, threads);
}

// ---------------------------------------------------------------------------
// Calibration ensemble: the candidate whose baseline, zero-error best-branch
// fidelity lands closest to the reference strong- and weak-coupling values.

struct CalibrationPoint {
  CavityParams cavity;
  double reference;
};

inline const std::vector<CalibrationPoint>& calibration_points() {
  static const std::vector<CalibrationPoint> points{
      {{.g = 2.5, .kappa = 1.0, .kappa_s = 0.05, .gamma_x = 0.1}, 0.9374},
      {{.g = 0.45, .kappa = 1.0, .kappa_s = 1.0, .gamma_x = 0.1}, 0.3234},
  };
  return points;
}

inline double best_branch(const FidelityReport& r) { return std::max(r.f_up, r.f_down); }

struct CalibrationResult {
  InputEnsemble ensemble;
  double max_residual = 0.0;
  std::vector<std::pair<std::string, double>> candidates;  // description, max residual
};

inline CalibrationResult select_calibration_ensemble(std::uint64_t seed = 0, std::size_t haar_n = 1000) {
  CalibrationResult result;
  result.max_residual = 1e300;
  for (auto ens : {InputEnsemble::basis4(), InputEnsemble::superposition4(), InputEnsemble::haar_product(haar_n, seed)}) {
    double worst = 0.0;
    for (const auto& p : calibration_points()) {
      const auto r = average_fidelity(CircuitKind::baseline, p.cavity, DeviceErrorConfig{}, ens);
      worst = std::max(worst, std::abs(best_branch(r) - p.reference));
    }
    result.candidates.emplace_back(ens.describe(), worst);
    if (worst < result.max_residual) {
      result.max_residual = worst;
      result.ensemble = std::move(ens);
    }
  }
  return result;
}

// Cached result of select_calibration_ensemble() for the default seed.
inline const CalibrationResult& calibration() {
  static const CalibrationResult c = select_calibration_ensemble();
  return c;
}

}  // namespace qdcnot
