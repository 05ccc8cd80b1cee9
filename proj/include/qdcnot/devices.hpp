// devices.hpp
// Imperfect linear-optical components, the single-photon switch, the spin
// Hadamard and the cloner stage.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "state.hpp"

namespace qdcnot {

using PhotonMap = ModeMap<PhotonMode>;
using SpinMap = ModeMap<Spin>;

/// Optimal universal 1->2 cloner fidelity.
inline constexpr double universal_cloner_fidelity = 5.0 / 6.0;

struct HwpError {
  double xi = 0.0;
};

struct CpbsError {
  double tau_r = 0.0;
  double tau_l = 0.0;
};

// Port probabilities of one single-photon switch.
struct SwitchCoeffs {
  double t12 = 1.0;
  double t21 = 1.0;
  double r11 = 1.0;
  double r22 = 1.0;
};

enum class ClonerModel { scalar, universal };

struct ClonerConfig {
  double fidelity = 1.0;
  ClonerModel model = ClonerModel::scalar;
};

inline void check(const HwpError& e) {
  if (!(std::abs(e.xi) <= 1.0)) throw std::domain_error("HWP error xi must satisfy |xi| <= 1");
}

inline void check(const CpbsError& e) {
  if (!(e.tau_r >= 0.0 && e.tau_r <= 1.0)) throw std::domain_error("CPBS tau_r must lie in [0, 1]");
  if (!(e.tau_l >= 0.0 && e.tau_l <= 1.0)) throw std::domain_error("CPBS tau_l must lie in [0, 1]");
}

inline void check(const SwitchCoeffs& c) {
  for (double v : {c.t12, c.t21, c.r11, c.r22})
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("switch coefficients must lie in [0, 1]");
}

inline void check(const ClonerConfig& c) {
  if (!(c.fidelity >= 0.5 && c.fidelity <= 1.0)) throw std::domain_error("cloner fidelity must lie in [0.5, 1]");
}

// Half-wave plate with error xi:
//   R -> sqrt((1-xi)/2) R + sqrt((1+xi)/2) L
//   L -> sqrt((1-xi)/2) R - sqrt((1+xi)/2) L
// Each image has unit norm but the images overlap by -xi.
inline PhotonMap hwp_map(HwpError err) {
  check(err);
  const double a = std::sqrt((1.0 - err.xi) / 2.0);
  const double b = std::sqrt((1.0 + err.xi) / 2.0);
  return {
      {{Pol::R}, {{{Pol::R}, a}, {{Pol::L}, b}}},
      {{Pol::L}, {{{Pol::R}, a}, {{Pol::L}, -b}}},
  };
}

struct CpbsMaps {
  PhotonMap transmit;
  PhotonMap reflect;
};

// Circular polarizing beam splitter, multiplicative leakage convention:
// transmit keeps sqrt(1-tau_r) of R and leaks sqrt(tau_l) of L, reflect the converse.
inline CpbsMaps cpbs_maps(CpbsError err) {
  check(err);
  const double tr = std::sqrt(1.0 - err.tau_r), lr = std::sqrt(err.tau_r);
  const double tl = std::sqrt(1.0 - err.tau_l), ll = std::sqrt(err.tau_l);
  return {
      PhotonMap{{{Pol::R}, {{{Pol::R}, tr}}}, {{Pol::L}, {{{Pol::L}, ll}}}},
      PhotonMap{{{Pol::R}, {{{Pol::R}, lr}}}, {{Pol::L}, {{{Pol::L}, tl}}}},
  };
}

// Routes a free photon into the double-sided cavity: the transmit port feeds
// the downward-travelling side, the reflect port the upward-travelling side.
inline PhotonMap cpbs_split_map(CpbsError err) {
  const auto [transmit, reflect] = cpbs_maps(err);
  PhotonMap out;
  for (Pol p : {Pol::R, Pol::L}) {
    std::vector<Term<PhotonMode>> terms;
    for (const auto& t : *transmit.find({p})) terms.push_back({{t.out.pol, Dir::down}, t.amp});
    for (const auto& t : *reflect.find({p})) terms.push_back({{t.out.pol, Dir::up}, t.amp});
    out.add({p}, std::move(terms));
  }
  return out;
}

// Recombines the two cavity exits on the same CPBS. Light leaving downward
// passes the transmit port, light leaving upward the reflect port; the
// complementary port outputs are lost.
inline PhotonMap cpbs_merge_map(CpbsError err) {
  const auto [transmit, reflect] = cpbs_maps(err);
  PhotonMap out;
  for (Pol p : {Pol::R, Pol::L}) {
    out.add({p, Dir::down}, *transmit.find({p}));
    out.add({p, Dir::up}, *reflect.find({p}));
  }
  return out;
}

// Ideal QWP used as a circular <-> linear relabeling: R <-> H, L <-> V.
inline PhotonMap qwp_basis_swap() {
  return {
      {{Pol::R}, {{{Pol::H}, 1.0}}},
      {{Pol::L}, {{{Pol::V}, 1.0}}},
      {{Pol::H}, {{{Pol::R}, 1.0}}},
      {{Pol::V}, {{{Pol::L}, 1.0}}},
  };
}

// Ideal polarization flip R <-> L.
inline PhotonMap polarization_flip() {
  return {
      {{Pol::R}, {{{Pol::L}, 1.0}}},
      {{Pol::L}, {{{Pol::R}, 1.0}}},
  };
}

inline SpinMap spin_hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {
      {Spin::up, {{Spin::up, s}, {Spin::down, s}}},
      {Spin::down, {{Spin::up, s}, {Spin::down, -s}}},
  };
}

// ---------------------------------------------------------------------------
// Single-photon switch built on a Lambda-type atom.

enum class AtomState { plus, minus };  // m_F = +1 / -1
enum class InPort { i1, i2 };
enum class OutPort { o1, o2 };
enum class Circular { sigma_plus, sigma_minus };

struct SwitchOutcome {
  OutPort output;
  AtomState atom;
  Circular photon;
  bool toggled;
  bool operator==(const SwitchOutcome&) const = default;
};

// A photon on I1 couples only through sigma+ with the atom in m_F=-1; it is
// reflected to O1 as sigma- and toggles the atom to m_F=+1. Mirror rule for
// I2/sigma-/m_F=+1. Any other combination is transmitted unchanged.
inline SwitchOutcome switch_route(AtomState atom, InPort in, Circular photon) {
  if (in == InPort::i1 && photon == Circular::sigma_plus && atom == AtomState::minus)
    return {OutPort::o1, AtomState::plus, Circular::sigma_minus, true};
  if (in == InPort::i2 && photon == Circular::sigma_minus && atom == AtomState::plus)
    return {OutPort::o2, AtomState::minus, Circular::sigma_plus, true};
  return {in == InPort::i1 ? OutPort::o2 : OutPort::o1, atom, photon, false};
}

enum class SwitchPath { i1_to_o2, i2_to_o1, i1_to_o1, i2_to_o2 };

// Amplitude factor of one routing leg: sqrt of the port probability.
inline double switch_amplitude(const SwitchCoeffs& c, SwitchPath path) {
  check(c);
  switch (path) {
    case SwitchPath::i1_to_o2: return std::sqrt(c.t12);
    case SwitchPath::i2_to_o1: return std::sqrt(c.t21);
    case SwitchPath::i1_to_o1: return std::sqrt(c.r11);
    case SwitchPath::i2_to_o2: return std::sqrt(c.r22);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Cloner.

// Clone polarization (R/L basis) and the weight factor the cloner charges.
struct CloneOutput {
  Amplitude r;
  Amplitude l;
  double weight;
};

// The scalar model gives the clone the same state and charges sqrt(F) to the
// global weight. The universal model leaves the weight alone and gives the
// clone a pure state with overlap F with the original; universal_clone_density()
// has the exact mixed state.
inline CloneOutput clone_factor(Amplitude alpha, Amplitude beta, const ClonerConfig& cfg) {
  check(cfg);
  if (cfg.model == ClonerModel::scalar) return {alpha, beta, std::sqrt(cfg.fidelity)};
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  const double f = std::sqrt(cfg.fidelity), g = std::sqrt(1.0 - cfg.fidelity);
  return {(f * alpha - g * std::conj(beta)) / n, (f * beta + g * std::conj(alpha)) / n, 1.0};
}

// Copies a lone photon-1 factor onto the clone factor.
inline JointState clone_photon(const JointState& control, const ClonerConfig& cfg) {
  if (control.has(clone)) throw std::invalid_argument("clone already present");
  if (control.factors() != photon1) throw std::invalid_argument("cloner input must be the photon-1 factor alone");
  const Amplitude alpha = control.amplitude({.p1 = {Pol::R}});
  const Amplitude beta = control.amplitude({.p1 = {Pol::L}});
  if (control.size() != static_cast<std::size_t>((std::abs(alpha) > 0) + (std::abs(beta) > 0)))
    throw std::invalid_argument("cloner input must be in the R/L basis");
  const auto c = clone_factor(alpha, beta, cfg);
  return tensor(control, photon_state(clone, c.r, c.l)).times_weight(c.weight);
}

using Density2 = std::array<std::array<Amplitude, 2>, 2>;

// F|psi><psi| + (1-F)|psi_perp><psi_perp| in the R/L basis.
inline Density2 universal_clone_density(Amplitude alpha, Amplitude beta, double fidelity) {
  const double n = std::norm(alpha) + std::norm(beta);
  const std::array<Amplitude, 2> psi{alpha, beta}, perp{-std::conj(beta), std::conj(alpha)};
  Density2 rho{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      rho[i][j] = (fidelity * psi[i] * std::conj(psi[j]) + (1.0 - fidelity) * perp[i] * std::conj(perp[j])) / n;
  return rho;
}

}  // namespace qdcnot
