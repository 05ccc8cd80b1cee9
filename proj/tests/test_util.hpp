#pragma once

#include <complex>
#include <random>

#include "qdcnot/circuits.hpp"

namespace testutil {

using qdcnot::Amplitude;

inline std::pair<Amplitude, Amplitude> random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Amplitude a{n(rng), n(rng)}, b{n(rng), n(rng)};
  const double s = std::sqrt(std::norm(a) + std::norm(b));
  return {a / s, b / s};
}

inline qdcnot::CnotInputs random_inputs(std::mt19937_64& rng, bool random_spin = false) {
  qdcnot::CnotInputs in;
  std::tie(in.alpha, in.beta) = random_qubit(rng);
  std::tie(in.delta, in.gamma_amp) = random_qubit(rng);
  if (random_spin) std::tie(in.spin_up, in.spin_down) = random_qubit(rng);
  return in;
}

// Every xi and tau drawn from [0, max_err].
inline qdcnot::DeviceErrorConfig random_errors(std::mt19937_64& rng, double max_err) {
  std::uniform_real_distribution<double> u(0.0, max_err);
  qdcnot::DeviceErrorConfig e;
  e.xi1.xi = u(rng);
  e.xi2.xi = u(rng);
  for (auto& c : e.cpbs) c = {u(rng), u(rng)};
  return e;
}

inline qdcnot::CavityParams random_cavity(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> g(0.0, 3.0), ks(0.0, 2.0), gx(0.01, 1.0);
  return {.g = g(rng), .kappa = 1.0, .kappa_s = ks(rng), .gamma_x = gx(rng)};
}

}  // namespace testutil
