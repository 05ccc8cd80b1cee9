// cavity.hpp
// Charged quantum-dot spin in a double-sided optical microcavity at resonance.

#pragma once

#include <cmath>
#include <stdexcept>

#include "state.hpp"

namespace qdcnot {

// Rates in units of the cavity decay rate kappa.
struct CavityParams {
  double g = 2.5;         // coupling strength
  double kappa = 1.0;     // cavity field decay into the input/output modes
  double kappa_s = 0.05;  // side leakage
  double gamma_x = 0.1;   // X- dipole decay
};

// Signed resonant coefficients and the magnitudes used by the interaction rules.
struct CavityCoeffs {
  double t = 0.0;   // t(w), coupled cavity
  double r = 1.0;   // r(w) = 1 + t(w)
  double t_0 = -1.0;  // uncoupled (g = 0)
  double r_0 = 0.0;
  double t1 = 0.0, r1 = 1.0, t0 = 1.0, r0 = 0.0;
};

inline CavityCoeffs coeffs_from_magnitudes(double t1, double r1, double t0, double r0) {
  CavityCoeffs c;
  c.t = -t1;
  c.r = r1;
  c.t_0 = -t0;
  c.r_0 = r0;
  c.t1 = t1;
  c.r1 = r1;
  c.t0 = t0;
  c.r0 = r0;
  return c;
}

inline CavityCoeffs cavity_coeffs(const CavityParams& p) {
  if (!(p.kappa > 0.0)) throw std::domain_error("kappa must be > 0");
  if (!(p.g >= 0.0 && p.kappa_s >= 0.0 && p.gamma_x >= 0.0)) throw std::domain_error("cavity rates must be >= 0");
  const double denom = p.gamma_x * (2.0 * p.kappa + p.kappa_s) + 4.0 * p.g * p.g;
  if (!(denom > 0.0)) throw std::domain_error("degenerate cavity parameters: gamma_x and g both zero");
  CavityCoeffs c;
  c.t = -2.0 * p.gamma_x * p.kappa / denom;
  c.r = 1.0 + c.t;
  // g = 0: gamma_x cancels, so the uncoupled cavity is defined even at gamma_x = 0.
  c.t_0 = -2.0 * p.kappa / (2.0 * p.kappa + p.kappa_s);
  c.r_0 = 1.0 + c.t_0;
  c.t1 = std::abs(c.t);
  c.r1 = std::abs(c.r);
  c.t0 = std::abs(c.t_0);
  c.r0 = std::abs(c.r_0);
  return c;
}

inline bool is_strong_coupling(const CavityParams& p) { return p.g > (p.kappa_s + p.kappa) / 4.0; }

using InteractionKey = std::pair<PhotonMode, Spin>;
using InteractionMap = ModeMap<InteractionKey>;

// Photon-spin interaction inside the cavity. The spin never flips; the
// polarization flips exactly when the propagation direction does.
//   |R^dn,up> -> -t0 |R^dn,up> - r0 |L^up,up>
//   |R^dn,dn> ->  r1 |L^up,dn> + t1 |R^dn,dn>
//   |R^up,up> ->  r1 |L^dn,up> + t1 |R^up,up>
//   |R^up,dn> -> -t0 |R^up,dn> - r0 |L^dn,dn>
//   |L^dn,up> ->  r1 |R^up,up> + t1 |L^dn,up>
//   |L^dn,dn> -> -t0 |L^dn,dn> - r0 |R^up,dn>
//   |L^up,up> -> -t0 |L^up,up> - r0 |R^dn,up>
//   |L^up,dn> ->  r1 |R^dn,dn> + t1 |L^up,dn>
inline InteractionMap qd_interaction_map(const CavityCoeffs& c) {
  using enum Pol;
  using enum Dir;
  const auto U = Spin::up, D = Spin::down;
  auto key = [](Pol p, Dir d, Spin s) { return InteractionKey{{p, d}, s}; };
  InteractionMap m;
  m.add(key(R, down, U), {{key(R, down, U), -c.t0}, {key(L, up, U), -c.r0}});
  m.add(key(R, down, D), {{key(L, up, D), c.r1}, {key(R, down, D), c.t1}});
  m.add(key(R, up, U), {{key(L, down, U), c.r1}, {key(R, up, U), c.t1}});
  m.add(key(R, up, D), {{key(R, up, D), -c.t0}, {key(L, down, D), -c.r0}});
  m.add(key(L, down, U), {{key(R, up, U), c.r1}, {key(L, down, U), c.t1}});
  m.add(key(L, down, D), {{key(L, down, D), -c.t0}, {key(R, up, D), -c.r0}});
  m.add(key(L, up, U), {{key(L, up, U), -c.t0}, {key(R, down, U), -c.r0}});
  m.add(key(L, up, D), {{key(R, down, D), c.r1}, {key(L, up, D), c.t1}});
  return m;
}

// Applies the interaction table to one (photon, spin) pair.
template <Factor F>
JointState qd_interact(const JointState& s, const CavityCoeffs& c) {
  for (const auto& [l, a] : s.entries())
    if (PhotonSel<F>::get(l).dir == Dir::none)
      throw std::invalid_argument("photon outside the cavity has no propagation direction: " + to_string(l));
  return apply_mode_map<JointSel<PhotonSel<F>, SpinSel>>(s, qd_interaction_map(c));
}

}  // namespace qdcnot
