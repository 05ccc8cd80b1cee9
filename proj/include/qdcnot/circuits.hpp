// circuits.hpp
// Baseline spin-cavity CNOT and the cloner-assisted CNOT that removes the
// spin-dependent sign, plus the closed-form output coefficients used to
// cross-check the compositional pipeline.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "cavity.hpp"
#include "devices.hpp"
#include "state.hpp"

namespace qdcnot {

struct CnotInputs {
  Amplitude alpha = 1.0;  // photon 1 (control): alpha|R> + beta|L>
  Amplitude beta = 0.0;
  Amplitude delta = 1.0;  // photon 2 (target): delta|R> + gamma|L>
  Amplitude gamma_amp = 0.0;
  Amplitude spin_up = 1.0 / std::sqrt(2.0);  // spin: (|up> - |down>)/sqrt(2) by default
  Amplitude spin_down = -1.0 / std::sqrt(2.0);
};

inline void check(const CnotInputs& in) {
  auto unit = [](Amplitude a, Amplitude b) { return std::abs(std::norm(a) + std::norm(b) - 1.0) <= 1e-9; };
  if (!unit(in.alpha, in.beta)) throw std::invalid_argument("photon 1 amplitudes are not normalized");
  if (!unit(in.delta, in.gamma_amp)) throw std::invalid_argument("photon 2 amplitudes are not normalized");
  if (!unit(in.spin_up, in.spin_down)) throw std::invalid_argument("spin amplitudes are not normalized");
}

struct DeviceErrorConfig {
  HwpError xi1;
  HwpError xi2;
  std::array<CpbsError, 4> cpbs{};  // CPBS1..CPBS4
  SwitchCoeffs sw1;
  SwitchCoeffs sw2;
  ClonerConfig cloner;
};

inline void check(const DeviceErrorConfig& e) {
  check(e.xi1);
  check(e.xi2);
  for (const auto& c : e.cpbs) check(c);
  check(e.sw1);
  check(e.sw2);
  check(e.cloner);
}

// Coefficients of |R1R2>, |R1L2>, |L1L2>, |L1R2> on the up branch (0..3) and
// the down branch (4..7), with each branch scaled to unit ideal weight.
struct EtaCoefficients {
  std::array<Amplitude, 8> eta{};
  double theta = -1.0;
  double prefactor = 1.0;
};

inline constexpr std::array<std::pair<Pol, Pol>, 4> eta_photon_order{
    {{Pol::R, Pol::R}, {Pol::R, Pol::L}, {Pol::L, Pol::L}, {Pol::L, Pol::R}}};

inline BasisLabel eta_label(std::size_t k) {
  const auto [p1, p2] = eta_photon_order[k % 4];
  return {.p1 = {p1}, .p2 = {p2}, .spin = k < 4 ? Spin::up : Spin::down};
}

inline CavityCoeffs ideal_cavity() { return coeffs_from_magnitudes(0.0, 1.0, 1.0, 0.0); }

inline JointState initial_state(const CnotInputs& in) {
  return tensor(tensor(photon_state(photon1, in.alpha, in.beta), photon_state(photon2, in.delta, in.gamma_amp)),
                spin_state(in.spin_up, in.spin_down));
}

// CPBS split -> QD interaction -> CPBS recombine for one photon.
template <Factor F>
JointState cavity_pass(const JointState& s, const CavityCoeffs& c, const CpbsError& cpbs) {
  using Sel = PhotonSel<F>;
  auto out = apply_mode_map<Sel>(s, cpbs_split_map(cpbs));
  out = qd_interact<F>(out, c);
  return apply_mode_map<Sel>(out, cpbs_merge_map(cpbs));
}

// Photon 1: HWP1 -> cavity stage -> HWP2. Spin Hadamard, photon 2 through the
// same cavity stage, spin Hadamard. Both photons use CPBS1.
inline JointState baseline_stages(JointState s, const CavityCoeffs& c, const DeviceErrorConfig& err) {
  s = apply_mode_map<Photon1>(s, hwp_map(err.xi1));
  s = cavity_pass<photon1>(s, c, err.cpbs[0]);
  s = apply_mode_map<Photon1>(s, hwp_map(err.xi2));
  s = apply_mode_map<SpinSel>(s, spin_hadamard());
  s = cavity_pass<photon2>(s, c, err.cpbs[0]);
  return apply_mode_map<SpinSel>(s, spin_hadamard());
}

inline JointState baseline_cnot(const CnotInputs& in, const CavityCoeffs& c, const DeviceErrorConfig& err) {
  check(in);
  check(err);
  return baseline_stages(initial_state(in), c, err);
}

inline JointState baseline_cnot(const CnotInputs& in, const CavityParams& p, const DeviceErrorConfig& err) {
  return baseline_cnot(in, cavity_coeffs(p), err);
}

// ---------------------------------------------------------------------------
// Photon-1' leg.

// The QD writes the spin onto photon 1' (initially chi_h|H> + chi_v|V>): after
// QWP2 it leaves as |R> on the up branch and |L> on the down branch. Its own
// polarization is contracted away.
inline ModeMap<InteractionKey> spin_to_photon_transfer_map(Amplitude chi_h, Amplitude chi_v) {
  const double n = std::sqrt(std::norm(chi_h) + std::norm(chi_v));
  if (!(n > 0.0)) throw std::invalid_argument("photon 1' state is zero");
  const Amplitude h = std::conj(chi_h) / n, v = std::conj(chi_v) / n;
  ModeMap<InteractionKey> m;
  for (Spin s : {Spin::up, Spin::down}) {
    const PhotonMode out{s == Spin::up ? Pol::R : Pol::L};
    m.add({{Pol::H}, s}, {{{out, s}, h}});
    m.add({{Pol::V}, s}, {{{out, s}, v}});
  }
  return m;
}

inline JointState spin_to_photon_transfer(const JointState& s, Amplitude chi_h, Amplitude chi_v) {
  if (!s.has(clone)) throw std::invalid_argument("photon 1' is absent");
  return apply_mode_map<JointSel<Clone, SpinSel>>(s, spin_to_photon_transfer_map(chi_h, chi_v));
}

// CPBS4 transmit port followed by HWP3: mu|R> continues as the sigma_z control
// in photon 1's |L> mode, nu|L> is discarded.
inline PhotonMap control_leg_map(const CpbsError& cpbs4) {
  const auto transmit = cpbs_maps(cpbs4).transmit;
  return {
      {{Pol::R}, {{{Pol::L}, transmit.find({Pol::R})->front().amp}}},
      {{Pol::L}, {}},
  };
}

// -sqrt((1-tau_L^2)(1-tau_L^3)(1-tau_R^4))
inline double theta(const CpbsError& cpbs2, const CpbsError& cpbs3, const CpbsError& cpbs4) {
  check(cpbs2);
  check(cpbs3);
  check(cpbs4);
  return -std::sqrt((1.0 - cpbs2.tau_l) * (1.0 - cpbs3.tau_l) * (1.0 - cpbs4.tau_r));
}

// Controlled sigma_z on photon 1, keyed by the post-transfer photon-1' polarization.
// When the control leg delivers photon 1' (amplitude c), CPBS2/CPBS3 apply
// -sqrt((1-tau_L^2)(1-tau_L^3)) c to |L1>; |R1> bypasses the gate. Photon 1'
// is consumed either way.
inline ModeMap<std::pair<PhotonMode, PhotonMode>> sigma_z_stage_map(const DeviceErrorConfig& err) {
  const auto leg = control_leg_map(err.cpbs[3]);
  const double phase_gate = -std::sqrt((1.0 - err.cpbs[1].tau_l) * (1.0 - err.cpbs[2].tau_l));
  ModeMap<std::pair<PhotonMode, PhotonMode>> m;
  const PhotonMode gone{};
  for (Pol clone_pol : {Pol::R, Pol::L}) {
    const auto& delivered = *leg.find({clone_pol});
    Amplitude on_l = 1.0;
    if (!delivered.empty()) on_l = phase_gate * delivered.front().amp;
    m.add({{Pol::R}, {clone_pol}}, {{{{Pol::R}, gone}, 1.0}});
    m.add({{Pol::L}, {clone_pol}}, {{{{Pol::L}, gone}, on_l}});
  }
  return m;
}

// sqrt(T^1_12 R^1_22 T^2_12 R^2_11): SW1 legs I1->O2, I2->O2; SW2 legs I1->O2, I1->O1.
inline double switch_prefactor(const DeviceErrorConfig& err) {
  return switch_amplitude(err.sw1, SwitchPath::i1_to_o2) * switch_amplitude(err.sw1, SwitchPath::i2_to_o2) *
         switch_amplitude(err.sw2, SwitchPath::i1_to_o2) * switch_amplitude(err.sw2, SwitchPath::i1_to_o1);
}

inline JointState optimized_cnot(const CnotInputs& in, const CavityCoeffs& c, const DeviceErrorConfig& err) {
  check(in);
  check(err);
  auto s = clone_photon(photon_state(photon1, in.alpha, in.beta), err.cloner);
  s = s.times_weight(switch_prefactor(err));
  s = tensor(tensor(s, photon_state(photon2, in.delta, in.gamma_amp)), spin_state(in.spin_up, in.spin_down));
  // QWP1; DL3 then holds photon 1' until photons 1 and 2 have left the cavity.
  s = apply_mode_map<Clone>(s, qwp_basis_swap());
  s = baseline_stages(std::move(s), c, err);
  // After QWP1 the clone's R/L amplitudes sit on H/V.
  const auto chi = clone_factor(in.alpha, in.beta, err.cloner);
  s = spin_to_photon_transfer(s, chi.r, chi.l);
  s = apply_mode_map<JointSel<Photon1, Clone>>(s, sigma_z_stage_map(err));
  return s.release(clone);
}

inline JointState optimized_cnot(const CnotInputs& in, const CavityParams& p, const DeviceErrorConfig& err) {
  return optimized_cnot(in, cavity_coeffs(p), err);
}

// ---------------------------------------------------------------------------
// Output coefficients.

// Reads the eight coefficients off a circuit output, dividing out `prefactor`
// and restoring unit ideal weight per spin branch.
inline std::array<Amplitude, 8> output_eta(const JointState& out, double prefactor = 1.0) {
  std::array<Amplitude, 8> eta{};
  for (std::size_t k = 0; k < 8; ++k) eta[k] = std::sqrt(2.0) * out.weighted(eta_label(k)) / prefactor;
  return eta;
}

// `consistent` takes sqrt(tau_L^1) in a2', a2'' and (r1 - r0) in a2'', a4'',
// which is what the interaction table and the CPBS model produce. `literal`
// keeps tau_L^1 unsquared and (r1 + r0) in those positions.
enum class EtaForm { consistent, literal };

inline Amplitude eta1_closed_form(const CnotInputs& in, const CavityCoeffs& c, const DeviceErrorConfig& err,
                                  EtaForm form = EtaForm::consistent) {
  const Amplitude al = in.alpha, be = in.beta, de = in.delta, ga = in.gamma_amp;
  const double x1 = err.xi1.xi, x2 = err.xi2.xi;
  const double tr = err.cpbs[0].tau_r, tl = err.cpbs[0].tau_l;
  const double t0 = c.t0, t1 = c.t1, r0 = c.r0, r1 = c.r1;
  const bool lit = form == EtaForm::literal;
  const double leak_l = lit ? tl : std::sqrt(tl);
  const double rr = lit ? r1 + r0 : r1 - r0;
  using std::sqrt;

  const Amplitude a1 = (al + be) * sqrt((1 - tr) * (1 - x1) / 2);
  const Amplitude a2 = (al + be) * sqrt(tr * (1 - x1) / 2);
  const Amplitude a3 = (al - be) * sqrt((1 - tl) * (1 + x1) / 2);
  const Amplitude a4 = (al - be) * sqrt(tl * (1 + x1) / 2);

  const double a1p = sqrt(1 - tr) * (t0 + t1) + sqrt(1 - tl) * (r0 + r1);
  const double a2p = sqrt(tr) * (t0 + t1) + leak_l * (r0 + r1);
  const double a3p = sqrt(1 - tr) * (r0 + r1) + sqrt(1 - tl) * (t0 + t1);
  const double a4p = sqrt(tr) * (r0 + r1) + sqrt(tl) * (t0 + t1);

  const double a1q = sqrt(1 - tr) * (t0 - t1) + sqrt(1 - tl) * (r0 - r1);
  const double a2q = sqrt(tr) * (t1 - t0) + leak_l * rr;
  const double a3q = sqrt(1 - tr) * (r0 - r1) + sqrt(1 - tl) * (t0 - t1);
  const double a4q = sqrt(tr) * rr + sqrt(tl) * (t1 - t0);

  const double dp = t1 * tr - t0 * (1 - tr);
  const double gp = r1 * sqrt(tr * tl) - r0 * sqrt((1 - tr) * (1 - tl));
  const double dq = t1 * (1 - tr) - t0 * tr;
  const double gq = r1 * sqrt((1 - tr) * (1 - tl)) - r0 * sqrt(tr * tl);

  return sqrt(1 - x2) / (2 * sqrt(2.0)) *
         ((a2 * a2p + a4 * a4p - a1 * a1p - a3 * a3p) * (de * dp + ga * gp) +
          (a2 * a2q + a4 * a4q - a1 * a1q - a3 * a3q) * (de * dq + ga * gq));
}

// eta_1 in closed form; eta_2..eta_8 from the optimized pipeline (they share
// eta_1's structure but are not written out independently).
inline EtaCoefficients eta_closed_form(const CnotInputs& in, const CavityCoeffs& c, const DeviceErrorConfig& err,
                                       EtaForm form = EtaForm::consistent) {
  EtaCoefficients e;
  e.theta = theta(err.cpbs[1], err.cpbs[2], err.cpbs[3]);
  e.prefactor = switch_prefactor(err) * std::sqrt(err.cloner.fidelity);
  e.eta = output_eta(optimized_cnot(in, c, err), e.prefactor);
  e.eta[0] = eta1_closed_form(in, c, err, form);
  return e;
}

}  // namespace qdcnot
