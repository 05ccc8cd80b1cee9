// state.hpp
// Sparse complex-amplitude state over a labeled photon/spin tensor basis.

#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qdcnot {

using Amplitude = std::complex<double>;

inline constexpr double prune_threshold = 1e-15;

enum class Pol : std::uint8_t { R, L, H, V, absent };
enum class Dir : std::uint8_t { none, down, up };
enum class Spin : std::uint8_t { up, down };

// Tensor factors a state may carry.
enum Factor : std::uint8_t { photon1 = 1, photon2 = 2, clone = 4, spin = 8 };
using FactorSet = std::uint8_t;

inline std::string to_string(Pol p) {
  switch (p) {
    case Pol::R: return "R";
    case Pol::L: return "L";
    case Pol::H: return "H";
    case Pol::V: return "V";
    case Pol::absent: return "-";
  }
  return "?";
}

inline std::string to_string(Dir d) {
  switch (d) {
    case Dir::none: return "";
    case Dir::down: return "^dn";
    case Dir::up: return "^up";
  }
  return "?";
}

inline std::string to_string(Spin s) { return s == Spin::up ? "up" : "down"; }

inline Spin flipped(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }

// Polarization plus cavity propagation direction; dir is none outside the cavity.
struct PhotonMode {
  Pol pol = Pol::absent;
  Dir dir = Dir::none;
  auto operator<=>(const PhotonMode&) const = default;
};

inline std::string to_string(const PhotonMode& m) { return to_string(m.pol) + to_string(m.dir); }

struct BasisLabel {
  PhotonMode p1;
  PhotonMode p2;
  PhotonMode clone;
  Spin spin = Spin::up;
  auto operator<=>(const BasisLabel&) const = default;
};

inline std::string to_string(const BasisLabel& l) {
  return "|" + to_string(l.p1) + "," + to_string(l.p2) + "," + to_string(l.clone) + "," +
         to_string(l.spin) + ">";
}

// Unnormalized state. Amplitudes are never renormalized; global_weight carries
// scalar success amplitudes (switches, cloner) separately from the entries.
class JointState {
 public:
  using Entries = std::map<BasisLabel, Amplitude>;

  JointState() = default;

  // Scalar state with no tensor factors; the identity for tensor().
  static JointState scalar(Amplitude value = 1.0) {
    JointState s;
    s.entries_.emplace(BasisLabel{}, value);
    return s;
  }

  FactorSet factors() const { return factors_; }
  bool has(Factor f) const { return (factors_ & f) != 0; }
  const Entries& entries() const { return entries_; }
  double global_weight() const { return weight_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Raw entry amplitude, without global_weight.
  Amplitude amplitude(const BasisLabel& l) const {
    auto it = entries_.find(l);
    return it == entries_.end() ? Amplitude{} : it->second;
  }

  // Entry amplitude multiplied by global_weight.
  Amplitude weighted(const BasisLabel& l) const { return amplitude(l) * weight_; }

  // Squared norm including global_weight^2.
  double squared_norm() const {
    double n = 0.0;
    for (const auto& [l, a] : entries_) n += std::norm(a);
    return n * weight_ * weight_;
  }

  JointState with_weight(double w) const {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::domain_error("global weight must be finite and >= 0");
    JointState s = *this;
    s.weight_ = w;
    return s;
  }

  JointState times_weight(double w) const { return with_weight(weight_ * w); }

  // Drops a factor whose label field is already absent on every entry.
  JointState release(Factor f) const;

  // Low-level constructor used by the state operations; prunes negligible entries.
  static JointState from_entries(FactorSet factors, Entries entries, double weight = 1.0);

 private:
  FactorSet factors_ = 0;
  Entries entries_;
  double weight_ = 1.0;
};

namespace detail {

inline bool photon_field_ok(const PhotonMode& m, bool present) {
  if (present) return m.pol != Pol::absent;
  return m.pol == Pol::absent && m.dir == Dir::none;
}

inline void check_well_formed(FactorSet f, const BasisLabel& l) {
  bool ok = photon_field_ok(l.p1, f & photon1) && photon_field_ok(l.p2, f & photon2) &&
            photon_field_ok(l.clone, f & clone) && (f & spin || l.spin == Spin::up);
  if (!ok) throw std::invalid_argument("label " + to_string(l) + " does not match the factor set");
}

inline void check_finite(Amplitude a) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw std::domain_error("non-finite amplitude");
}

inline BasisLabel merge(const BasisLabel& a, const BasisLabel& b, FactorSet fb) {
  BasisLabel out = a;
  if (fb & photon1) out.p1 = b.p1;
  if (fb & photon2) out.p2 = b.p2;
  if (fb & clone) out.clone = b.clone;
  if (fb & spin) out.spin = b.spin;
  return out;
}

}  // namespace detail

inline JointState JointState::from_entries(FactorSet factors, Entries entries, double weight) {
  std::erase_if(entries, [](const auto& kv) { return std::abs(kv.second) < prune_threshold; });
  for (const auto& [l, a] : entries) detail::check_finite(a);
  JointState s;
  s.factors_ = factors;
  s.entries_ = std::move(entries);
  return s.with_weight(weight);
}

inline JointState make_state(FactorSet factors,
                             const std::vector<std::pair<BasisLabel, Amplitude>>& assignments) {
  JointState::Entries entries;
  for (const auto& [l, a] : assignments) {
    detail::check_well_formed(factors, l);
    detail::check_finite(a);
    if (!entries.emplace(l, a).second) throw std::invalid_argument("duplicate label " + to_string(l));
  }
  return JointState::from_entries(factors, std::move(entries));
}

inline JointState JointState::release(Factor f) const {
  if (!has(f)) throw std::invalid_argument("factor not present");
  for (const auto& [l, a] : entries_) {
    const PhotonMode* m = f == photon1 ? &l.p1 : f == photon2 ? &l.p2 : f == clone ? &l.clone : nullptr;
    if (m == nullptr) throw std::invalid_argument("only photon factors can be released");
    if (m->pol != Pol::absent) throw std::invalid_argument("factor still populated in " + to_string(l));
  }
  return from_entries(static_cast<FactorSet>(factors_ & ~f), entries_, weight_);
}

// ---------------------------------------------------------------------------
// Mode selectors: which label fields a local map reads and writes.

template <class S>
concept ModeSelector = requires(const BasisLabel& l, BasisLabel& m, typename S::key_type k) {
  { S::factors } -> std::convertible_to<FactorSet>;
  { S::get(l) } -> std::same_as<typename S::key_type>;
  S::set(m, k);
  { to_string(k) } -> std::convertible_to<std::string>;
};

template <Factor F>
struct PhotonSel {
  using key_type = PhotonMode;
  static constexpr FactorSet factors = F;
  static PhotonMode get(const BasisLabel& l) {
    if constexpr (F == photon1) return l.p1;
    else if constexpr (F == photon2) return l.p2;
    else return l.clone;
  }
  static void set(BasisLabel& l, PhotonMode k) {
    if constexpr (F == photon1) l.p1 = k;
    else if constexpr (F == photon2) l.p2 = k;
    else l.clone = k;
  }
};

struct SpinSel {
  using key_type = Spin;
  static constexpr FactorSet factors = spin;
  static Spin get(const BasisLabel& l) { return l.spin; }
  static void set(BasisLabel& l, Spin s) { l.spin = s; }
};

template <class A, class B>
inline std::string to_string(const std::pair<A, B>& p) {
  return "(" + to_string(p.first) + "," + to_string(p.second) + ")";
}

template <ModeSelector A, ModeSelector B>
struct JointSel {
  using key_type = std::pair<typename A::key_type, typename B::key_type>;
  static constexpr FactorSet factors = A::factors | B::factors;
  static key_type get(const BasisLabel& l) { return {A::get(l), B::get(l)}; }
  static void set(BasisLabel& l, const key_type& k) {
    A::set(l, k.first);
    B::set(l, k.second);
  }
};

using Photon1 = PhotonSel<photon1>;
using Photon2 = PhotonSel<photon2>;
using Clone = PhotonSel<clone>;

template <class Key>
struct Term {
  Key out;
  Amplitude amp;
};

// Linear map on one or more tensor factors, given by its action on input keys.
// Need not be unitary.
template <class Key>
class ModeMap {
 public:
  using key_type = Key;
  struct Rule {
    Key in;
    std::vector<Term<Key>> out;
  };

  ModeMap() = default;
  ModeMap(std::initializer_list<Rule> rules) {
    for (const auto& r : rules) add(r.in, r.out);
  }

  ModeMap& add(const Key& in, std::vector<Term<Key>> out) {
    if (find(in) != nullptr) throw std::invalid_argument("duplicate map rule for " + to_string(in));
    rules_.push_back({in, std::move(out)});
    return *this;
  }

  const std::vector<Term<Key>>* find(const Key& in) const {
    for (const auto& r : rules_)
      if (r.in == in) return &r.out;
    return nullptr;
  }

  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

template <ModeSelector Sel>
JointState apply_mode_map(const JointState& state, const ModeMap<typename Sel::key_type>& map) {
  if ((state.factors() & Sel::factors) != Sel::factors)
    throw std::invalid_argument("state lacks the factors this map acts on");
  JointState::Entries out;
  for (const auto& [label, amp] : state.entries()) {
    const auto key = Sel::get(label);
    const auto* terms = map.find(key);
    if (terms == nullptr)
      throw std::invalid_argument("map does not cover input " + to_string(key) + " in " + to_string(label));
    for (const auto& t : *terms) {
      BasisLabel l = label;
      Sel::set(l, t.out);
      out[l] += amp * t.amp;
    }
  }
  return JointState::from_entries(state.factors(), std::move(out), state.global_weight());
}

inline JointState tensor(const JointState& a, const JointState& b) {
  if (a.factors() & b.factors()) throw std::invalid_argument("tensor factors overlap");
  JointState::Entries out;
  for (const auto& [la, xa] : a.entries())
    for (const auto& [lb, xb] : b.entries()) out[detail::merge(la, lb, b.factors())] += xa * xb;
  return JointState::from_entries(static_cast<FactorSet>(a.factors() | b.factors()), std::move(out),
                                  a.global_weight() * b.global_weight());
}

// Unrenormalized spin branch and its squared-norm weight (global_weight included).
inline std::pair<JointState, double> project_spin(const JointState& state, Spin branch) {
  if (!state.has(spin)) throw std::invalid_argument("state has no spin factor");
  JointState::Entries kept;
  for (const auto& [l, a] : state.entries())
    if (l.spin == branch) kept.emplace(l, a);
  auto out = JointState::from_entries(state.factors(), std::move(kept), state.global_weight());
  double w = out.squared_norm();
  return {std::move(out), w};
}

// <a|b>, conjugate-linear in a, including both global weights.
inline Amplitude inner_product(const JointState& a, const JointState& b) {
  if (a.factors() != b.factors()) throw std::invalid_argument("inner product of mismatched factor structures");
  Amplitude s{};
  for (const auto& [l, x] : a.entries()) s += std::conj(x) * b.amplitude(l);
  return s * a.global_weight() * b.global_weight();
}

// Single-factor constructors.

inline JointState photon_state(Factor which, Amplitude r, Amplitude l, Pol first = Pol::R, Pol second = Pol::L) {
  auto label = [&](Pol p) {
    BasisLabel b;
    if (which == photon1) b.p1 = {p};
    else if (which == photon2) b.p2 = {p};
    else if (which == clone) b.clone = {p};
    else throw std::invalid_argument("not a photon factor");
    return b;
  };
  std::vector<std::pair<BasisLabel, Amplitude>> v;
  if (std::abs(r) > 0) v.emplace_back(label(first), r);
  if (std::abs(l) > 0) v.emplace_back(label(second), l);
  return make_state(which, v);
}

inline JointState spin_state(Amplitude up, Amplitude down) {
  std::vector<std::pair<BasisLabel, Amplitude>> v;
  BasisLabel u, d;
  d.spin = Spin::down;
  if (std::abs(up) > 0) v.emplace_back(u, up);
  if (std::abs(down) > 0) v.emplace_back(d, down);
  return make_state(spin, v);
}

}  // namespace qdcnot
