#include "factorlab/modules.hpp"

#include <algorithm>
#include <sstream>

namespace factorlab {

bool mode_storage_before(const LocalMode& x, const LocalMode& y) {
  if (x.depth() != y.depth()) return x.depth() > y.depth();
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

namespace {

constexpr std::int64_t kDepthBias = 1 << 20;

// Only strictly negative modes are stored, so p = -depth is recoverable.
std::int64_t encode_mode(const LocalMode& m) {
  return ((kDepthBias - m.depth()) << 32) |
         (static_cast<std::int64_t>(m.a) << 16) | m.b;
}

LocalMode decode_mode(std::int64_t code) {
  LocalMode m;
  m.a = static_cast<unsigned>((code >> 16) & 0xFFFF);
  m.b = static_cast<unsigned>(code & 0xFFFF);
  m.p = -(kDepthBias - (code >> 32));
  return m;
}

}  // namespace

Monomial::Monomial(std::size_t slots, std::size_t gens) {
  data_.assign(2 + slots + gens, 0);
  data_[0] = static_cast<std::int64_t>(slots);
  data_[1] = static_cast<std::int64_t>(gens);
}

Monomial Monomial::from_parts(const std::vector<std::vector<LocalMode>>& ops,
                              const std::vector<unsigned>& gens) {
  Monomial m(ops.size(), gens.size());
  for (std::size_t s = ops.size(); s-- > 0;)
    for (std::size_t k = ops[s].size(); k-- > 0;) m.push_front(s, ops[s][k]);
  for (std::size_t i = 0; i < gens.size(); ++i) m.set_gen(i, gens[i]);
  return m;
}

std::size_t Monomial::slot_offset(std::size_t slot) const {
  std::size_t off = 2;
  for (std::size_t s = 0; s < slot; ++s)
    off += 1 + static_cast<std::size_t>(data_[off]);
  return off;
}

std::size_t Monomial::slot_size(std::size_t slot) const {
  return static_cast<std::size_t>(data_[slot_offset(slot)]);
}

LocalMode Monomial::mode(std::size_t slot, std::size_t k) const {
  return decode_mode(data_[slot_offset(slot) + 1 + k]);
}

void Monomial::push_front(std::size_t slot, const LocalMode& m) {
  std::size_t off = slot_offset(slot);
  data_[off] += 1;
  data_.insert(data_.begin() + static_cast<std::ptrdiff_t>(off) + 1,
               encode_mode(m));
}

void Monomial::pop_front(std::size_t slot) {
  std::size_t off = slot_offset(slot);
  data_[off] -= 1;
  data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(off) + 1);
}

unsigned Monomial::gen(std::size_t i) const {
  return static_cast<unsigned>(data_[data_.size() - gen_count() + i]);
}

void Monomial::set_gen(std::size_t i, unsigned g) {
  data_[data_.size() - gen_count() + i] = g;
}

int Monomial::slot_depth(std::size_t slot) const {
  std::size_t off = slot_offset(slot);
  int d = 0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(data_[off]); ++k)
    d += static_cast<int>(kDepthBias - (data_[off + 1 + k] >> 32));
  return d;
}

int Monomial::total_depth() const {
  int d = 0;
  for (std::size_t s = 0; s < slot_count(); ++s) d += slot_depth(s);
  return d;
}

std::string Monomial::to_string() const {
  std::ostringstream os;
  for (std::size_t s = 0; s < slot_count(); ++s) {
    if (slot_empty(s)) continue;
    os << "[s" << s << ":";
    for (std::size_t k = 0; k < slot_size(s); ++k) {
      LocalMode m = mode(s, k);
      os << " J(" << m.a << "," << m.b << ")x^" << m.p;
    }
    os << "]";
  }
  os << "|g=(";
  for (std::size_t i = 0; i < gen_count(); ++i) {
    if (i) os << ",";
    os << gen(i);
  }
  os << ")";
  return os.str();
}

void ModVector::add(const Monomial& m, const Cyc& c) {
  if (c.is_zero()) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

ModVector& ModVector::operator+=(const ModVector& rhs) {
  for (const auto& [m, c] : rhs.terms) add(m, c);
  return *this;
}

ModVector ModVector::scaled(const Cyc& c) const {
  ModVector out;
  if (c.is_zero()) return out;
  for (const auto& [m, v] : terms) out.add(m, v * c);
  return out;
}

bool ModVector::is_zero() const { return terms.empty(); }

int ModVector::max_slot_depth(std::size_t slot) const {
  int d = 0;
  for (const auto& [m, c] : terms)
    d = std::max(d, m.slot_depth(slot));
  return d;
}

int ModVector::max_total_depth() const {
  int d = 0;
  for (const auto& [m, c] : terms) d = std::max(d, m.total_depth());
  return d;
}

bool TensorSystem::slot_active(std::size_t slot) const {
  if (slot == 0) return weight_zero.has_value();
  if (slot == infinity_slot()) return weight_inf.has_value();
  return true;
}

Site TensorSystem::slot_site(std::size_t slot) const {
  if (slot == 0) return Site::zero();
  if (slot == infinity_slot()) return Site::infinity();
  return Site::marked(slot - 1);
}

std::size_t TensorSystem::generator_dim() const {
  std::size_t d = 1;
  for (const auto& r : reps) d *= r.dim;
  return d;
}

std::size_t TensorSystem::generator_index(const Monomial& m) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) idx = idx * reps[i].dim + m.gen(i);
  return idx;
}

Monomial TensorSystem::vacuum(const std::vector<unsigned>& gens) const {
  Monomial m(slot_count(), gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) m.set_gen(i, gens[i]);
  return m;
}

Monomial TensorSystem::vacuum_from_index(std::size_t flat) const {
  std::vector<unsigned> gens(reps.size(), 0);
  for (std::size_t i = reps.size(); i-- > 0;) {
    gens[i] = static_cast<unsigned>(flat % reps[i].dim);
    flat /= reps[i].dim;
  }
  return vacuum(gens);
}

namespace {

void check_mode(const TensorSystem& sys, std::size_t slot, const LocalMode& m) {
  const long n = sys.sites->n;
  if (!sys.slot_active(slot))
    throw std::logic_error("act_local: slot carries no module");
  if ((m.a == 0 && m.b == 0) || m.a >= sys.sites->n || m.b >= sys.sites->n)
    throw std::invalid_argument("act_local: bad J-basis label");
  if (slot == 0 && ((m.p - static_cast<long>(m.a)) % n + n) % n != 0)
    throw std::invalid_argument("act_local: mode at 0 violates p == a (mod N)");
  if (slot == sys.infinity_slot() &&
      ((m.p + static_cast<long>(m.a)) % n + n) % n != 0)
    throw std::invalid_argument(
        "act_local: mode at infinity violates p == -a (mod N)");
}

// [J_{ab} xi^p, J_{cd} xi^q] = (eps^{-bc} - eps^{-ad}) J_{a+c,b+d} xi^{p+q}
//                              (+ central term).
struct BracketParts {
  std::optional<LocalMode> mode;  // absent when the structure constant is 0
  Cyc mode_coeff;
  Cyc central;  // multiple of the level already folded in
};

BracketParts bracket(const TensorSystem& sys, std::size_t slot,
                     const LocalMode& x, const LocalMode& y) {
  const unsigned n = sys.sites->n;
  BracketParts out;
  Cyc sc = Cyc::eps_pow(n, -static_cast<long>(x.b) * y.a) -
           Cyc::eps_pow(n, -static_cast<long>(x.a) * y.b);
  unsigned a = (x.a + y.a) % n;
  unsigned b = (x.b + y.b) % n;
  if (!sc.is_zero()) {
    // a+c == 0 == b+d forces sc == 0, so the result is never J_{0,0}.
    out.mode = LocalMode{a, b, x.p + y.p};
    out.mode_coeff = sc;
  }
  if (x.p + y.p == 0 && a == 0 && b == 0) {
    // p (X|Y) delta_{p+q,0} k, with the extra 1/N at the fixed points;
    // (J_{ab}|J_{-a,-b}) = N eps^{ab}.
    bool fixed = (slot == 0 || slot == sys.infinity_slot());
    Cyc pairing = Cyc::eps_pow(n, -static_cast<long>(x.b) * y.a);
    Cyc weight = fixed ? Cyc(1) : Cyc(Rational(static_cast<long>(n)));
    out.central = Cyc(x.p) * pairing * weight * Cyc(sys.level);
  }
  return out;
}

ModVector apply_mode(const TensorSystem& sys, std::size_t slot,
                     const LocalMode& m, const Monomial& mono, const Cyc& c,
                     Fuel& fuel);

ModVector apply_mode_vec(const TensorSystem& sys, std::size_t slot,
                         const LocalMode& m, const ModVector& v, Fuel& fuel) {
  ModVector out;
  for (const auto& [mono, c] : v.terms)
    out += apply_mode(sys, slot, m, mono, c, fuel);
  return out;
}

ModVector apply_mode(const TensorSystem& sys, std::size_t slot,
                     const LocalMode& m, const Monomial& mono, const Cyc& c,
                     Fuel& fuel) {
  fuel.tick();
  ModVector out;
  if (c.is_zero()) return out;
  const bool empty = mono.slot_empty(slot);

  if (m.p < 0 && (empty || !mode_storage_before(mono.front(slot), m))) {
    Monomial next = mono;
    next.push_front(slot, m);
    fuel.check_depth(next.total_depth());
    out.add(next, c);
    return out;
  }

  if (empty) {
    if (m.p > 0) return out;  // annihilates highest-weight vectors and V
    // Zero mode on the generator.
    if (slot == 0 || slot == sys.infinity_slot()) {
      // Only a == 0 survives the twisted grading here: H_b 1 = lambda(H_b) 1.
      const Weight& w = (slot == 0) ? *sys.weight_zero : *sys.weight_inf;
      out.add(mono, c * w.values[m.b - 1]);
      return out;
    }
    const FinRep& rep = sys.reps[slot - 1];
    const CMat& mat = rep.mat(m.a, m.b);
    unsigned g = mono.gen(slot - 1);
    for (std::size_t j = 0; j < rep.dim; ++j) {
      const Cyc& entry = mat.at(j, g);
      if (entry.is_zero()) continue;
      Monomial next = mono;
      next.set_gen(slot - 1, static_cast<unsigned>(j));
      out.add(next, c * entry);
    }
    return out;
  }

  // m X w = X (m w) + [m, X] w.
  LocalMode x = mono.front(slot);
  Monomial rest = mono;
  rest.pop_front(slot);

  ModVector shifted = apply_mode(sys, slot, m, rest, c, fuel);
  out += apply_mode_vec(sys, slot, x, shifted, fuel);

  BracketParts br = bracket(sys, slot, m, x);
  if (br.mode)
    out += apply_mode(sys, slot, *br.mode, rest, c * br.mode_coeff, fuel);
  if (!br.central.is_zero()) out.add(rest, c * br.central);
  return out;
}

}  // namespace

ModVector act_local(const TensorSystem& sys, std::size_t slot,
                    const LocalMode& mode, const ModVector& v, Fuel& fuel) {
  check_mode(sys, slot, mode);
  return apply_mode_vec(sys, slot, mode, v, fuel);
}

ModVector act_section(const TensorSystem& sys, const Section& f,
                      const ModVector& v, Fuel& fuel) {
  ModVector out;
  if (v.is_zero() || f.is_zero()) return out;
  // Without modules at the fixed points the acting algebra is gout^trig,
  // so the gluing condition is required; with them any equivariant section
  // with poles on the configured sites qualifies.
  bool orb_context = sys.weight_zero || sys.weight_inf;
  if (!f.check_membership(orb_context ? Section::MemberClass::Orb
                                      : Section::MemberClass::Trig))
    throw std::invalid_argument(
        "act_section: section is not a member of the acting algebra");
  const unsigned n = sys.sites->n;
  for (std::size_t slot = 0; slot < sys.slot_count(); ++slot) {
    if (!sys.slot_active(slot)) continue;
    // Smoothness: modes above the slot depth annihilate every stored
    // monomial, so the jet is truncated exactly there.
    int order = v.max_slot_depth(slot);
    Jet jet = f.expand_at(sys.slot_site(slot), order);
    for (const auto& [p, mat] : jet.coeff) {
      if (mat.is_zero()) continue;
      for (const auto& [ab, coeff] : j_coefficients(n, mat)) {
        LocalMode m{ab.first, ab.second, p};
        out += act_local(sys, slot, m, v.scaled(coeff), fuel);
      }
    }
  }
  return out;
}

ModVector right_h(const TensorSystem& sys, bool at_zero,
                  const std::vector<Cyc>& coeffs, const ModVector& v) {
  const std::optional<Weight>& w = at_zero ? sys.weight_zero : sys.weight_inf;
  if (!w)
    throw std::invalid_argument("right_h: no Verma module at that site");
  if (coeffs.size() != w->values.size())
    throw std::invalid_argument("right_h: Cartan coefficient length mismatch");
  Cyc scalar;
  for (std::size_t b = 0; b < coeffs.size(); ++b)
    scalar += coeffs[b] * w->values[b];
  return v.scaled(scalar);
}

ModVector rho_1_beta(const TensorSystem& sys, const std::vector<Cyc>& coeffs,
                     const ModVector& v) {
  const unsigned n = sys.sites->n;
  // Ad(beta) H_b = eps^b H_b.
  std::vector<Cyc> twisted(coeffs.size());
  for (std::size_t b = 0; b < coeffs.size(); ++b)
    twisted[b] = coeffs[b] * Cyc::eps_pow(n, static_cast<long>(b) + 1);
  ModVector out = right_h(sys, true, coeffs, v);
  out += right_h(sys, false, twisted, v);
  return out;
}

}  // namespace factorlab
