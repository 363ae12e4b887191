#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factorlab/sections.hpp"

namespace factorlab {

struct FuelExhausted : std::runtime_error {
  explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Rewriting budget. Every straightening step ticks; monomials may never
// exceed the depth cap. Both overflows throw instead of truncating.
struct Fuel {
  long limit = 10'000'000;
  int depth_cap = 6;
  long ticks = 0;

  void tick() {
    if (++ticks > limit) throw FuelExhausted("fuel: rewriting step budget exhausted");
  }
  void check_depth(int depth) const {
    if (depth > depth_cap)
      throw FuelExhausted("fuel: monomial depth exceeds truncation cap");
  }
};

// J_{a,b} tensor xi^p in the local coordinate of one slot. At the fixed
// points the twisted grading forces p == a (mod N) at 0 and p == -a (mod N)
// at infinity (modes there live in u = 1/t).
struct LocalMode {
  unsigned a = 0, b = 0;
  long p = 0;

  long depth() const { return p < 0 ? -p : 0; }
  bool operator==(const LocalMode& rhs) const {
    return a == rhs.a && b == rhs.b && p == rhs.p;
  }
};

// Storage order inside a slot: depth-major, then (a,b) lexicographic.
bool mode_storage_before(const LocalMode& x, const LocalMode& y);

// PBW monomial: per-slot lists of strictly negative modes in normal order,
// applied to highest-weight vectors at the Verma slots and to a basis
// vector of V_i at each marked slot. Slot 0 is the point 0, slots 1..L the
// marked points, slot L+1 is infinity.
//
// Stored as one flat vector of packed codes so that map keys compare and
// copy cheaply: [S, G, k_0, codes..., k_1, codes..., ..., gens...]. Mode
// codes order numerically the same way the storage order sorts.
class Monomial {
 public:
  Monomial() = default;
  Monomial(std::size_t slots, std::size_t gens);
  static Monomial from_parts(const std::vector<std::vector<LocalMode>>& ops,
                             const std::vector<unsigned>& gens);

  std::size_t slot_count() const { return data_.empty() ? 0 : static_cast<std::size_t>(data_[0]); }
  std::size_t gen_count() const { return data_.empty() ? 0 : static_cast<std::size_t>(data_[1]); }

  std::size_t slot_size(std::size_t slot) const;
  LocalMode mode(std::size_t slot, std::size_t k) const;
  LocalMode front(std::size_t slot) const { return mode(slot, 0); }
  bool slot_empty(std::size_t slot) const { return slot_size(slot) == 0; }
  void push_front(std::size_t slot, const LocalMode& m);
  void pop_front(std::size_t slot);

  unsigned gen(std::size_t i) const;
  void set_gen(std::size_t i, unsigned g);

  int slot_depth(std::size_t slot) const;
  int total_depth() const;

  bool operator<(const Monomial& rhs) const { return data_ < rhs.data_; }
  bool operator==(const Monomial& rhs) const { return data_ == rhs.data_; }
  std::string to_string() const;

 private:
  std::size_t slot_offset(std::size_t slot) const;  // index of the count cell
  std::vector<std::int64_t> data_;
};

// Finite Q(eps)-linear combination of normal monomials.
struct ModVector {
  std::map<Monomial, Cyc> terms;

  void add(const Monomial& m, const Cyc& c);
  ModVector& operator+=(const ModVector& rhs);
  ModVector scaled(const Cyc& c) const;
  bool is_zero() const;
  int max_slot_depth(std::size_t slot) const;
  int max_total_depth() const;
};

// Module placements for the tensor product over {0} u D u {inf}: Weyl
// modules M(V_i) at the marked points, optional Verma modules at the fixed
// points (weights here are the already-twisted highest weights), one level
// for everything.
struct TensorSystem {
  std::shared_ptr<const SiteSet> sites;
  Rational level = 1;
  std::vector<FinRep> reps;
  std::optional<Weight> weight_zero;
  std::optional<Weight> weight_inf;

  std::size_t slot_count() const { return reps.size() + 2; }
  std::size_t infinity_slot() const { return reps.size() + 1; }
  bool slot_active(std::size_t slot) const;
  Site slot_site(std::size_t slot) const;
  // Dimension of the depth-zero slice V_1 (x) ... (x) V_L.
  std::size_t generator_dim() const;
  // Mixed-radix index of a depth-zero monomial's generator tuple.
  std::size_t generator_index(const Monomial& m) const;
  Monomial vacuum(const std::vector<unsigned>& gens) const;
  Monomial vacuum_from_index(std::size_t flat) const;
};

// Action of a single centrally extended mode on a vector, straightened to
// normal form. Central pairings carry tr(XY) at the marked points and the
// 1/N-normalised value at 0 and infinity.
ModVector act_local(const TensorSystem& sys, std::size_t slot,
                    const LocalMode& mode, const ModVector& v, Fuel& fuel);

// Action of a global section: sum over the active slots of the Laurent
// expansion at that site applied to the corresponding tensor factor. Jet
// truncations come from the smoothness bound of v (slot depth), so the sum
// is finite and exact. No central term appears: the cocycle vanishes on
// g_out.
ModVector act_section(const TensorSystem& sys, const Section& f,
                      const ModVector& v, Fuel& fuel);

// Right action of the Cartan element sum_b coeffs[b-1] H_b on the Verma
// factor at 0 or at infinity. For x 1_lambda the class [x H] equals
// lambda(H) [x]: x (H - lambda(H)) lies in the defining left ideal, so the
// right action is the scalar lambda(H) on the whole module.
ModVector right_h(const TensorSystem& sys, bool at_zero,
                  const std::vector<Cyc>& coeffs, const ModVector& v);

// rho_{1,beta}(H): v0 H (x) v (x) vinf + v0 (x) v (x) vinf Ad(beta)H.
ModVector rho_1_beta(const TensorSystem& sys, const std::vector<Cyc>& coeffs,
                     const ModVector& v);

// Descriptor types mirroring the module zoo; TensorSystem assembles them.
struct WeylModule {
  FinRep v;
  Rational level;
};
struct VermaModule {
  Site site;
  Weight highest_weight;
  Rational level;
};
struct UniversalVermaQuot {
  Site site;
  std::vector<Weight> weight_set;  // untwisted weights; components get tilde'd
  Rational level;
};

}  // namespace factorlab
