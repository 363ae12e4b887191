#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "factorlab/modules.hpp"

namespace factorlab {

// Audit trail of one reduction run: which section eliminated which mode,
// with the strictly decreasing depth measure as termination witness.
struct ReductionStep {
  std::size_t slot = 0;
  LocalMode mode;
  int depth_before = 0;
  int depth_after = 0;
  std::string section;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  long macro_steps = 0;
  int max_depth_seen = 0;
  std::uint64_t digest() const;  // FNV-1a over the step log
};

// All normal monomials of the system with total depth <= depth, every
// generator index attached. Mode pools honour the twisted grading at the
// fixed points.
std::vector<Monomial> monomial_window(const TensorSystem& sys, int depth);

// Constructive rewriting to the depth-zero slice. Every monomial with a
// negative mode is replaced through the global section matching its deepest
// mode (trig basis elements at the marked points, monomial sections at the
// fixed points); each macro-step strictly lowers the total depth, and
// results are memoised per monomial.
class Reducer {
 public:
  enum class Target { Trig, Orb };
  // Site order used to break depth ties: forward is 0 < Q_1 < ... < inf,
  // reverse walks the sites the other way. Any admissible order yields the
  // same coinvariant dimensions (not the same representatives).
  enum class TieOrder { Forward, Reverse };

  Reducer(const TensorSystem& sys, Target target,
          TieOrder ties = TieOrder::Forward);

  // Representative with v - result in gout * (tensor product), expressed in
  // depth-zero monomials. Idempotent on the depth-zero slice.
  ModVector reduce(const ModVector& v, Fuel& fuel,
                   ReductionTrace* trace = nullptr);

  // Coordinates of a depth-zero vector in the generator basis.
  std::vector<Cyc> coordinates(const ModVector& v) const;

  const TensorSystem& system() const { return sys_; }

 private:
  ModVector reduce_monomial(const Monomial& m, Fuel& fuel,
                            ReductionTrace* trace);
  // Slot-wise mode lists of a replacement section, expanded once to the
  // fuel depth cap and reused across macro-steps.
  const std::vector<std::vector<std::pair<LocalMode, Cyc>>>& section_modes(
      const std::string& key, const Section& f, int order);

  TensorSystem sys_;
  Target target_;
  TieOrder ties_;
  TrigReplacer replacer_;
  std::map<Monomial, ModVector> memo_;
  std::map<std::string, std::vector<std::vector<std::pair<LocalMode, Cyc>>>>
      jet_cache_;
  int jet_cache_order_ = -1;
};

struct TrigResult {
  std::size_t dim = 0;             // dim CC_trig
  std::size_t generator_dim = 0;   // dim V
  std::size_t relation_rank = 0;   // rank of the reduced relation span in V
  int depth = 0;                   // relation window
  long fuel_ticks = 0;
  long macro_steps = 0;
  std::uint64_t trace_digest = 0;
  // Coordinates (in V) of representatives spanning the quotient.
  std::vector<std::size_t> basis_coordinates;
};

// dim CC_trig(M(V)) by Lemma-style rewriting: reduce every windowed
// relation f * w (f in the trig section family of pole order <= depth, w a
// normal monomial with depth(w) + ord(f) <= depth) to V and eliminate. The
// expected outcome is relation rank 0 and dim = dim V.
TrigResult cc_trig(std::shared_ptr<const SiteSet> sites, const Rational& level,
                   const std::vector<FinRep>& reps, int depth,
                   long fuel_limit = 50'000'000,
                   Reducer::TieOrder ties = Reducer::TieOrder::Forward);

struct OrbComponentResult {
  std::size_t dim = 0;           // component of the factorisation (with rho)
  std::size_t dim_cc_orb = 0;    // CC_orb itself (before the residual rho)
  std::size_t generator_dim = 0;
  int depth = 0;
  long fuel_ticks = 0;
  long macro_steps = 0;
  std::uint64_t trace_digest = 0;
};

// The (lambda, mu) block: Verma modules with weights tilde(lambda) at 0 and
// tilde'(mu) at infinity around the Weyl modules. dim_cc_orb quotients by
// the orb section relations only; dim additionally quotients by the image
// of the residual right action rho_{1,beta}(h), which is the charge
// conservation constraint killing every off-diagonal block.
OrbComponentResult cc_orb_component(std::shared_ptr<const SiteSet> sites,
                                    const Rational& level,
                                    const std::vector<FinRep>& reps,
                                    const Weight& lambda, const Weight& mu,
                                    int depth, long fuel_limit = 50'000'000,
                                    Reducer::TieOrder ties = Reducer::TieOrder::Forward);

struct CoinvComponent {
  Weight lambda;
  std::size_t dim = 0;
  std::size_t multiplicity = 0;
};

struct CoinvReport {
  std::size_t dim_cc_trig = 0;
  std::size_t dim_cb_trig = 0;  // finite-dimensional duality: equals CC
  std::vector<CoinvComponent> components;
  bool verdict = false;
  int depth = 0;
  long fuel_ticks = 0;
  long macro_steps = 0;
  std::uint64_t trace_digest = 0;
};

// Theorem-level comparison: CC_trig(M(V)) against the diagonal orbifold
// components over wt(V). Verdict: the component dimensions equal the weight
// multiplicities and sum to dim CC_trig.
CoinvReport factorization_report(std::shared_ptr<const SiteSet> sites,
                                 const Rational& level,
                                 const std::vector<FinRep>& reps, int depth,
                                 long fuel_limit = 200'000'000);

struct SmokeBlock {
  Weight lambda, mu;
  std::size_t dim_cc_orb = 0;
  std::size_t dim_after_rho = 0;
};

struct SmokeResult {
  bool verdict = false;
  std::size_t dim_cc_trig = 0;
  std::size_t diagonal_sum = 0;
  bool off_diagonal_vanishes = false;
  bool diagonal_untouched_by_rho = false;
  bool tilde_injective = false;
  std::vector<SmokeBlock> blocks;
};

// Truncated check of the general factorisation: the universal Verma modules
// enter through their finite quotients (direct sums of Vermas over the
// weight set, Chinese-remainder style), the rho quotient must kill exactly
// the off-diagonal blocks, and the diagonal must rebuild CC_trig. The
// optional pairing shift replaces the weight at infinity by the partner of
// a different weight (negative control: the verdict must turn false).
SmokeResult general_factorization_smoke(std::shared_ptr<const SiteSet> sites,
                                        const Rational& level,
                                        const std::vector<FinRep>& reps,
                                        int depth,
                                        long fuel_limit = 200'000'000,
                                        std::size_t pairing_shift = 0);

}  // namespace factorlab
