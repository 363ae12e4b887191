#include "factorlab/coinvariants.hpp"

#include <algorithm>
#include <sstream>

namespace factorlab {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::uint64_t ReductionTrace::digest() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& st : steps) {
    std::ostringstream os;
    os << st.slot << ":" << st.mode.a << "," << st.mode.b << "," << st.mode.p
       << ":" << st.depth_before << ">" << st.depth_after << ":" << st.section;
    h = fnv1a(h, os.str());
  }
  return h;
}

Reducer::Reducer(const TensorSystem& sys, Target target, TieOrder ties)
    : sys_(sys), target_(target), ties_(ties), replacer_(sys.sites) {
  if (target_ == Target::Trig && (sys_.weight_zero || sys_.weight_inf))
    throw std::invalid_argument(
        "Reducer: trig reduction expects modules at the marked points only");
}

ModVector Reducer::reduce(const ModVector& v, Fuel& fuel,
                          ReductionTrace* trace) {
  ModVector out;
  for (const auto& [m, c] : v.terms)
    out += reduce_monomial(m, fuel, trace).scaled(c);
  return out;
}

std::vector<Cyc> Reducer::coordinates(const ModVector& v) const {
  std::vector<Cyc> x(sys_.generator_dim(), Cyc());
  for (const auto& [m, c] : v.terms) {
    if (m.total_depth() != 0)
      throw std::logic_error("coordinates: vector is not depth-zero");
    x[sys_.generator_index(m)] += c;
  }
  return x;
}

const std::vector<std::vector<std::pair<LocalMode, Cyc>>>&
Reducer::section_modes(const std::string& key, const Section& f, int order) {
  if (order > jet_cache_order_) {
    jet_cache_.clear();  // deeper vectors need longer jets; re-expand
    jet_cache_order_ = order;
  }
  auto it = jet_cache_.find(key);
  if (it != jet_cache_.end()) return it->second;
  std::vector<std::vector<std::pair<LocalMode, Cyc>>> modes(sys_.slot_count());
  const unsigned n = sys_.sites->n;
  for (std::size_t slot = 0; slot < sys_.slot_count(); ++slot) {
    if (!sys_.slot_active(slot)) continue;
    Jet jet = f.expand_at(sys_.slot_site(slot), jet_cache_order_);
    for (const auto& [p, mat] : jet.coeff)
      for (const auto& [ab, c] : j_coefficients(n, mat))
        modes[slot].push_back({LocalMode{ab.first, ab.second, p}, c});
  }
  return jet_cache_.emplace(key, std::move(modes)).first->second;
}

ModVector Reducer::reduce_monomial(const Monomial& mono, Fuel& fuel,
                                   ReductionTrace* trace) {
  const int depth = mono.total_depth();
  if (depth == 0) {
    ModVector out;
    out.add(mono, Cyc(1));
    return out;
  }
  auto hit = memo_.find(mono);
  if (hit != memo_.end()) return hit->second;

  // Elimination order: deepest leading mode first, ties by site order
  // 0 < Q_1 < ... < Q_L < infinity (or reversed, for the order-independence
  // check).
  std::size_t slot = 0;
  bool found = false;
  long best_depth = -1;
  for (std::size_t k = 0; k < sys_.slot_count(); ++k) {
    std::size_t s = (ties_ == TieOrder::Forward) ? k : sys_.slot_count() - 1 - k;
    if (mono.slot_empty(s)) continue;
    long d = mono.front(s).depth();
    if (d > best_depth) {
      best_depth = d;
      slot = s;
      found = true;
    }
  }
  if (!found) throw std::logic_error("reduce: positive depth without modes");

  LocalMode x = mono.front(slot);
  Monomial rest = mono;
  rest.pop_front(slot);

  // The matching global section: its germ at this slot has principal part
  // exactly the eliminated mode, so  x*rest = section*rest - (tails)*rest
  // with every tail term of strictly smaller total depth.
  Section f(sys_.sites);
  std::string label;
  const long n = sys_.sites->n;
  if (slot >= 1 && slot <= sys_.reps.size()) {
    f = replacer_.principal_section(x.a, x.b, slot - 1,
                                    static_cast<int>(-x.p));
    label = "trig(" + std::to_string(x.a) + "," + std::to_string(x.b) + ";Q" +
            std::to_string(slot) + ";" + std::to_string(-x.p) + ")";
  } else {
    long exponent = (slot == 0) ? x.p : -x.p;  // t-exponent of the monomial
    long m = (exponent - static_cast<long>(x.a)) / n;
    f = Section::orb_monomial(sys_.sites, x.a, x.b, m);
    label = "orb(" + std::to_string(x.a) + "," + std::to_string(x.b) + ";t^" +
            std::to_string(exponent) + ")";
    if (target_ == Target::Trig)
      throw std::logic_error("reduce: fixed-point mode in a trig reduction");
  }

  ModVector rest_vec;
  rest_vec.add(rest, Cyc(1));
  const auto& modes = section_modes(label, f, fuel.depth_cap);
  ModVector image;
  for (std::size_t s = 0; s < sys_.slot_count(); ++s) {
    int sd = rest.slot_depth(s);
    for (const auto& [m, c] : modes[s]) {
      if (m.p > sd) continue;
      image += act_local(sys_, s, m, rest_vec, fuel).scaled(c);
    }
  }
  // image = x*rest + tails; remove the leading term and flip sign.
  image.add(mono, Cyc(-1));
  ModVector out;
  for (const auto& [m2, c2] : image.terms) {
    if (m2.total_depth() >= depth)
      throw std::logic_error("reduce: macro-step failed to lower the depth");
    out += reduce_monomial(m2, fuel, trace).scaled(-c2);
  }
  if (trace) {
    trace->steps.push_back({slot, x, depth, rest.total_depth(), label});
    trace->macro_steps++;
    trace->max_depth_seen = std::max(trace->max_depth_seen, depth);
  }
  return memo_.emplace(mono, std::move(out)).first->second;
}

namespace {

// All normal monomials of the system with total depth <= depth. Mode pools
// honour the twisted grading at the fixed points.
std::vector<LocalMode> slot_mode_pool(const TensorSystem& sys,
                                      std::size_t slot, int depth) {
  std::vector<LocalMode> pool;
  const unsigned n = sys.sites->n;
  for (int d = 1; d <= depth; ++d) {
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b) {
        if (a == 0 && b == 0) continue;
        // Twisted grading: t-modes at 0 satisfy p == a (mod N), u-modes at
        // infinity satisfy p == -a (mod N); with p = -d these become
        // a + d == 0 resp. a - d == 0 mod N.
        if (slot == 0 && (a + d) % n != 0) continue;
        if (slot == sys.infinity_slot() &&
            ((static_cast<long>(d) - a) % n + n) % n != 0)
          continue;
        pool.push_back({a, b, -d});
      }
  }
  std::sort(pool.begin(), pool.end(), mode_storage_before);
  return pool;
}

void enumerate_slot_lists(const std::vector<LocalMode>& pool, std::size_t from,
                          int budget, std::vector<LocalMode>& current,
                          std::vector<std::vector<LocalMode>>& out) {
  out.push_back(current);
  for (std::size_t k = from; k < pool.size(); ++k) {
    int d = static_cast<int>(pool[k].depth());
    if (d > budget) continue;
    current.push_back(pool[k]);
    enumerate_slot_lists(pool, k, budget - d, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Monomial> monomial_window(const TensorSystem& sys, int depth) {
  std::vector<std::vector<std::vector<LocalMode>>> per_slot(sys.slot_count());
  for (std::size_t s = 0; s < sys.slot_count(); ++s) {
    if (!sys.slot_active(s)) {
      per_slot[s] = {{}};
      continue;
    }
    std::vector<LocalMode> pool = slot_mode_pool(sys, s, depth);
    std::vector<LocalMode> cur;
    enumerate_slot_lists(pool, 0, depth, cur, per_slot[s]);
  }

  std::vector<Monomial> out;
  std::vector<std::size_t> pick(sys.slot_count(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t s, int used) {
    if (s == sys.slot_count()) {
      std::vector<std::vector<LocalMode>> ops(sys.slot_count());
      for (std::size_t k = 0; k < sys.slot_count(); ++k)
        ops[k] = per_slot[k][pick[k]];
      for (std::size_t flat = 0; flat < sys.generator_dim(); ++flat) {
        Monomial base = sys.vacuum_from_index(flat);
        std::vector<unsigned> gens(base.gen_count());
        for (std::size_t i = 0; i < gens.size(); ++i) gens[i] = base.gen(i);
        out.push_back(Monomial::from_parts(ops, gens));
      }
      return;
    }
    for (std::size_t k = 0; k < per_slot[s].size(); ++k) {
      int d = 0;
      for (const auto& md : per_slot[s][k]) d += static_cast<int>(md.depth());
      if (used + d > depth) continue;
      pick[s] = k;
      rec(s + 1, used + d);
    }
  };
  rec(0, 0);
  return out;
}

namespace {

// Shared relation sweep: applies every section of the family to every
// window monomial, reduces, and eliminates over the generator slice.
struct SweepOutcome {
  RowSpan span;
  long fuel_ticks = 0;
  long macro_steps = 0;
  std::uint64_t digest = 0;
};

SweepOutcome relation_sweep(Reducer& red, int depth, long fuel_limit,
                            bool include_fixed_points) {
  const TensorSystem& sys = red.system();
  SweepOutcome out{RowSpan(sys.generator_dim())};
  Fuel fuel;
  fuel.limit = fuel_limit;
  fuel.depth_cap = depth;
  ReductionTrace trace;

  struct Fam {
    Section section;
    int order;  // worst pole order across sites
    std::string label;
  };
  std::vector<Fam> family;
  const unsigned n = sys.sites->n;
  for (std::size_t i = 0; i < sys.sites->count(); ++i)
    for (unsigned a = 0; a < n; ++a)
      for (unsigned b = 0; b < n; ++b) {
        if (a == 0 && b == 0) continue;
        for (int ord = 1; ord <= std::min(depth, sys.sites->pole_cap); ++ord)
          family.push_back({Section::trig_basis_element(sys.sites, a, b, i, ord),
                            ord, "T"});
      }
  if (include_fixed_points) {
    for (long e = -depth; e <= depth; ++e)
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          if (((e - static_cast<long>(a)) % static_cast<long>(n) +
               static_cast<long>(n)) %
                  static_cast<long>(n) !=
              0)
            continue;
          long m = (e - static_cast<long>(a)) / static_cast<long>(n);
          int ord = static_cast<int>(e < 0 ? -e : e);
          family.push_back({Section::orb_monomial(sys.sites, a, b, m),
                            std::max(ord, 1), "M"});
        }
  }

  // Single mode applications recur across the family (every pole order of
  // a trig element shares its Taylor modes), so they are straightened once
  // and memoised per (slot, mode, monomial).
  std::map<std::tuple<std::size_t, long, long, const Monomial*>, ModVector>
      act_memo;
  auto act_cached = [&](std::size_t slot, const LocalMode& m,
                        const Monomial& mono) -> const ModVector& {
    auto key = std::make_tuple(slot, static_cast<long>(m.p),
                               static_cast<long>(m.a * 64 + m.b), &mono);
    auto it = act_memo.find(key);
    if (it == act_memo.end()) {
      ModVector v;
      v.add(mono, Cyc(1));
      it = act_memo.emplace(key, act_local(sys, slot, m, v, fuel)).first;
    }
    return it->second;
  };

  std::map<int, std::vector<Monomial>> windows;
  const unsigned nn = sys.sites->n;
  for (const auto& fam : family) {
    int wdepth = depth - fam.order;
    if (wdepth < 0) continue;
    auto wit = windows.find(wdepth);
    if (wit == windows.end())
      wit = windows.emplace(wdepth, monomial_window(sys, wdepth)).first;
    // Expand the section once per slot at the window-wide order; per
    // monomial only the modes below its smoothness bound act.
    std::vector<std::vector<std::pair<LocalMode, Cyc>>> modes(sys.slot_count());
    for (std::size_t slot = 0; slot < sys.slot_count(); ++slot) {
      if (!sys.slot_active(slot)) continue;
      Jet jet = fam.section.expand_at(sys.slot_site(slot), wdepth);
      for (const auto& [p, mat] : jet.coeff)
        for (const auto& [ab, c] : j_coefficients(nn, mat))
          modes[slot].push_back({LocalMode{ab.first, ab.second, p}, c});
    }
    for (const auto& mono : wit->second) {
      ModVector rel;
      for (std::size_t slot = 0; slot < sys.slot_count(); ++slot) {
        int sd = mono.slot_depth(slot);
        for (const auto& [m, c] : modes[slot]) {
          if (m.p > sd) continue;
          rel += act_cached(slot, m, mono).scaled(c);
        }
      }
      ModVector rep = red.reduce(rel, fuel, &trace);
      if (!rep.is_zero()) out.span.add(red.coordinates(rep));
    }
  }
  out.fuel_ticks = fuel.ticks;
  out.macro_steps = trace.macro_steps;
  out.digest = trace.digest();
  return out;
}

}  // namespace

TrigResult cc_trig(std::shared_ptr<const SiteSet> sites, const Rational& level,
                   const std::vector<FinRep>& reps, int depth,
                   long fuel_limit, Reducer::TieOrder ties) {
  TensorSystem sys{sites, level, reps, std::nullopt, std::nullopt};
  Reducer red(sys, Reducer::Target::Trig, ties);
  SweepOutcome sweep = relation_sweep(red, depth, fuel_limit, false);

  TrigResult out;
  out.generator_dim = sys.generator_dim();
  out.relation_rank = sweep.span.rank();
  out.dim = out.generator_dim - out.relation_rank;
  out.depth = depth;
  out.fuel_ticks = sweep.fuel_ticks;
  out.macro_steps = sweep.macro_steps;
  out.trace_digest = sweep.digest;
  out.basis_coordinates = sweep.span.free_coordinates();
  return out;
}

OrbComponentResult cc_orb_component(std::shared_ptr<const SiteSet> sites,
                                    const Rational& level,
                                    const std::vector<FinRep>& reps,
                                    const Weight& lambda, const Weight& mu,
                                    int depth, long fuel_limit,
                                    Reducer::TieOrder ties) {
  const unsigned n = sites->n;
  auto [lt, ltp] = tilde_weights(n, lambda);
  auto [mt, mtp] = tilde_weights(n, mu);
  (void)ltp;
  (void)mt;
  TensorSystem sys{sites, level, reps, lt, mtp};
  Reducer red(sys, Reducer::Target::Orb, ties);
  SweepOutcome sweep = relation_sweep(red, depth, fuel_limit, true);

  OrbComponentResult out;
  out.generator_dim = sys.generator_dim();
  out.dim_cc_orb = out.generator_dim - sweep.span.rank();
  out.depth = depth;

  // Residual right h-action rho_{1,beta}: scalar on the whole block, so its
  // image is spanned by the scaled generator slice.
  RowSpan with_rho = sweep.span;
  for (unsigned b = 1; b < n; ++b) {
    std::vector<Cyc> coeffs(n - 1, Cyc());
    coeffs[b - 1] = Cyc(1);
    for (std::size_t flat = 0; flat < sys.generator_dim(); ++flat) {
      ModVector v;
      v.add(sys.vacuum_from_index(flat), Cyc(1));
      ModVector img = rho_1_beta(sys, coeffs, v);
      if (!img.is_zero()) with_rho.add(red.coordinates(img));
    }
  }
  out.dim = out.generator_dim - with_rho.rank();
  out.fuel_ticks = sweep.fuel_ticks;
  out.macro_steps = sweep.macro_steps;
  out.trace_digest = sweep.digest;
  return out;
}

namespace {

FinRep total_rep(const std::vector<FinRep>& reps) {
  FinRep v = reps.front();
  for (std::size_t i = 1; i < reps.size(); ++i) v = FinRep::tensor(v, reps[i]);
  return v;
}

}  // namespace

CoinvReport factorization_report(std::shared_ptr<const SiteSet> sites,
                                 const Rational& level,
                                 const std::vector<FinRep>& reps, int depth,
                                 long fuel_limit) {
  CoinvReport report;
  report.depth = depth;

  TrigResult trig = cc_trig(sites, level, reps, depth, fuel_limit);
  report.dim_cc_trig = trig.dim;
  report.dim_cb_trig = trig.dim;
  report.fuel_ticks += trig.fuel_ticks;
  report.macro_steps += trig.macro_steps;
  std::uint64_t digest = trig.trace_digest;

  auto spaces = weight_decompose(total_rep(reps));
  std::size_t total = 0;
  bool multiplicities_match = true;
  for (const auto& ws : spaces) {
    OrbComponentResult comp =
        cc_orb_component(sites, level, reps, ws.weight, ws.weight, depth,
                         fuel_limit);
    CoinvComponent entry;
    entry.lambda = ws.weight;
    entry.dim = comp.dim;
    entry.multiplicity = ws.multiplicity;
    total += comp.dim;
    if (comp.dim != ws.multiplicity) multiplicities_match = false;
    report.fuel_ticks += comp.fuel_ticks;
    report.macro_steps += comp.macro_steps;
    digest = fnv1a(digest, std::to_string(comp.trace_digest));
    report.components.push_back(std::move(entry));
  }
  report.trace_digest = digest;
  report.verdict = (total == report.dim_cc_trig) && multiplicities_match;
  return report;
}

SmokeResult general_factorization_smoke(std::shared_ptr<const SiteSet> sites,
                                        const Rational& level,
                                        const std::vector<FinRep>& reps,
                                        int depth, long fuel_limit,
                                        std::size_t pairing_shift) {
  SmokeResult out;
  TrigResult trig = cc_trig(sites, level, reps, depth, fuel_limit);
  out.dim_cc_trig = trig.dim;

  auto spaces = weight_decompose(total_rep(reps));
  const std::size_t count = spaces.size();
  const unsigned n = sites->n;

  // The universal Verma modules enter through their finite quotients: one
  // Verma component per weight of V at each fixed point (Chinese remainder
  // splitting).
  UniversalVermaQuot quot_zero{Site::zero(), {}, level};
  UniversalVermaQuot quot_inf{Site::infinity(), {}, level};
  for (const auto& ws : spaces) {
    quot_zero.weight_set.push_back(ws.weight);
    quot_inf.weight_set.push_back(ws.weight);
  }

  // Chinese-remainder side condition: lambda -> tilde(lambda) (and tilde')
  // stays injective on the weight set, so the finite quotient splits.
  out.tilde_injective = true;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      auto [ti, tip] = tilde_weights(n, spaces[i].weight);
      auto [tj, tjp] = tilde_weights(n, spaces[j].weight);
      if (ti == tj || tip == tjp) out.tilde_injective = false;
    }

  out.off_diagonal_vanishes = true;
  out.diagonal_untouched_by_rho = true;
  out.diagonal_sum = 0;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      // pairing_shift != 0 deliberately mismatches the weight at infinity.
      const Weight& lambda = quot_zero.weight_set[i];
      const Weight& mu = quot_inf.weight_set[(j + pairing_shift) % count];
      OrbComponentResult comp =
          cc_orb_component(sites, level, reps, lambda, mu, depth, fuel_limit);
      SmokeBlock blk{lambda, mu, comp.dim_cc_orb, comp.dim};
      if (i == j) {
        out.diagonal_sum += comp.dim;
        if (comp.dim != comp.dim_cc_orb) out.diagonal_untouched_by_rho = false;
      } else if (comp.dim != 0) {
        out.off_diagonal_vanishes = false;
      }
      out.blocks.push_back(std::move(blk));
    }

  out.verdict = out.off_diagonal_vanishes && out.tilde_injective &&
                out.diagonal_untouched_by_rho &&
                (out.diagonal_sum == out.dim_cc_trig);
  return out;
}

}  // namespace factorlab
