#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factorlab/liealg.hpp"
#include "factorlab/series.hpp"

namespace factorlab {

// Marked-point configuration on P^1. Points are the orbifold coordinates
// t_i of the insertions Q_i; they must avoid 0 and infinity and no two may
// lie in the same C_N-orbit (t_i^N all distinct).
struct SiteSet {
  unsigned n = 0;
  std::vector<Cyc> points;
  std::vector<Cyc> orbit_values;  // t_i^N
  int pole_cap = 6;

  static std::shared_ptr<const SiteSet> create(unsigned n,
                                               std::vector<Cyc> points,
                                               int pole_cap = 6);
  // Empty when valid; otherwise one message per violated invariant.
  static std::vector<std::string> violations(unsigned n,
                                             const std::vector<Cyc>& points);
  std::size_t count() const { return points.size(); }
};

struct Site {
  enum class Kind { Zero, Marked, Infinity };
  Kind kind = Kind::Zero;
  std::size_t index = 0;

  static Site zero() { return {Kind::Zero, 0}; }
  static Site marked(std::size_t i) { return {Kind::Marked, i}; }
  static Site infinity() { return {Kind::Infinity, 0}; }
  bool operator==(const Site& rhs) const {
    return kind == rhs.kind && index == rhs.index;
  }
  std::string to_string() const;
};

// Rational function of s = t^N in partial-fraction form: a Laurent
// polynomial in s plus principal parts at the orbit values s = t_i^N.
struct ScalarPF {
  std::map<long, Cyc> laurent;                          // s^m -> coeff
  std::map<std::pair<std::size_t, int>, Cyc> poles;     // (site, n) -> coeff of (s - t_i^N)^{-n}

  ScalarPF& operator+=(const ScalarPF& rhs);
  ScalarPF scaled(const Cyc& f) const;
  bool is_zero() const;
  void prune();
};

// Laurent jet of a section at one site, in the local coordinate (t at 0,
// t - t_i at Q_i, 1/t at infinity). `order` is the truncation: coefficients
// are exact for all modes <= order.
struct Jet {
  Site site;
  int order = 0;
  std::map<long, CMat> coeff;

  CMat at(long mode, unsigned n) const;  // zero matrix when absent
  int lowest_mode() const;               // order+1 when identically zero
};

// Equivariant rational g-valued section on P^1:
//   f(t) = sum_{(a,b) != (0,0)} J_{ab} t^a g_{ab}(t^N),
// which satisfies f(eps t) = Ad(gamma) f(t) by construction. Poles sit only
// on the C_N-orbits of the configured marked points, at 0 and at infinity.
class Section {
 public:
  explicit Section(std::shared_ptr<const SiteSet> sites) : sites_(std::move(sites)) {}

  // J_{a,b} t^a (t^N - t_i^N)^{-1} for a != 0 and
  // J_{0,b} (eps^b t^N - t_i^N)(t^N - t_i^N)^{-1} for a = 0; higher pole
  // orders are (t d/dt)^{n-1} of these. All lie in gout^trig.
  static Section trig_basis_element(std::shared_ptr<const SiteSet> sites,
                                    unsigned a, unsigned b, std::size_t i,
                                    int pole_order);
  // The explicit Cartan section h_b with h_b(0) = H_b, h_b(inf) = eps^b H_b.
  static Section h_section(std::shared_ptr<const SiteSet> sites, unsigned b,
                           std::size_t i);
  // J_{a,b} t^{a+mN}: the monomial sections spanning the polar parts at 0
  // and infinity.
  static Section orb_monomial(std::shared_ptr<const SiteSet> sites, unsigned a,
                              unsigned b, long m);

  const std::shared_ptr<const SiteSet>& sites() const { return sites_; }
  const std::map<std::pair<unsigned, unsigned>, ScalarPF>& components() const {
    return comp_;
  }
  bool is_zero() const;

  Section operator+(const Section& rhs) const;
  Section scaled(const Cyc& f) const;
  Section operator-() const { return scaled(Cyc(-1)); }
  // The loop derivation t d/dt, which preserves equivariance and gluing.
  Section t_ddt() const;

  int pole_order(const Site& site) const;
  // Value at t = 0 / t = infinity; nullopt when there is a pole.
  std::optional<CMat> value_at_zero() const;
  std::optional<CMat> value_at_infinity() const;

  enum class MemberClass { Orb, Trig, Zero };
  bool check_membership(MemberClass cls) const;

  // Exact Laurent expansion at a configured site, valid through `order`.
  // Sites other than 0, infinity and the configured marked points are
  // rejected: their orbits may hide undeclared poles.
  Jet expand_at(const Site& site, int order) const;

 private:
  ScalarPF& component(unsigned a, unsigned b);
  void add_component(unsigned a, unsigned b, const ScalarPF& pf);

  std::shared_ptr<const SiteSet> sites_;
  std::map<std::pair<unsigned, unsigned>, ScalarPF> comp_;
};

// Res_site (df | g): residue at one site of the 1-form (df | g), taken in
// the local coordinate there. Being a residue of a 1-form it is coordinate
// free, so no extra factors appear when switching between t and 1/t.
Cyc residue_pairing(const Section& f, const Section& g, const Site& site);

// The affine 2-cocycle: sum over marked sites of Res(df | g) plus the
// 1/N-weighted residues at 0 and infinity, each taken of the 1-form
// (df | g) in the local coordinate. Vanishes identically on gout^trig and
// on gout^orb; the 1/N weight at the fixed points is what makes the second
// statement a residue-theorem identity.
Cyc cocycle_pair(const Section& f, const Section& g);
// Same with an explicit weight at 0/infinity (the normalised value is 1/N);
// passing 1 is the negative control that breaks orb vanishing.
Cyc cocycle_pair_weighted(const Section& f, const Section& g,
                          const Cyc& fixed_point_weight);

// Builds members of gout^trig whose principal part at marked site i is
// exactly J_{ab} xi_i^{-n}, regular at the other marked points. These
// realise the complement in g^D = gout^trig + g^D_+ constructively.
class TrigReplacer {
 public:
  explicit TrigReplacer(std::shared_ptr<const SiteSet> sites)
      : sites_(std::move(sites)) {}
  const Section& principal_section(unsigned a, unsigned b, std::size_t i,
                                   int n);

 private:
  std::shared_ptr<const SiteSet> sites_;
  std::map<std::tuple<unsigned, unsigned, std::size_t, int>, Section> cache_;
};

// Splits a tuple of jets at the marked sites (one per site, common
// truncation `order`) as x = (germ of a trig section) + (jets with no
// negative modes). The trig part of a purely positive input is zero.
std::pair<Section, std::vector<Jet>> decompose_gD(
    std::shared_ptr<const SiteSet> sites, const std::vector<Jet>& jets,
    int order);

}  // namespace factorlab
