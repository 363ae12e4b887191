#include "factorlab/sections.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace factorlab {

std::vector<std::string> SiteSet::violations(unsigned n,
                                             const std::vector<Cyc>& points) {
  std::vector<std::string> out;
  if (n < 2) out.push_back("N must be >= 2");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].is_zero())
      out.push_back("point " + std::to_string(i + 1) + " is 0");
  if (n >= 2) {
    std::vector<Cyc> orb(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      Cyc p = Cyc(1);
      for (unsigned k = 0; k < n; ++k) p *= points[i];
      orb[i] = p;
    }
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        if (orb[i] == orb[j])
          out.push_back("points " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) +
                        " lie in the same C_N-orbit (t^N collision)");
  }
  return out;
}

std::shared_ptr<const SiteSet> SiteSet::create(unsigned n,
                                               std::vector<Cyc> points,
                                               int pole_cap) {
  auto bad = violations(n, points);
  if (!bad.empty()) {
    std::string msg = "invalid site configuration:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }
  auto s = std::make_shared<SiteSet>();
  s->n = n;
  s->points = std::move(points);
  s->pole_cap = pole_cap;
  s->orbit_values.resize(s->points.size());
  for (std::size_t i = 0; i < s->points.size(); ++i) {
    Cyc p = Cyc(1);
    for (unsigned k = 0; k < n; ++k) p *= s->points[i];
    s->orbit_values[i] = p;
  }
  return s;
}

std::string Site::to_string() const {
  switch (kind) {
    case Kind::Zero:
      return "0";
    case Kind::Infinity:
      return "inf";
    case Kind::Marked:
      return "Q" + std::to_string(index + 1);
  }
  return "?";
}

ScalarPF& ScalarPF::operator+=(const ScalarPF& rhs) {
  for (const auto& [e, v] : rhs.laurent) laurent[e] += v;
  for (const auto& [k, v] : rhs.poles) poles[k] += v;
  prune();
  return *this;
}

ScalarPF ScalarPF::scaled(const Cyc& f) const {
  ScalarPF out(*this);
  for (auto& [e, v] : out.laurent) v *= f;
  for (auto& [k, v] : out.poles) v *= f;
  out.prune();
  return out;
}

bool ScalarPF::is_zero() const {
  for (const auto& [e, v] : laurent)
    if (!v.is_zero()) return false;
  for (const auto& [k, v] : poles)
    if (!v.is_zero()) return false;
  return true;
}

void ScalarPF::prune() {
  for (auto it = laurent.begin(); it != laurent.end();)
    it = it->second.is_zero() ? laurent.erase(it) : ++it;
  for (auto it = poles.begin(); it != poles.end();)
    it = it->second.is_zero() ? poles.erase(it) : ++it;
}

CMat Jet::at(long mode, unsigned n) const {
  if (mode > order)
    throw std::out_of_range("jet: coefficient beyond the truncation order");
  auto it = coeff.find(mode);
  if (it != coeff.end()) return it->second;
  return CMat(n, n);
}

int Jet::lowest_mode() const {
  for (const auto& [m, c] : coeff)
    if (!c.is_zero()) return static_cast<int>(m);
  return order + 1;
}

ScalarPF& Section::component(unsigned a, unsigned b) {
  return comp_[{a, b}];
}

void Section::add_component(unsigned a, unsigned b, const ScalarPF& pf) {
  comp_[{a, b}] += pf;
  if (comp_[{a, b}].is_zero()) comp_.erase({a, b});
}

Section Section::trig_basis_element(std::shared_ptr<const SiteSet> sites,
                                    unsigned a, unsigned b, std::size_t i,
                                    int pole_order) {
  const unsigned n = sites->n;
  if ((a % n) == 0 && (b % n) == 0)
    throw std::invalid_argument("trig_basis_element: (a,b) = (0,0)");
  if (pole_order < 1)
    throw std::invalid_argument("trig_basis_element: pole order must be >= 1");
  if (pole_order > sites->pole_cap)
    throw std::invalid_argument("trig_basis_element: pole order exceeds cap");
  if (i >= sites->count())
    throw std::invalid_argument("trig_basis_element: no such marked point");
  a %= n;
  b %= n;
  Section f(sites);
  const Cyc sigma = sites->orbit_values[i];
  ScalarPF g;
  if (a != 0) {
    g.poles[{i, 1}] = Cyc(1);  // t^a / (t^N - t_i^N)
  } else {
    // (eps^b t^N - t_i^N)/(t^N - t_i^N) = eps^b + (eps^b - 1) t_i^N / (s - t_i^N)
    Cyc eb = Cyc::eps_pow(n, b);
    g.laurent[0] = eb;
    g.poles[{i, 1}] = (eb - Cyc(1)) * sigma;
  }
  f.comp_[{a, b}] = std::move(g);
  for (int k = 1; k < pole_order; ++k) f = f.t_ddt();
  return f;
}

Section Section::h_section(std::shared_ptr<const SiteSet> sites, unsigned b,
                           std::size_t i) {
  if (b % sites->n == 0)
    throw std::invalid_argument("h_section: b must be nonzero mod N");
  return trig_basis_element(std::move(sites), 0, b, i, 1);
}

Section Section::orb_monomial(std::shared_ptr<const SiteSet> sites, unsigned a,
                              unsigned b, long m) {
  const unsigned n = sites->n;
  if ((a % n) == 0 && (b % n) == 0)
    throw std::invalid_argument("orb_monomial: (a,b) = (0,0)");
  Section f(sites);
  ScalarPF g;
  g.laurent[m] = Cyc(1);
  f.comp_[{a % n, b % n}] = std::move(g);
  return f;
}

bool Section::is_zero() const {
  for (const auto& [ab, g] : comp_)
    if (!g.is_zero()) return false;
  return true;
}

Section Section::operator+(const Section& rhs) const {
  if (sites_ != rhs.sites_ && !(sites_ && rhs.sites_ && sites_->n == rhs.sites_->n &&
                                sites_->points.size() == rhs.sites_->points.size()))
    throw std::invalid_argument("section: incompatible site sets");
  Section out(*this);
  for (const auto& [ab, g] : rhs.comp_) out.add_component(ab.first, ab.second, g);
  return out;
}

Section Section::scaled(const Cyc& f) const {
  Section out(sites_);
  for (const auto& [ab, g] : comp_) {
    ScalarPF s = g.scaled(f);
    if (!s.is_zero()) out.comp_[ab] = std::move(s);
  }
  return out;
}

Section Section::t_ddt() const {
  const long n = sites_->n;
  Section out(sites_);
  for (const auto& [ab, g] : comp_) {
    const long a = ab.first;
    ScalarPF d;
    // t d/dt (t^a g(t^N)) = t^a [ a g(s) + N s g'(s) ] with s = t^N.
    for (const auto& [m, c] : g.laurent) {
      Cyc f = c * Cyc(a + m * n);
      if (!f.is_zero()) d.laurent[m] = f;
    }
    for (const auto& [key, c] : g.poles) {
      auto [i, ord] = key;
      const Cyc& sigma = sites_->orbit_values[i];
      // N s d/ds (s-sigma)^{-ord} = -ord N (s-sigma)^{-ord} - ord N sigma (s-sigma)^{-ord-1}
      d.poles[{i, ord}] += c * Cyc(a - static_cast<long>(ord) * n);
      d.poles[{i, ord + 1}] += c * Cyc(-static_cast<long>(ord) * n) * sigma;
    }
    d.prune();
    if (!d.is_zero()) out.comp_[ab] = std::move(d);
  }
  return out;
}

int Section::pole_order(const Site& site) const {
  const long n = sites_->n;
  int worst = 0;
  for (const auto& [ab, g] : comp_) {
    const long a = ab.first;
    switch (site.kind) {
      case Site::Kind::Zero:
        for (const auto& [m, c] : g.laurent) {
          long e = a + m * n;
          if (e < 0) worst = std::max<int>(worst, static_cast<int>(-e));
        }
        break;
      case Site::Kind::Infinity:
        for (const auto& [m, c] : g.laurent) {
          long e = a + m * n;
          if (e > 0) worst = std::max<int>(worst, static_cast<int>(e));
        }
        break;
      case Site::Kind::Marked:
        for (const auto& [key, c] : g.poles)
          if (key.first == site.index) worst = std::max(worst, key.second);
        break;
    }
  }
  return worst;
}

namespace {

// (s - sigma)^{-ord} expanded at s = 0:
//   (-1)^ord sigma^{-ord} sum_j binom(ord+j-1, j) (s/sigma)^j.
Cyc pole_taylor_at_zero(const Cyc& sigma, int ord, long j) {
  Rational binom(1);
  for (long k = 1; k <= j; ++k)
    binom *= Rational(ord + k - 1, k);
  Cyc sig_pow = sigma.inverse();
  Cyc acc = Cyc(1);
  for (long k = 0; k < ord + j; ++k) acc *= sig_pow;
  Cyc sign = (ord % 2 == 0) ? Cyc(1) : Cyc(-1);
  return sign * Cyc(binom) * acc;
}

// (s - sigma)^{-ord} at infinity in u = 1/t, s = u^{-N}:
//   u^{ord N} sum_j binom(ord+j-1, j) sigma^j u^{jN}.
Cyc pole_taylor_at_inf(const Cyc& sigma, int ord, long j) {
  Rational binom(1);
  for (long k = 1; k <= j; ++k)
    binom *= Rational(ord + k - 1, k);
  Cyc acc = Cyc(1);
  for (long k = 0; k < j; ++k) acc *= sigma;
  return Cyc(binom) * acc;
}

}  // namespace

std::optional<CMat> Section::value_at_zero() const {
  const unsigned n = sites_->n;
  if (pole_order(Site::zero()) > 0) return std::nullopt;
  CMat v(n, n);
  for (const auto& [ab, g] : comp_) {
    if (ab.first != 0) continue;  // t^a g(t^N) vanishes at 0 for a != 0
    Cyc val;
    auto it = g.laurent.find(0);
    if (it != g.laurent.end()) val += it->second;
    for (const auto& [key, c] : g.poles)
      val += c * pole_taylor_at_zero(sites_->orbit_values[key.first],
                                     key.second, 0);
    if (!val.is_zero()) v = v + j_basis(n, 0, ab.second).scaled(val);
  }
  return v;
}

std::optional<CMat> Section::value_at_infinity() const {
  const unsigned n = sites_->n;
  if (pole_order(Site::infinity()) > 0) return std::nullopt;
  CMat v(n, n);
  for (const auto& [ab, g] : comp_) {
    if (ab.first != 0) continue;
    auto it = g.laurent.find(0);
    if (it != g.laurent.end() && !it->second.is_zero())
      v = v + j_basis(n, 0, ab.second).scaled(it->second);
  }
  return v;
}

bool Section::check_membership(MemberClass cls) const {
  const unsigned n = sites_->n;
  // Equivariance and pole confinement hold by construction of the
  // t^a g(t^N) components; the orb class asks nothing further.
  if (cls == MemberClass::Orb) return true;
  auto v0 = value_at_zero();
  auto vinf = value_at_infinity();
  if (!v0 || !vinf) return false;
  if (cls == MemberClass::Zero) return v0->is_zero() && vinf->is_zero();
  return *vinf == ad_auto(n, TwistAuto::Beta, *v0);
}

Jet Section::expand_at(const Site& site, int order) const {
  const unsigned n = sites_->n;
  if (site.kind == Site::Kind::Marked && site.index >= sites_->count())
    throw std::invalid_argument(
        "expand_at: site is not part of this configuration");
  Jet jet;
  jet.site = site;
  jet.order = order;

  auto add_mode = [&](long mode, unsigned a, unsigned b, const Cyc& c) {
    if (mode > order || c.is_zero()) return;
    auto it = jet.coeff.find(mode);
    if (it == jet.coeff.end())
      jet.coeff.emplace(mode, j_basis(n, a, b).scaled(c));
    else
      it->second = it->second + j_basis(n, a, b).scaled(c);
  };

  if (site.kind == Site::Kind::Zero) {
    for (const auto& [ab, g] : comp_) {
      const long a = ab.first;
      for (const auto& [m, c] : g.laurent) add_mode(a + m * n, ab.first, ab.second, c);
      for (const auto& [key, c] : g.poles) {
        const Cyc& sigma = sites_->orbit_values[key.first];
        for (long j = 0; a + j * n <= order; ++j)
          add_mode(a + j * n, ab.first, ab.second,
                   c * pole_taylor_at_zero(sigma, key.second, j));
      }
    }
    return jet;
  }

  if (site.kind == Site::Kind::Infinity) {
    for (const auto& [ab, g] : comp_) {
      const long a = ab.first;
      for (const auto& [m, c] : g.laurent)
        add_mode(-a - m * n, ab.first, ab.second, c);
      for (const auto& [key, c] : g.poles) {
        const Cyc& sigma = sites_->orbit_values[key.first];
        for (long j = 0; -a + (key.second + j) * n <= order; ++j)
          add_mode(-a + (key.second + j) * n, ab.first, ab.second,
                   c * pole_taylor_at_inf(sigma, key.second, j));
      }
    }
    return jet;
  }

  // Marked point: build series in xi = t - t_i, exact through `order`.
  const std::size_t i = site.index;
  const Cyc& ti = sites_->points[i];
  long work_hi = order + sites_->pole_cap + static_cast<long>(n) + 2;
  Series t_ser;
  t_ser.hi = work_hi;
  t_ser.c[0] = ti;
  t_ser.c[1] = Cyc(1);
  Series s_ser = t_ser.pow(static_cast<long>(n));

  for (const auto& [ab, g] : comp_) {
    const long a = ab.first;
    Series total = Series::zero(work_hi);
    for (const auto& [m, c] : g.laurent) total = total + s_ser.pow(m).scaled(c);
    for (const auto& [key, c] : g.poles) {
      Series base = s_ser + Series::constant(-sites_->orbit_values[key.first],
                                             work_hi);
      total = total + base.pow(-key.second).scaled(c);
    }
    if (a != 0) total = total * t_ser.pow(a);
    if (total.hi < order)
      throw std::logic_error("expand_at: series window underflow");
    for (const auto& [e, c] : total.c) add_mode(e, ab.first, ab.second, c);
  }
  return jet;
}

Cyc residue_pairing(const Section& f, const Section& g, const Site& site) {
  // Res sum_m m (F_m | G_{-m}) over local modes; only finitely many terms
  // meet, bounded by the two pole orders.
  int pf = f.pole_order(site);
  int pg = g.pole_order(site);
  if (pf + pg == 0) return Cyc();  // (df|g) regular, no residue
  Jet jf = f.expand_at(site, pg);
  Jet jg = g.expand_at(site, pf);
  Cyc res;
  const unsigned n = f.sites()->n;
  for (long m = -pf; m <= pg; ++m) {
    if (m == 0) continue;
    CMat fm = jf.at(m, n);
    if (fm.is_zero()) continue;
    CMat gm = jg.at(-m, n);
    if (gm.is_zero()) continue;
    res += Cyc(m) * inner(fm, gm);
  }
  return res;
}

Cyc cocycle_pair_weighted(const Section& f, const Section& g,
                          const Cyc& fixed_point_weight) {
  auto sites = f.sites();
  Cyc total;
  for (std::size_t i = 0; i < sites->count(); ++i)
    total += residue_pairing(f, g, Site::marked(i));
  total += fixed_point_weight * residue_pairing(f, g, Site::zero());
  total += fixed_point_weight * residue_pairing(f, g, Site::infinity());
  return total;
}

Cyc cocycle_pair(const Section& f, const Section& g) {
  return cocycle_pair_weighted(
      f, g, Cyc(Rational(1, static_cast<long>(f.sites()->n))));
}

const Section& TrigReplacer::principal_section(unsigned a, unsigned b,
                                               std::size_t i, int n) {
  a %= sites_->n;
  b %= sites_->n;
  auto key = std::make_tuple(a, b, i, n);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  // The elements (t d/dt)^{k-1} J_{ab}(t) have pole order exactly k at Q_i
  // with scalar principal coefficients; back-substitution normalises the
  // principal part to a single xi^{-n}.
  std::vector<Section> fam;
  std::vector<std::vector<Cyc>> princ;  // princ[k][l] = coeff of xi^{-(l+1)}
  for (int k = 1; k <= n; ++k) {
    Section t = Section::trig_basis_element(sites_, a, b, i, k);
    Jet j = t.expand_at(Site::marked(i), -1);
    std::vector<Cyc> row(n, Cyc());
    for (long mode = -k; mode <= -1; ++mode) {
      CMat c = j.at(mode, sites_->n);
      if (c.is_zero()) continue;
      auto coeffs = j_coefficients(sites_->n, c);
      auto itc = coeffs.find({a, b});
      if (itc != coeffs.end()) row[static_cast<std::size_t>(-mode - 1)] = itc->second;
    }
    fam.push_back(std::move(t));
    princ.push_back(std::move(row));
  }
  // Solve sum_k alpha_k princ[k] = e_n (triangular: princ[k][k] != 0,
  // princ[k][l] = 0 for l > k).
  std::vector<Cyc> alpha(n, Cyc());
  for (int l = n; l >= 1; --l) {
    Cyc rhs = (l == n) ? Cyc(1) : Cyc(0);
    for (int k = l + 1; k <= n; ++k)
      rhs -= alpha[k - 1] * princ[k - 1][l - 1];
    if (princ[l - 1][l - 1].is_zero())
      throw std::logic_error("principal_section: degenerate leading coefficient");
    alpha[l - 1] = rhs * princ[l - 1][l - 1].inverse();
  }
  Section out(sites_);
  for (int k = 1; k <= n; ++k)
    if (!alpha[k - 1].is_zero()) out = out + fam[k - 1].scaled(alpha[k - 1]);
  return cache_.emplace(key, std::move(out)).first->second;
}

std::pair<Section, std::vector<Jet>> decompose_gD(
    std::shared_ptr<const SiteSet> sites, const std::vector<Jet>& jets,
    int order) {
  if (jets.size() != sites->count())
    throw std::invalid_argument("decompose_gD: one jet per marked site required");
  for (const auto& j : jets)
    if (j.order != order)
      throw std::invalid_argument("decompose_gD: inconsistent truncation orders");

  TrigReplacer rep(sites);
  Section s(sites);
  for (std::size_t i = 0; i < jets.size(); ++i) {
    for (const auto& [mode, mat] : jets[i].coeff) {
      if (mode >= 0 || mat.is_zero()) continue;
      for (const auto& [ab, c] : j_coefficients(sites->n, mat))
        s = s + rep.principal_section(ab.first, ab.second, i,
                                      static_cast<int>(-mode))
                    .scaled(c);
    }
  }

  std::vector<Jet> positive;
  for (std::size_t i = 0; i < jets.size(); ++i) {
    Jet tail = s.expand_at(Site::marked(i), order);
    Jet p;
    p.site = Site::marked(i);
    p.order = order;
    for (long m = 0; m <= order; ++m) {
      CMat d = jets[i].at(m, sites->n) - tail.at(m, sites->n);
      if (!d.is_zero()) p.coeff.emplace(m, std::move(d));
    }
    // All negative modes must cancel exactly.
    for (long m = jets[i].lowest_mode(); m < 0; ++m)
      if (!(jets[i].at(m, sites->n) - tail.at(m, sites->n)).is_zero())
        throw std::logic_error("decompose_gD: principal parts failed to cancel");
    positive.push_back(std::move(p));
  }
  return {std::move(s), std::move(positive)};
}

}  // namespace factorlab
