#include "factorlab/selftest.hpp"

#include <random>
#include <sstream>

namespace factorlab {

namespace {

struct Suite {
  std::vector<CheckResult>& out;
  std::string suite;
  std::string name;
  long checks = 0;
  bool pass = true;
  std::string detail;

  Suite(std::vector<CheckResult>& o, std::string s, std::string n)
      : out(o), suite(std::move(s)), name(std::move(n)) {}
  ~Suite() { out.push_back({suite, name, pass, checks, detail}); }

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

Cyc random_cyc(unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 3);
  std::vector<Rational> c(n);
  for (auto& x : c) {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    x = r;
  }
  return Cyc::make(n, std::move(c));
}

void cyclotomic_suite(std::vector<CheckResult>& out, std::mt19937_64& rng) {
  {
    Suite s(out, "cyclofield", "field axioms on 1000 random triples");
    for (int it = 0; it < 1000; ++it) {
      unsigned n = 2 + static_cast<unsigned>(rng() % 5);
      Cyc x = random_cyc(n, rng), y = random_cyc(n, rng), z = random_cyc(n, rng);
      s.expect((x + y) + z == x + (y + z), "associativity of +");
      s.expect((x * y) * z == x * (y * z), "associativity of *");
      s.expect(x + y == y + x, "commutativity of +");
      s.expect(x * y == y * x, "commutativity of *");
      s.expect(x * (y + z) == x * y + x * z, "distributivity");
    }
  }
  {
    Suite s(out, "cyclofield", "inverses on 500 random nonzero values");
    int done = 0;
    while (done < 500) {
      unsigned n = 2 + static_cast<unsigned>(rng() % 5);
      Cyc x = random_cyc(n, rng);
      if (x.is_zero()) continue;
      s.expect(x * x.inverse() == Cyc(1), "x * x^{-1} = 1");
      ++done;
    }
  }
  {
    Suite s(out, "cyclofield", "eps_pow homomorphism of order exactly N");
    for (unsigned n = 2; n <= 6; ++n) {
      for (long a = 0; a < static_cast<long>(n); ++a)
        for (long b = 0; b < static_cast<long>(n); ++b)
          s.expect(Cyc::eps_pow(n, a) * Cyc::eps_pow(n, b) ==
                       Cyc::eps_pow(n, a + b),
                   "eps^a eps^b = eps^{a+b}");
      Cyc acc(1);
      for (long k = 1; k < static_cast<long>(n); ++k) {
        acc *= Cyc::eps_pow(n, 1);
        s.expect(acc != Cyc(1), "order of eps not smaller than N");
      }
      s.expect(acc * Cyc::eps_pow(n, 1) == Cyc(1), "eps^N = 1");
    }
  }
}

CMat random_sl(unsigned n, std::mt19937_64& rng) {
  CMat m(n, n);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      if (a == 0 && b == 0) continue;
      Cyc c(static_cast<long>(rng() % 7) - 3);
      if (!c.is_zero()) m = m + j_basis(n, a, b).scaled(c);
    }
  return m;
}

void liealg_suite(std::vector<CheckResult>& out, std::mt19937_64& rng) {
  {
    Suite s(out, "liealg", "twist relations and Ad eigenvalues");
    for (unsigned n = 2; n <= 5; ++n) {
      auto [beta, gamma] = make_beta_gamma(n);
      CMat bp = CMat::identity(n), gp = CMat::identity(n);
      for (unsigned k = 0; k < n; ++k) {
        bp = bp * beta;
        gp = gp * gamma;
      }
      s.expect(bp == CMat::identity(n), "beta^N = 1");
      s.expect(gp == CMat::identity(n), "gamma^N = 1");
      s.expect(gamma * beta == (beta * gamma).scaled(Cyc::eps_pow(n, 1)),
               "gamma beta = eps beta gamma");
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          CMat j = j_basis(n, a, b);
          s.expect(ad_auto(n, TwistAuto::Gamma, j) ==
                       j.scaled(Cyc::eps_pow(n, a)),
                   "Ad(gamma) eigenvalue");
          s.expect(ad_auto(n, TwistAuto::Beta, j) ==
                       j.scaled(Cyc::eps_pow(n, b)),
                   "Ad(beta) eigenvalue");
        }
    }
  }
  {
    Suite s(out, "liealg", "inner form equals (1/2N) tr(ad ad) on basis pairs");
    for (unsigned n : {2u, 3u})
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          for (unsigned c = 0; c < n; ++c)
            for (unsigned d = 0; d < n; ++d) {
              if (c == 0 && d == 0) continue;
              CMat x = j_basis(n, a, b), y = j_basis(n, c, d);
              s.expect(adjoint_trace_inner(n, x, y) == inner(x, y),
                       "adjoint trace form");
            }
        }
  }
  {
    Suite s(out, "liealg", "Jacobi identity on random triples");
    for (unsigned n : {2u, 3u})
      for (int it = 0; it < 25; ++it) {
        CMat x = random_sl(n, rng), y = random_sl(n, rng), z = random_sl(n, rng);
        CMat jac = commutator(x, commutator(y, z)) +
                   commutator(y, commutator(z, x)) +
                   commutator(z, commutator(x, y));
        s.expect(jac.is_zero(), "Jacobi");
      }
  }
  {
    Suite s(out, "liealg", "twisted weights: sl_2 halving, charge sum");
    for (int it = 0; it < 100; ++it) {
      Weight w{{Cyc(static_cast<long>(rng() % 13) - 6)}};
      auto [t, tp] = tilde_weights(2, w);
      s.expect(t.values[0] == Cyc(Rational(-1, 2)) * w.values[0],
               "tilde(lambda) = -lambda/2 for sl_2");
      s.expect(t + tp == -w, "tilde + tilde' = -lambda");
    }
    for (unsigned n = 2; n <= 5; ++n)
      for (int it = 0; it < 25; ++it) {
        Weight w;
        for (unsigned b = 1; b < n; ++b)
          w.values.push_back(random_cyc(n, rng));
        auto [t, tp] = tilde_weights(n, w);
        s.expect(t + tp == -w, "tilde + tilde' = -lambda");
      }
  }
}

void cocycle_suite(std::vector<CheckResult>& out) {
  auto one = SiteSet::create(2, {Cyc(1)});
  auto two = SiteSet::create(2, {Cyc(1), Cyc(2)});
  auto three = SiteSet::create(3, {Cyc(1)});
  {
    Suite s(out, "sections", "cocycle vanishes on gout^trig pairs (order <= 3)");
    for (auto sites : {one, two, three}) {
      const unsigned n = sites->n;
      std::vector<Section> basis;
      for (std::size_t i = 0; i < sites->count(); ++i)
        for (unsigned a = 0; a < n; ++a)
          for (unsigned b = 0; b < n; ++b) {
            if (a == 0 && b == 0) continue;
            for (int ord = 1; ord <= 3; ++ord)
              basis.push_back(
                  Section::trig_basis_element(sites, a, b, i, ord));
          }
      for (const auto& f : basis)
        for (const auto& g : basis)
          s.expect(cocycle_pair(f, g).is_zero(), "trig cocycle vanishing");
    }
  }
  {
    Suite s(out, "sections", "cocycle vanishes on gout^orb incl. poles at 0/inf");
    for (auto sites : {one, three}) {
      const unsigned n = sites->n;
      std::vector<Section> basis;
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          for (long m = -2; m <= 2; ++m)
            basis.push_back(Section::orb_monomial(sites, a, b, m));
          for (int ord = 1; ord <= 2; ++ord)
            basis.push_back(Section::trig_basis_element(sites, a, b, 0, ord));
        }
      for (const auto& f : basis)
        for (const auto& g : basis)
          s.expect(cocycle_pair(f, g).is_zero(), "orb cocycle vanishing");
    }
  }
  {
    Suite s(out, "sections", "negative control: no 1/N breaks orb vanishing");
    bool nonzero = false;
    long pairs = 0;
    for (auto sites : {one, three}) {
      const unsigned n = sites->n;
      std::vector<Section> basis;
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          for (long m = -2; m <= 2; ++m)
            basis.push_back(Section::orb_monomial(sites, a, b, m));
          basis.push_back(Section::trig_basis_element(sites, a, b, 0, 1));
        }
      for (const auto& f : basis)
        for (const auto& g : basis) {
          ++pairs;
          if (!cocycle_pair_weighted(f, g, Cyc(1)).is_zero()) nonzero = true;
        }
    }
    s.checks = pairs;
    s.expect(nonzero, "unnormalised cocycle must fail to vanish somewhere");
  }
  {
    Suite s(out, "sections", "antisymmetry up to exact coboundary");
    auto sites = two;
    std::vector<Section> basis;
    for (unsigned a = 0; a < 2; ++a)
      for (unsigned b = 0; b < 2; ++b) {
        if (a == 0 && b == 0) continue;
        for (long m = -1; m <= 1; ++m)
          basis.push_back(Section::orb_monomial(sites, a, b, m));
        for (std::size_t i = 0; i < 2; ++i)
          basis.push_back(Section::trig_basis_element(sites, a, b, i, 2));
      }
    for (const auto& f : basis)
      for (const auto& g : basis)
        s.expect((cocycle_pair(f, g) + cocycle_pair(g, f)).is_zero(),
                 "c(f,g) + c(g,f) = 0");
  }
  {
    Suite s(out, "sections", "twisted mode congruence at the fixed points");
    for (auto sites : {two, three}) {
      const unsigned n = sites->n;
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          Section f = Section::trig_basis_element(sites, a, b, 0, 2);
          Jet j0 = f.expand_at(Site::zero(), 6);
          for (const auto& [m, mat] : j0.coeff)
            if (!mat.is_zero())
              s.expect(((m - static_cast<long>(a)) % n + n) % n == 0,
                       "modes at 0 are a mod N");
          Jet ji = f.expand_at(Site::infinity(), 6);
          for (const auto& [m, mat] : ji.coeff)
            if (!mat.is_zero())
              s.expect(((m + static_cast<long>(a)) % n + n) % n == 0,
                       "u-modes at inf are -a mod N");
        }
    }
  }
}

void decompose_suite(std::vector<CheckResult>& out, std::mt19937_64& rng) {
  Suite s(out, "sections", "g^D splits: 200 random jets round-trip uniquely");
  auto sites = SiteSet::create(2, {Cyc(1), Cyc(2)});
  const int order = 3;
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int it = 0; it < 200; ++it) {
    std::vector<Jet> jets(2);
    for (std::size_t i = 0; i < 2; ++i) {
      jets[i].site = Site::marked(i);
      jets[i].order = order;
      for (long m = -3; m <= order; ++m) {
        CMat mat(2, 2);
        bool nz = false;
        for (unsigned a = 0; a < 2; ++a)
          for (unsigned b = 0; b < 2; ++b) {
            if (a == 0 && b == 0) continue;
            long v = coeff(rng);
            if (v != 0) {
              mat = mat + j_basis(2, a, b).scaled(Cyc(v));
              nz = true;
            }
          }
        if (nz) jets[i].coeff[m] = mat;
      }
    }
    auto [sec, tails] = decompose_gD(sites, jets, order);
    for (std::size_t i = 0; i < 2; ++i) {
      Jet re = sec.expand_at(Site::marked(i), order);
      for (long m = -3; m <= order; ++m)
        s.expect(jets[i].at(m, 2) == re.at(m, 2) + tails[i].at(m, 2),
                 "jet = germ(s) + positive part");
      s.expect(tails[i].lowest_mode() >= 0, "tails have no negative modes");
    }
    auto [sec2, tails2] = decompose_gD(sites, tails, order);
    s.expect(sec2.is_zero(), "idempotence / uniqueness");
  }
}

void module_suite(std::vector<CheckResult>& out, std::mt19937_64& rng) {
  auto sites = SiteSet::create(2, {Cyc(1)});
  auto [lt, ltp] = tilde_weights(2, Weight{{Cyc(2)}});
  auto [mt, mtp] = tilde_weights(2, Weight{{Cyc(0)}});
  (void)ltp;
  (void)mt;
  TensorSystem sys{sites, Rational(1), {FinRep::defining(2)}, lt, mtp};
  {
    Suite s(out, "modules", "extended bracket consistency (2-cocycle check)");
    auto window = monomial_window(sys, 2);
    for (int it = 0; it < 120; ++it) {
      std::size_t slot = rng() % sys.slot_count();
      auto rand_mode = [&]() {
        while (true) {
          unsigned a = rng() % 2, b = rng() % 2;
          if (a == 0 && b == 0) continue;
          long p = static_cast<long>(rng() % 5) - 2;
          if (slot == 0 && ((p - static_cast<long>(a)) % 2 + 2) % 2 != 0)
            continue;
          if (slot == sys.infinity_slot() &&
              ((p + static_cast<long>(a)) % 2 + 2) % 2 != 0)
            continue;
          return LocalMode{a, b, p};
        }
      };
      LocalMode x = rand_mode(), y = rand_mode();
      ModVector v;
      v.add(window[rng() % window.size()], Cyc(1));
      Fuel fuel;
      fuel.depth_cap = 10;
      ModVector lhs = act_local(sys, slot, x, act_local(sys, slot, y, v, fuel), fuel);
      lhs += act_local(sys, slot, y, act_local(sys, slot, x, v, fuel), fuel)
                 .scaled(Cyc(-1));
      Cyc sc = Cyc::eps_pow(2, -static_cast<long>(x.b) * y.a) -
               Cyc::eps_pow(2, -static_cast<long>(x.a) * y.b);
      unsigned na = (x.a + y.a) % 2, nb = (x.b + y.b) % 2;
      ModVector rhs;
      if (!sc.is_zero())
        rhs += act_local(sys, slot, LocalMode{na, nb, x.p + y.p}, v, fuel)
                   .scaled(sc);
      if (x.p + y.p == 0 && na == 0 && nb == 0) {
        bool fixed = (slot == 0 || slot == sys.infinity_slot());
        Cyc pairing = Cyc(2) * Cyc::eps_pow(2, -static_cast<long>(x.b) * y.a);
        Cyc weight = fixed ? Cyc(Rational(1, 2)) : Cyc(1);
        rhs += v.scaled(Cyc(x.p) * pairing * weight);
      }
      ModVector diff = lhs;
      diff += rhs.scaled(Cyc(-1));
      s.expect(diff.is_zero(), "[x,y]v = x(yv) - y(xv)");
    }
  }
  {
    Suite s(out, "modules", "smoothness bound annihilation");
    auto window = monomial_window(sys, 3);
    Fuel fuel;
    fuel.depth_cap = 8;
    for (const auto& mono : window) {
      ModVector v;
      v.add(mono, Cyc(1));
      for (std::size_t slot = 0; slot < sys.slot_count(); ++slot) {
        long p = mono.slot_depth(slot) + 1;
        unsigned a, b;
        if (slot == 0) {
          a = static_cast<unsigned>(((p % 2) + 2) % 2);
        } else if (slot == sys.infinity_slot()) {
          a = static_cast<unsigned>((((-p) % 2) + 2) % 2);
        } else {
          a = 1;
        }
        b = (a == 0) ? 1u : 0u;
        s.expect(act_local(sys, slot, LocalMode{a, b, p}, v, fuel).is_zero(),
                 "mode above slot depth annihilates");
      }
    }
  }
  {
    Suite s(out, "modules", "PBW graded dimensions match the mode counting");
    auto vsites = SiteSet::create(2, std::vector<Cyc>{});
    TensorSystem verma{vsites, Rational(1), {}, Weight{{Cyc(0)}}, std::nullopt};
    std::vector<long> counts(5, 0);
    for (const auto& m : monomial_window(verma, 4)) counts[m.total_depth()]++;
    std::vector<long> gf{1, 0, 0, 0, 0};
    for (int d = 1; d <= 4; ++d) {
      int mult = (d % 2 == 1) ? 2 : 1;
      for (int copies = 0; copies < mult; ++copies) {
        std::vector<long> ng(5, 0);
        for (int i = 0; i <= 4; ++i)
          for (int k = 0; d * k + i <= 4; ++k) ng[i + d * k] += gf[i];
        gf = ng;
      }
    }
    for (int i = 0; i <= 4; ++i)
      s.expect(counts[i] == gf[i], "graded dimension at depth " + std::to_string(i));
  }
  {
    Suite s(out, "modules", "rho_{1,beta} scalar and vanishing iff matched");
    for (int it = 0; it < 60; ++it) {
      Cyc lambda(static_cast<long>(rng() % 9) - 4);
      Cyc mu(static_cast<long>(rng() % 9) - 4);
      auto [lt2, lt2p] = tilde_weights(2, Weight{{lambda}});
      auto [mt2, mt2p] = tilde_weights(2, Weight{{mu}});
      (void)lt2p;
      (void)mt2;
      TensorSystem tsys{sites, Rational(1), {FinRep::defining(2)}, lt2, mt2p};
      ModVector v;
      v.add(tsys.vacuum_from_index(rng() % 2), Cyc(1));
      ModVector got = rho_1_beta(tsys, {Cyc(1)}, v);
      ModVector want = v.scaled((lambda - mu) * Cyc(Rational(-1, 2)));
      ModVector diff = got;
      diff += want.scaled(Cyc(-1));
      s.expect(diff.is_zero(),
               "rho acts by (lambda-mu) o (1-Ad beta)^{-1} o Ad beta");
      if (lambda == mu) s.expect(got.is_zero(), "diagonal rho vanishes");
      Fuel fuel;
      Section f = Section::orb_monomial(sites, 1, 1, -1);
      ModVector c1 = rho_1_beta(tsys, {Cyc(1)}, act_section(tsys, f, v, fuel));
      ModVector c2 = act_section(tsys, f, rho_1_beta(tsys, {Cyc(1)}, v), fuel);
      ModVector d2 = c1;
      d2 += c2.scaled(Cyc(-1));
      s.expect(d2.is_zero(), "rho commutes with act_section");
    }
  }
}

}  // namespace

std::vector<CheckResult> run_property_suites(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  cyclotomic_suite(out, rng);
  liealg_suite(out, rng);
  cocycle_suite(out);
  decompose_suite(out, rng);
  module_suite(out, rng);
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace factorlab
