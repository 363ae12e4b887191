#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "factorlab/sections.hpp"
#include "numeric_oracle.hpp"

using namespace factorlab;

namespace {

std::shared_ptr<const SiteSet> sites_n2_11() {
  return SiteSet::create(2, {Cyc(1)});
}

std::shared_ptr<const SiteSet> sites_n2_12() {
  return SiteSet::create(2, {Cyc(1), Cyc(2)});
}

std::shared_ptr<const SiteSet> sites_n3_1() {
  return SiteSet::create(3, {Cyc(1)});
}

}  // namespace

TEST_CASE("site validation") {
  CHECK(SiteSet::violations(2, {Cyc(1), Cyc(2)}).empty());
  // same C_2 orbit: (-1)^2 = 1^2
  CHECK(!SiteSet::violations(2, {Cyc(1), Cyc(-1)}).empty());
  CHECK(!SiteSet::violations(2, {Cyc(0)}).empty());
  CHECK_THROWS_AS(SiteSet::create(2, {Cyc(1), Cyc(-1)}), std::invalid_argument);
  // distinct points in distinct orbits are fine even with cyclotomic values
  CHECK(SiteSet::violations(4, {Cyc(1), Cyc(2)}).empty());
}

TEST_CASE("h_section: explicit N=2 form and gluing") {
  auto sites = sites_n2_11();
  Section h = Section::h_section(sites, 1, 0);
  // h(t) = J_{0,1} (-t^2 - 1)/(t^2 - 1): component (0,1) reads
  // -1 + (-2)/(s - 1)
  const auto& comp = h.components();
  REQUIRE(comp.count({0, 1}) == 1);
  const ScalarPF& g = comp.at({0, 1});
  CHECK(g.laurent.at(0) == Cyc(-1));
  CHECK(g.poles.at({0, 1}) == Cyc(-2));

  auto v0 = h.value_at_zero();
  auto vi = h.value_at_infinity();
  REQUIRE(v0.has_value());
  REQUIRE(vi.has_value());
  CHECK(*v0 == j_basis(2, 0, 1));
  CHECK(*vi == j_basis(2, 0, 1).scaled(Cyc(-1)));
  CHECK(*vi == ad_auto(2, TwistAuto::Beta, *v0));

  CHECK(h.check_membership(Section::MemberClass::Trig));
  CHECK(h.check_membership(Section::MemberClass::Orb));
  CHECK(!h.check_membership(Section::MemberClass::Zero));
}

TEST_CASE("trig basis elements vanish at both ends for a != 0") {
  for (auto sites : {sites_n2_12(), sites_n3_1()}) {
    const unsigned n = sites->n;
    for (unsigned a = 1; a < n; ++a)
      for (unsigned b = 0; b < n; ++b)
        for (std::size_t i = 0; i < sites->count(); ++i) {
          Section f = Section::trig_basis_element(sites, a, b, i, 1);
          auto v0 = f.value_at_zero();
          auto vi = f.value_at_infinity();
          REQUIRE(v0.has_value());
          REQUIRE(vi.has_value());
          CHECK(v0->is_zero());
          CHECK(vi->is_zero());
          CHECK(f.check_membership(Section::MemberClass::Trig));
          CHECK(f.check_membership(Section::MemberClass::Zero));
        }
  }
}

TEST_CASE("h-type values at 0 and infinity across N") {
  for (auto sites : {sites_n2_12(), sites_n3_1()}) {
    const unsigned n = sites->n;
    for (unsigned b = 1; b < n; ++b) {
      Section h = Section::h_section(sites, b, 0);
      CHECK(*h.value_at_zero() == j_basis(n, 0, b));
      CHECK(*h.value_at_infinity() == j_basis(n, 0, b).scaled(Cyc::eps_pow(n, b)));
      CHECK(h.check_membership(Section::MemberClass::Trig));
      CHECK(!h.check_membership(Section::MemberClass::Zero));
    }
  }
}

TEST_CASE("pole order at the marked point is exactly the requested order") {
  auto sites = sites_n2_12();
  for (unsigned a = 0; a < 2; ++a)
    for (unsigned b = 0; b < 2; ++b) {
      if (a == 0 && b == 0) continue;
      for (int n = 1; n <= 4; ++n) {
        Section f = Section::trig_basis_element(sites, a, b, 0, n);
        CHECK(f.pole_order(Site::marked(0)) == n);
        CHECK(f.pole_order(Site::marked(1)) == 0);
        CHECK(f.pole_order(Site::zero()) == 0);
        CHECK(f.pole_order(Site::infinity()) == 0);
        Jet j = f.expand_at(Site::marked(0), 0);
        CHECK(j.lowest_mode() == -n);
      }
    }
  CHECK_THROWS_AS(Section::trig_basis_element(sites, 0, 0, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Section::trig_basis_element(sites, 1, 0, 0, 7),
                  std::invalid_argument);
}

TEST_CASE("constants are orb but not trig") {
  auto sites = sites_n2_11();
  Section c = Section::orb_monomial(sites, 0, 1, 0);
  CHECK(c.check_membership(Section::MemberClass::Orb));
  CHECK(!c.check_membership(Section::MemberClass::Trig));
  CHECK(*c.value_at_zero() == j_basis(2, 0, 1));
}

TEST_CASE("orb monomial expansion structure") {
  auto sites = sites_n3_1();
  // a = 0, m = 0: the constant section H_b
  Section c = Section::orb_monomial(sites, 0, 2, 0);
  Jet j0 = c.expand_at(Site::zero(), 5);
  CHECK(j0.coeff.size() == 1);
  CHECK(j0.at(0, 3) == j_basis(3, 0, 2));

  // exponent a + mN < 0 vanishes at infinity: only positive u-modes
  Section m1 = Section::orb_monomial(sites, 1, 0, -1);  // t^{-2}
  Jet ji = m1.expand_at(Site::infinity(), 5);
  CHECK(ji.lowest_mode() == 2);  // u^2
  CHECK(m1.pole_order(Site::zero()) == 2);
  CHECK(m1.pole_order(Site::infinity()) == 0);

  // N=2: J_{1,b} t^{-1}: pole order 1 at 0, zero of order 1 at infinity
  auto s2 = sites_n2_11();
  Section m2 = Section::orb_monomial(s2, 1, 1, -1);
  CHECK(m2.pole_order(Site::zero()) == 1);
  Jet j2 = m2.expand_at(Site::infinity(), 3);
  CHECK(j2.lowest_mode() == 1);

  // single coefficient at mode a + mN at the origin
  Jet jz = m2.expand_at(Site::zero(), 3);
  CHECK(jz.coeff.size() == 1);
  CHECK(jz.at(-1, 2) == j_basis(2, 1, 1));
}

TEST_CASE("twisted mode constraint at the fixed points") {
  auto sites = sites_n3_1();
  std::mt19937_64 rng(31);
  for (int it = 0; it < 10; ++it) {
    unsigned a = rng() % 3, b = rng() % 3;
    if (a == 0 && b == 0) a = 1;
    Section f = Section::trig_basis_element(sites, a, b, 0, 1 + (it % 3));
    Jet j0 = f.expand_at(Site::zero(), 7);
    for (const auto& [m, mat] : j0.coeff) {
      if (mat.is_zero()) continue;
      CHECK(((m % 3) + 3) % 3 == a % 3);
    }
    Jet ji = f.expand_at(Site::infinity(), 7);
    for (const auto& [m, mat] : ji.coeff) {
      if (mat.is_zero()) continue;
      CHECK(((m + a) % 3 + 3) % 3 == 0);  // u-modes are -a mod N
    }
  }
}

TEST_CASE("leading coefficient of the simple pole at a marked point") {
  // Residue of t^a/(t^N - t_i^N) at t_i is t_i^a / (N t_i^{N-1}).
  for (auto sites : {sites_n2_12(), sites_n3_1()}) {
    const unsigned n = sites->n;
    for (unsigned a = 1; a < n; ++a) {
      Section f = Section::trig_basis_element(sites, a, 0, 0, 1);
      Jet j = f.expand_at(Site::marked(0), -1);
      const Cyc& t1 = sites->points[0];
      Cyc tpow_a(1), tpow_n1(1);
      for (unsigned k = 0; k < a; ++k) tpow_a *= t1;
      for (unsigned k = 0; k + 1 < n; ++k) tpow_n1 *= t1;
      Cyc expected = tpow_a * (Cyc(Rational(static_cast<long>(n))) * tpow_n1).inverse();
      CHECK(j.at(-1, n) == j_basis(n, a, 0).scaled(expected));
      // numeric cross-check of the exact leading coefficient
      auto z = oracle::to_complex(expected);
      auto t1c = oracle::to_complex(t1);
      auto want = std::pow(t1c, static_cast<double>(a)) /
                  (static_cast<double>(n) * std::pow(t1c, static_cast<double>(n - 1)));
      CHECK(std::abs(z - want) < 1e-10);
    }
  }
}

TEST_CASE("expansion agrees with numeric evaluation at a regular point") {
  auto sites = sites_n2_12();
  Section f = Section::trig_basis_element(sites, 1, 1, 0, 2) +
              Section::h_section(sites, 1, 1).scaled(Cyc(Rational(1, 3)));
  // Taylor coefficients at Q_2 = 2 vs numeric differences
  Jet j = f.expand_at(Site::marked(1), 2);
  auto num = oracle::eval_section(f, std::complex<double>(2.0 + 1e-4, 0.0));
  // f(t_2 + h) ~ sum coeff_m h^m
  std::complex<double> approx[4];
  for (unsigned r = 0; r < 2; ++r)
    for (unsigned c = 0; c < 2; ++c) {
      std::complex<double> acc(0, 0);
      for (long m = j.lowest_mode(); m <= 2; ++m)
        acc += oracle::to_complex(j.at(m, 2).at(r, c)) *
               std::pow(std::complex<double>(1e-4, 0.0), static_cast<double>(m));
      approx[r * 2 + c] = acc;
      CHECK(std::abs(num[r * 2 + c] - acc) < 1e-6);
    }
}

TEST_CASE("t d/dt derivative sections vanish at both ends") {
  auto sites = sites_n2_12();
  for (unsigned b = 1; b < 2; ++b) {
    Section d = Section::h_section(sites, b, 0).t_ddt();
    CHECK(d.pole_order(Site::marked(0)) == 2);
    CHECK(d.value_at_zero()->is_zero());
    CHECK(d.value_at_infinity()->is_zero());
    CHECK(d.check_membership(Section::MemberClass::Zero));
  }
}

TEST_CASE("cocycle vanishes on gout^trig x gout^trig") {
  for (auto sites : {sites_n2_11(), sites_n2_12(), sites_n3_1()}) {
    const unsigned n = sites->n;
    std::vector<Section> basis;
    for (std::size_t i = 0; i < sites->count(); ++i)
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) {
          if (a == 0 && b == 0) continue;
          for (int ord = 1; ord <= 3; ++ord)
            basis.push_back(Section::trig_basis_element(sites, a, b, i, ord));
        }
    for (const auto& f : basis)
      for (const auto& g : basis) CHECK(cocycle_pair(f, g).is_zero());
  }
}

TEST_CASE("cocycle vanishes on gout^orb including poles at 0 and infinity") {
  for (auto sites : {sites_n2_11(), sites_n3_1()}) {
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
      for (const auto& g : basis) CHECK(cocycle_pair(f, g).is_zero());
  }
}

TEST_CASE("dropping the 1/N weight breaks orb vanishing") {
  auto sites = sites_n2_11();
  bool nonzero_found = false;
  std::vector<Section> basis;
  for (unsigned a = 0; a < 2; ++a)
    for (unsigned b = 0; b < 2; ++b) {
      if (a == 0 && b == 0) continue;
      for (long m = -2; m <= 2; ++m)
        basis.push_back(Section::orb_monomial(sites, a, b, m));
      basis.push_back(Section::trig_basis_element(sites, a, b, 0, 1));
    }
  for (const auto& f : basis)
    for (const auto& g : basis)
      if (!cocycle_pair_weighted(f, g, Cyc(1)).is_zero()) nonzero_found = true;
  CHECK(nonzero_found);
}

TEST_CASE("site-0 residue of a monomial pairing") {
  auto sites = sites_n3_1();
  const unsigned n = 3;
  for (unsigned a = 1; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      for (long m = -2; m <= 1; ++m) {
        Section f = Section::orb_monomial(sites, a, b, m);
        for (long mp = -2; mp <= 1; ++mp) {
          Section g = Section::orb_monomial(sites, n - a, n - b, mp);
          Cyc res = residue_pairing(f, g, Site::zero());
          long p = static_cast<long>(a) + m * n;
          long q = static_cast<long>(n - a) + mp * n;
          if (p + q != 0) {
            CHECK(res.is_zero());
          } else {
            // Res_0 = p tr(J_{ab} J_{-a,-b}) = p N eps^{ab}
            CHECK(res == Cyc(p) * Cyc(Rational(static_cast<long>(n))) *
                             Cyc::eps_pow(n, static_cast<long>(a) * b));
          }
        }
      }
}

TEST_CASE("cocycle antisymmetry up to exact coboundary") {
  // cocycle(f,g) + cocycle(g,f) = sum Res d(f|g) = 0.
  auto sites = sites_n2_12();
  std::mt19937_64 rng(41);
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
      CHECK((cocycle_pair(f, g) + cocycle_pair(g, f)).is_zero());
}

TEST_CASE("numeric contour residue agrees with the exact pairing") {
  auto sites = sites_n2_12();
  Section f = Section::trig_basis_element(sites, 1, 1, 0, 1);
  Section g = Section::trig_basis_element(sites, 1, 1, 0, 1);
  Cyc exact = residue_pairing(f, g, Site::marked(0));
  auto numeric = oracle::contour_residue(f, g, {1.0, 0.0}, 0.15);
  CHECK(std::abs(oracle::to_complex(exact) - numeric) < 1e-4);

  Section h = Section::orb_monomial(sites, 1, 0, -1);
  Section k = Section::orb_monomial(sites, 1, 0, 0);
  Cyc exact0 = residue_pairing(h, k, Site::zero());
  auto numeric0 = oracle::contour_residue(h, k, {0.0, 0.0}, 0.2);
  CHECK(std::abs(oracle::to_complex(exact0) - numeric0) < 1e-4);
}

TEST_CASE("decompose_gD: principal replacement and round trip") {
  auto sites = sites_n2_12();
  const int order = 3;

  // single J_{a,b} xi_1^{-1}: the trig part is the matching scaled section
  Jet x0;
  x0.site = Site::marked(0);
  x0.order = order;
  x0.coeff[-1] = j_basis(2, 1, 0);
  Jet x1;
  x1.site = Site::marked(1);
  x1.order = order;
  auto [s, pos] = decompose_gD(sites, {x0, x1}, order);
  CHECK(!s.is_zero());
  CHECK(s.check_membership(Section::MemberClass::Trig));
  // the positive parts are minus the regular tails of s
  Jet tail0 = s.expand_at(Site::marked(0), order);
  for (long m = 0; m <= order; ++m)
    CHECK(pos[0].at(m, 2) == x0.at(m, 2) - tail0.at(m, 2));

  // purely positive jets decompose trivially
  Jet p0;
  p0.site = Site::marked(0);
  p0.order = order;
  p0.coeff[0] = j_basis(2, 0, 1);
  p0.coeff[2] = j_basis(2, 1, 1);
  Jet p1;
  p1.site = Site::marked(1);
  p1.order = order;
  p1.coeff[1] = j_basis(2, 1, 0);
  auto [s2, pos2] = decompose_gD(sites, {p0, p1}, order);
  CHECK(s2.is_zero());
  for (long m = 0; m <= order; ++m) {
    CHECK(pos2[0].at(m, 2) == p0.at(m, 2));
    CHECK(pos2[1].at(m, 2) == p1.at(m, 2));
  }

  // random jets: re-expansion reconstructs the input exactly
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int it = 0; it < 25; ++it) {
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
      for (long m = -3; m <= order; ++m) {
        CMat want = jets[i].at(m, 2);
        CMat got = re.at(m, 2) + tails[i].at(m, 2);
        CHECK(want == got);
      }
      // tails carry no negative modes
      CHECK(tails[i].lowest_mode() >= 0);
    }
  }
}

TEST_CASE("decompose_gD rejects inconsistent truncations") {
  auto sites = sites_n2_12();
  Jet a;
  a.site = Site::marked(0);
  a.order = 2;
  Jet b;
  b.site = Site::marked(1);
  b.order = 3;
  CHECK_THROWS_AS(decompose_gD(sites, {a, b}, 2), std::invalid_argument);
  CHECK_THROWS_AS(decompose_gD(sites, {a}, 2), std::invalid_argument);
}

TEST_CASE("resummation: subtracting all principal parts leaves no marked poles") {
  auto sites = sites_n2_12();
  Section f = Section::trig_basis_element(sites, 1, 1, 0, 3) +
              Section::trig_basis_element(sites, 0, 1, 1, 2).scaled(Cyc(5)) +
              Section::orb_monomial(sites, 1, 0, -1);
  int order = 3;
  std::vector<Jet> jets;
  for (std::size_t i = 0; i < sites->count(); ++i)
    jets.push_back(f.expand_at(Site::marked(i), order));
  auto [s, tails] = decompose_gD(sites, jets, order);
  Section diff = f + (-s);
  CHECK(diff.pole_order(Site::marked(0)) == 0);
  CHECK(diff.pole_order(Site::marked(1)) == 0);
}

TEST_CASE("expansion at an unconfigured site is rejected") {
  auto sites = sites_n2_11();
  Section f = Section::h_section(sites, 1, 0);
  CHECK_THROWS_AS(f.expand_at(Site::marked(3), 2), std::invalid_argument);
}
