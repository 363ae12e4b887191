#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "factorlab/cyclotomic.hpp"
#include "numeric_oracle.hpp"

using namespace factorlab;

namespace {

Cyc random_cyc(unsigned n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::vector<Rational> c(n);
  for (auto& x : c) {
    Rational r(num(rng), den(rng));
    r.canonicalize();
    x = r;
  }
  return Cyc::make(n, std::move(c));
}

}  // namespace

TEST_CASE("cyc_make canonical forms") {
  CHECK(Cyc::make(5, {Rational(1)}) == Cyc(1));
  // N=2: eps = -1
  CHECK(Cyc::make(2, {Rational(0), Rational(1)}) == Cyc(-1));
  // sum of all N-th roots of unity vanishes
  for (unsigned n = 2; n <= 8; ++n) {
    std::vector<Rational> ones(n, Rational(1));
    CHECK(Cyc::make(n, std::move(ones)).is_zero());
  }
}

TEST_CASE("eps_pow basics") {
  CHECK(Cyc::eps_pow(5, 0) == Cyc(1));
  CHECK(Cyc::eps_pow(2, 1) == Cyc(-1));
  CHECK(Cyc::eps_pow(4, 2) == Cyc(-1));  // i^2 = -1
  // numeric cross-check before trusting canonical reduction
  auto z = oracle::to_complex(Cyc::eps_pow(4, 2));
  CHECK(std::abs(z - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("primitive cube root identity 1 + e + e^2 = 0") {
  Cyc e = Cyc::eps_pow(3, 1);
  Cyc e2 = Cyc::eps_pow(3, 2);
  auto z = oracle::to_complex(e + e2);
  CHECK(std::abs(z - std::complex<double>(-1.0, 0.0)) < 1e-12);
  CHECK(e + e2 == Cyc(-1));
}

TEST_CASE("root-of-unity inverses") {
  for (unsigned n = 2; n <= 6; ++n)
    for (long a = 0; a < static_cast<long>(n); ++a) {
      CHECK(Cyc::eps_pow(n, a) * Cyc::eps_pow(n, n - a) == Cyc(1));
      CHECK(Cyc::eps_pow(n, a).inverse() == Cyc::eps_pow(n, -a));
    }
}

TEST_CASE("eps_pow is a homomorphism of order exactly N") {
  for (unsigned n = 2; n <= 6; ++n) {
    for (long a = 0; a < static_cast<long>(n); ++a)
      for (long b = 0; b < static_cast<long>(n); ++b)
        CHECK(Cyc::eps_pow(n, a) * Cyc::eps_pow(n, b) == Cyc::eps_pow(n, a + b));
    Cyc acc(1);
    for (long k = 1; k < static_cast<long>(n); ++k) {
      acc *= Cyc::eps_pow(n, 1);
      CHECK(acc != Cyc(1));  // order not smaller than N
    }
    acc *= Cyc::eps_pow(n, 1);
    CHECK(acc == Cyc(1));
  }
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(20260810);
  for (unsigned n : {2u, 3u, 4u, 5u, 6u}) {
    for (int iter = 0; iter < 200; ++iter) {
      Cyc x = random_cyc(n, rng), y = random_cyc(n, rng), z = random_cyc(n, rng);
      CHECK((x + y) + z == x + (y + z));
      CHECK((x * y) * z == x * (y * z));
      CHECK(x + y == y + x);
      CHECK(x * y == y * x);
      CHECK(x * (y + z) == x * y + x * z);
    }
  }
}

TEST_CASE("multiplicative inverses on random nonzero values") {
  std::mt19937_64 rng(987654);
  int done = 0;
  while (done < 500) {
    unsigned n = 2 + static_cast<unsigned>(rng() % 5);
    Cyc x = random_cyc(n, rng);
    if (x.is_zero()) continue;
    CHECK(x * x.inverse() == Cyc(1));
    ++done;
  }
}

TEST_CASE("division by zero is a distinct error") {
  CHECK_THROWS_AS(Cyc(0).inverse(), CycDivisionByZero);
  CHECK_THROWS_AS((Cyc::eps_pow(3, 1) - Cyc::eps_pow(3, 1)).inverse(),
                  CycDivisionByZero);
}

TEST_CASE("mixing two extensions is rejected, rationals embed") {
  Cyc a = Cyc::eps_pow(3, 1);
  Cyc b = Cyc::eps_pow(4, 1);
  CHECK_THROWS_AS(a + b, CycFieldMismatch);
  CHECK(a * Cyc(Rational(2, 3)) == Cyc(Rational(2, 3)) * a);
}

TEST_CASE("coefficient array access keeps length N") {
  Cyc x = Cyc::eps_pow(6, 5);
  CHECK(x.coeffs().size() == 6);
  Cyc y = Cyc::make(6, {Rational(1), Rational(2)});
  CHECK(y.coeffs().size() == 6);
}
