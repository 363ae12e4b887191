#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "factorlab/rational.hpp"

namespace factorlab {

struct CycDivisionByZero : std::domain_error {
  CycDivisionByZero() : std::domain_error("cyclotomic: division by zero") {}
};

struct CycFieldMismatch : std::domain_error {
  CycFieldMismatch()
      : std::domain_error("cyclotomic: operands from different fields") {}
};

// Coefficients of the N-th cyclotomic polynomial Phi_N, ascending degree,
// monic, exact. Memoised per N.
const std::vector<Rational>& cyclotomic_polynomial(unsigned n);

// Exact element of Q(eps_N), eps_N = exp(2*pi*i/N).
//
// The value is a polynomial in eps_N with rational coefficients, kept in
// canonical form: the residue modulo Phi_N, zero-padded to length N. Two
// values are equal iff their canonical coefficient arrays are equal.
// conductor() == 1 marks a plain rational, which embeds into every Q(eps_N);
// binary operations promote rationals but reject mixing two conductors >= 2.
//
// Values are immutable after construction and safe to share across threads.
class Cyc {
 public:
  Cyc() : n_(1), coeffs_(1, Rational(0)) {}
  /* implicit */ Cyc(const Rational& r) : n_(1), coeffs_(1, r) {}
  /* implicit */ Cyc(long v) : n_(1), coeffs_(1, Rational(v)) {}

  // Sum of coeffs[a] * eps_N^a; shorter arrays are zero-padded, longer ones
  // rejected. Result is canonical.
  static Cyc make(unsigned n, std::vector<Rational> coeffs);

  // eps_N^a, exponent reduced mod N.
  static Cyc eps_pow(unsigned n, long a);

  unsigned conductor() const { return n_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;
  // Valid only when is_rational().
  Rational rational_value() const;

  Cyc operator-() const;
  Cyc operator+(const Cyc& rhs) const;
  Cyc operator-(const Cyc& rhs) const;
  Cyc operator*(const Cyc& rhs) const;
  Cyc& operator+=(const Cyc& rhs) { return *this = *this + rhs; }
  Cyc& operator-=(const Cyc& rhs) { return *this = *this - rhs; }
  Cyc& operator*=(const Cyc& rhs) { return *this = *this * rhs; }

  // Multiplicative inverse; throws CycDivisionByZero on zero.
  Cyc inverse() const;
  Cyc operator/(const Cyc& rhs) const { return *this * rhs.inverse(); }

  bool operator==(const Cyc& rhs) const;
  bool operator!=(const Cyc& rhs) const { return !(*this == rhs); }

  // Total order on (conductor, canonical coefficients); used for map keys,
  // not mathematically meaningful.
  int cmp(const Cyc& rhs) const;
  bool operator<(const Cyc& rhs) const { return cmp(rhs) < 0; }

  std::string to_string() const;

 private:
  Cyc(unsigned n, std::vector<Rational> canonical)
      : n_(n), coeffs_(std::move(canonical)) {}
  // Lifts a rational into Q(eps_N) or checks conductor compatibility.
  static void align(const Cyc& a, const Cyc& b, Cyc& ap, Cyc& bp);
  void reduce();

  unsigned n_;
  std::vector<Rational> coeffs_;
};

inline Cyc operator*(const Rational& r, const Cyc& x) { return Cyc(r) * x; }
inline Cyc operator*(long v, const Cyc& x) { return Cyc(v) * x; }

}  // namespace factorlab
