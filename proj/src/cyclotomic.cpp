#include "factorlab/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace factorlab {

namespace {

using Poly = std::vector<Rational>;  // ascending degree

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

// Remainder of a modulo monic-leading b (exact division over Q).
Poly rem(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational q = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= q * b[j];
    trim(a);
  }
  return a;
}

Poly quotient(Poly a, const Poly& b) {
  trim(a);
  if (a.size() < b.size()) return {};
  Poly q(a.size() - b.size() + 1, Rational(0));
  while (a.size() >= b.size() && !a.empty()) {
    Rational c = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    trim(a);
  }
  return q;
}

}  // namespace

const std::vector<Rational>& cyclotomic_polynomial(unsigned n) {
  static std::map<unsigned, Poly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed bottom-up.
  for (unsigned m = 1; m <= n; ++m) {
    if (cache.count(m) || n % m != 0) continue;
    Poly xm1(m + 1, Rational(0));
    xm1[0] = Rational(-1);
    xm1[m] = Rational(1);
    Poly phi = xm1;
    for (unsigned d = 1; d < m; ++d)
      if (m % d == 0) phi = quotient(phi, cache.at(d));
    cache.emplace(m, std::move(phi));
  }
  return cache.at(n);
}

void Cyc::reduce() {
  if (n_ == 1) {
    coeffs_.resize(1, Rational(0));
    return;
  }
  Poly r = rem(coeffs_, cyclotomic_polynomial(n_));
  r.resize(n_, Rational(0));
  coeffs_ = std::move(r);
}

Cyc Cyc::make(unsigned n, std::vector<Rational> coeffs) {
  if (n < 1) throw std::invalid_argument("cyclotomic: order must be >= 1");
  if (coeffs.size() > n)
    throw std::invalid_argument("cyclotomic: coefficient array longer than N");
  coeffs.resize(n, Rational(0));
  Cyc x(n, std::move(coeffs));
  x.reduce();
  return x;
}

Cyc Cyc::eps_pow(unsigned n, long a) {
  long m = a % static_cast<long>(n);
  if (m < 0) m += n;
  std::vector<Rational> c(n, Rational(0));
  c[static_cast<std::size_t>(m)] = Rational(1);
  return make(n, std::move(c));
}

bool Cyc::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool Cyc::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

Rational Cyc::rational_value() const {
  if (!is_rational())
    throw std::domain_error("cyclotomic: value is not rational");
  return coeffs_[0];
}

void Cyc::align(const Cyc& a, const Cyc& b, Cyc& ap, Cyc& bp) {
  if (a.n_ == b.n_) {
    ap = a;
    bp = b;
    return;
  }
  if (a.n_ == 1) {
    std::vector<Rational> c(b.n_, Rational(0));
    c[0] = a.coeffs_[0];
    ap = Cyc(b.n_, std::move(c));
    bp = b;
    return;
  }
  if (b.n_ == 1) {
    std::vector<Rational> c(a.n_, Rational(0));
    c[0] = b.coeffs_[0];
    ap = a;
    bp = Cyc(a.n_, std::move(c));
    return;
  }
  throw CycFieldMismatch();
}

Cyc Cyc::operator-() const {
  Cyc out(*this);
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Cyc Cyc::operator+(const Cyc& rhs) const {
  Cyc a, b;
  align(*this, rhs, a, b);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    a.coeffs_[i] += b.coeffs_[i];
  return a;  // sum of canonical forms stays within degree bound
}

Cyc Cyc::operator-(const Cyc& rhs) const { return *this + (-rhs); }

Cyc Cyc::operator*(const Cyc& rhs) const {
  // Degree-zero factors just scale coefficients; no reduction needed.
  if (is_rational()) {
    if (coeffs_[0] == 0) return Cyc(rhs.n_, Poly(rhs.n_, Rational(0)));
    Cyc out(rhs);
    for (auto& c : out.coeffs_) c *= coeffs_[0];
    return out;
  }
  if (rhs.is_rational()) return rhs * *this;
  Cyc a, b;
  align(*this, rhs, a, b);
  Poly prod = mul(a.coeffs_, b.coeffs_);
  prod.resize(std::max<std::size_t>(prod.size(), a.n_), Rational(0));
  Cyc out(a.n_, std::move(prod));
  out.reduce();
  return out;
}

Cyc Cyc::inverse() const {
  if (is_zero()) throw CycDivisionByZero();
  if (n_ == 1) return Cyc(Rational(1) / coeffs_[0]);
  // Extended Euclid in Q[x]: u * this + v * Phi_n = gcd = nonzero constant,
  // since Phi_n is irreducible over Q.
  Poly r0 = cyclotomic_polynomial(n_);
  Poly r1 = coeffs_;
  trim(r1);
  Poly s0 = {}, s1 = {Rational(1)};  // coefficients of `this`
  while (true) {
    trim(r1);
    if (r1.size() == 1) break;  // nonzero constant remainder
    Poly q = quotient(r0, r1);
    Poly r2 = rem(r0, r1);
    // s2 = s0 - q * s1
    Poly qs = mul(q, s1);
    Poly s2 = s0;
    s2.resize(std::max(s2.size(), qs.size()), Rational(0));
    for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
    trim(s2);
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  Rational g = r1[0];
  for (auto& c : s1) c /= g;
  s1.resize(n_, Rational(0));
  Cyc out(n_, std::move(s1));
  out.reduce();
  return out;
}

bool Cyc::operator==(const Cyc& rhs) const {
  Cyc a, b;
  align(*this, rhs, a, b);
  return a.coeffs_ == b.coeffs_;
}

int Cyc::cmp(const Cyc& rhs) const {
  Cyc a, b;
  align(*this, rhs, a, b);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    int c = ::cmp(a.coeffs_[i], b.coeffs_[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::string Cyc::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t a = 0; a < coeffs_.size(); ++a) {
    if (coeffs_[a] == 0) continue;
    Rational c = coeffs_[a];
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    if (a == 0) {
      os << rational_to_string(c);
    } else {
      if (c != 1) os << rational_to_string(c) << "*";
      os << "e(" << a << ")";
    }
  }
  return os.str();
}

}  // namespace factorlab
