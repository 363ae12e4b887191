#pragma once

#include <map>
#include <stdexcept>

#include "factorlab/cyclotomic.hpp"

namespace factorlab {

// Truncated Laurent series over Q(eps) in one local coordinate. Coefficients
// are exact; `hi` records the last exponent the series is valid at, so
// arithmetic never silently uses coefficients beyond the truncation.
struct Series {
  std::map<long, Cyc> c;
  long hi = 0;  // valid window is (-inf, hi]; entries above hi are dropped

  static Series zero(long hi) {
    Series s;
    s.hi = hi;
    return s;
  }

  static Series constant(const Cyc& v, long hi) {
    Series s;
    s.hi = hi;
    if (!v.is_zero() && hi >= 0) s.c[0] = v;
    return s;
  }

  static Series monomial(const Cyc& v, long e, long hi) {
    Series s;
    s.hi = hi;
    if (!v.is_zero() && e <= hi) s.c[e] = v;
    return s;
  }

  Cyc coeff(long e) const {
    if (e > hi) throw std::out_of_range("series: coefficient beyond truncation");
    auto it = c.find(e);
    return it == c.end() ? Cyc() : it->second;
  }

  long valuation() const {  // lowest nonzero exponent; hi+1 if zero
    for (const auto& [e, v] : c)
      if (!v.is_zero()) return e;
    return hi + 1;
  }

  Series& prune() {
    for (auto it = c.begin(); it != c.end();)
      it = (it->second.is_zero() || it->first > hi) ? c.erase(it) : ++it;
    return *this;
  }

  Series operator+(const Series& rhs) const {
    Series out;
    out.hi = std::min(hi, rhs.hi);
    out.c = c;
    for (const auto& [e, v] : rhs.c) out.c[e] += v;
    return out.prune();
  }

  Series scaled(const Cyc& f) const {
    Series out(*this);
    for (auto& [e, v] : out.c) v *= f;
    return out.prune();
  }

  Series operator*(const Series& rhs) const {
    // If a is exact on (-inf, a.hi] with valuation va, the product is exact
    // on (-inf, min(a.hi + vb, b.hi + va)].
    long va = valuation(), vb = rhs.valuation();
    Series out;
    out.hi = std::min(hi + vb, rhs.hi + va);
    for (const auto& [e1, v1] : c)
      for (const auto& [e2, v2] : rhs.c) {
        long e = e1 + e2;
        if (e <= out.hi) out.c[e] += v1 * v2;
      }
    return out.prune();
  }

  // Inverse of a series with nonzero leading coefficient: factor out x^v and
  // invert the unit by the standard recursion.
  Series inverse() const {
    long v = valuation();
    if (v > hi) throw CycDivisionByZero();
    Cyc lead = coeff(v);
    long terms = hi - v;  // unit known to order x^terms
    Series inv;
    inv.hi = -v + terms;
    Cyc lead_inv = lead.inverse();
    // u = lead * (1 + r), inv(u) = lead_inv * sum (-r)^k; computed by
    // back-substitution on coefficients.
    std::map<long, Cyc> b;  // coefficients of the inverse of the unit part
    b[0] = lead_inv;
    for (long k = 1; k <= terms; ++k) {
      Cyc acc;
      for (long j = 0; j < k; ++j) {
        auto itb = b.find(j);
        if (itb == b.end()) continue;
        Cyc a_kj = coeff(v + (k - j));
        if (!a_kj.is_zero()) acc += itb->second * a_kj;
      }
      Cyc val = -lead_inv * acc;
      if (!val.is_zero()) b[k] = val;
    }
    for (const auto& [e, val] : b) inv.c[e - v] = val;
    return inv.prune();
  }

  Series pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    if (k == 0) return constant(Cyc(1), hi);
    Series result = *this;
    for (long i = 1; i < k; ++i) result = result * *this;
    return result;
  }
};

}  // namespace factorlab
