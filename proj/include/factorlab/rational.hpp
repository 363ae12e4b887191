#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace factorlab {

// Exact rational scalar. All core arithmetic in the library is exact;
// there is no floating point outside the test-only numeric oracles.
using Rational = mpq_class;
using BigInt = mpz_class;

// Parses "p", "-p" or "p/q" (q > 0 after canonicalisation). Returns
// nullopt on malformed input instead of throwing.
std::optional<Rational> parse_rational(const std::string& text);

std::string rational_to_string(const Rational& r);

}  // namespace factorlab
