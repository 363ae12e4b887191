#pragma once

#include <map>
#include <utility>
#include <vector>

#include "factorlab/matrix.hpp"

namespace factorlab {

// sl_N over Q(eps_N) in the twisted basis J_{ab} = beta^a gamma^{-b}.
// gamma beta = eps beta gamma, so Ad(gamma) and Ad(beta) act diagonally on
// the J basis with eigenvalues eps^a and eps^b.

CMat make_beta(unsigned n);   // cyclic shift: ones on the superdiagonal and lower-left corner
CMat make_gamma(unsigned n);  // diag(1, eps^{-1}, ..., eps^{1-N})
std::pair<CMat, CMat> make_beta_gamma(unsigned n);

// J_{ab} = beta^a gamma^{-b}; indices reduced mod N. The N^2 - 1 matrices
// with (a,b) != (0,0) form a basis of sl_N.
CMat j_basis(unsigned n, long a, long b);

enum class TwistAuto { Beta, Gamma };
// Conjugation g X g^{-1} for g in {beta, gamma}.
CMat ad_auto(unsigned n, TwistAuto which, const CMat& x);

// tr(AB), the invariant form fixed for g.
Cyc inner(const CMat& a, const CMat& b);
// (1/2N) tr_g(ad A ad B) over the J basis; coincides with inner().
Cyc adjoint_trace_inner(unsigned n, const CMat& a, const CMat& b);

CMat commutator(const CMat& a, const CMat& b);

// Exact coefficients of X in the J basis, keyed by (a,b); includes (0,0)
// when X has a trace component.
std::map<std::pair<unsigned, unsigned>, Cyc> j_coefficients(unsigned n,
                                                            const CMat& x);

// Functional on the Cartan h = span{H_b = J_{0,b}}, stored by its values
// values[b-1] = lambda(H_b), b = 1..N-1.
struct Weight {
  std::vector<Cyc> values;

  bool operator==(const Weight& rhs) const { return values == rhs.values; }
  bool operator<(const Weight& rhs) const;
  Weight operator+(const Weight& rhs) const;
  Weight operator-(const Weight& rhs) const;
  Weight operator-() const;
  bool is_zero() const;
  std::string to_string() const;
};

// The desingularisation weights: tilde(lambda)(H_b) = eps^b/(1-eps^b) l_b and
// tilde'(lambda)(H_b) = -l_b/(1-eps^b), so tilde + tilde' = -lambda.
std::pair<Weight, Weight> tilde_weights(unsigned n, const Weight& lambda);

// Finite-dimensional g-module given by representation matrices in the J
// basis. Built-in constructors cover the defining representation, its dual
// and tensor products; those track exact candidate eigenvalues for the H_b,
// which keeps the weight decomposition characteristic-polynomial-free.
struct FinRep {
  unsigned n = 0;
  std::size_t dim = 0;
  std::vector<CMat> mats;                        // index a * n + b; (0,0) unused
  std::vector<std::vector<Cyc>> h_candidates;    // per b = 1..N-1
  std::string label;

  static FinRep defining(unsigned n);
  static FinRep dual(const FinRep& v);
  static FinRep tensor(const FinRep& v, const FinRep& w);

  const CMat& mat(unsigned a, unsigned b) const { return mats[a * n + b]; }
  // rho(H_b) for b in 1..N-1.
  const CMat& cartan(unsigned b) const { return mat(0, b); }
};

struct WeightSpace {
  Weight weight;
  std::size_t multiplicity = 0;
  CMat basis;  // dim x multiplicity, columns span the joint eigenspace
};

// Joint eigenspace decomposition of V under {H_b}. Rejects inputs whose
// Cartan matrices fail to commute or to split over the candidate values.
std::vector<WeightSpace> weight_decompose(const FinRep& v);

}  // namespace factorlab
