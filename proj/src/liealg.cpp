#include "factorlab/liealg.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace factorlab {

CMat make_beta(unsigned n) {
  if (n < 2) throw std::invalid_argument("liealg: N must be >= 2");
  CMat b(n, n);
  for (unsigned i = 0; i + 1 < n; ++i) b.at(i, i + 1) = Cyc(1);
  b.at(n - 1, 0) = Cyc(1);
  return b;
}

CMat make_gamma(unsigned n) {
  if (n < 2) throw std::invalid_argument("liealg: N must be >= 2");
  CMat g(n, n);
  for (unsigned i = 0; i < n; ++i)
    g.at(i, i) = Cyc::eps_pow(n, -static_cast<long>(i));
  return g;
}

std::pair<CMat, CMat> make_beta_gamma(unsigned n) {
  return {make_beta(n), make_gamma(n)};
}

CMat j_basis(unsigned n, long a, long b) {
  long am = ((a % static_cast<long>(n)) + n) % n;
  long bm = ((b % static_cast<long>(n)) + n) % n;
  static std::map<std::tuple<unsigned, long, long>, CMat> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, am, bm);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // beta^a gamma^{-b} entrywise: row i maps to column i+a, with the
  // gamma^{-b} diagonal eps^{jb} at column j.
  CMat m(n, n);
  for (unsigned i = 0; i < n; ++i) {
    unsigned j = (i + static_cast<unsigned>(am)) % n;
    m.at(i, j) = Cyc::eps_pow(n, static_cast<long>(j) * bm);
  }
  return cache.emplace(key, std::move(m)).first->second;
}

CMat ad_auto(unsigned n, TwistAuto which, const CMat& x) {
  // beta = J_{1,0}, beta^{-1} = J_{-1,0}; gamma = J_{0,-1}, gamma^{-1} = J_{0,1}.
  CMat g = (which == TwistAuto::Beta) ? make_beta(n) : make_gamma(n);
  CMat ginv = (which == TwistAuto::Beta) ? j_basis(n, -1, 0) : j_basis(n, 0, 1);
  return g * x * ginv;
}

Cyc inner(const CMat& a, const CMat& b) { return (a * b).trace(); }

namespace {

std::vector<std::pair<unsigned, unsigned>> sl_basis_indices(unsigned n) {
  std::vector<std::pair<unsigned, unsigned>> idx;
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      if (a != 0 || b != 0) idx.emplace_back(a, b);
  return idx;
}

}  // namespace

Cyc adjoint_trace_inner(unsigned n, const CMat& a, const CMat& b) {
  // Build ad(a) ad(b) columnwise in the J basis and take the trace.
  auto idx = sl_basis_indices(n);
  Cyc total;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    CMat col = commutator(a, commutator(b, j_basis(n, idx[k].first, idx[k].second)));
    auto coeffs = j_coefficients(n, col);
    auto it = coeffs.find(idx[k]);
    if (it != coeffs.end()) total += it->second;
  }
  return total * Cyc(Rational(1, 2 * static_cast<long>(n)));
}

CMat commutator(const CMat& a, const CMat& b) { return a * b - b * a; }

std::map<std::pair<unsigned, unsigned>, Cyc> j_coefficients(unsigned n,
                                                            const CMat& x) {
  // tr(X J_{-a,-b}) = N eps^{ab} x_{ab}. The trace needs only the single
  // nonzero entry per row of J_{c,d}: (J_{c,d})_{k,j} = delta_{j,k+c} eps^{jd}.
  std::map<std::pair<unsigned, unsigned>, Cyc> out;
  Cyc invN = Cyc(Rational(1, static_cast<long>(n)));
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b) {
      long c = (static_cast<long>(n) - a) % n;
      long d = (static_cast<long>(n) - b) % n;
      Cyc t;
      for (unsigned k = 0; k < n; ++k) {
        unsigned j = (k + static_cast<unsigned>(c)) % n;
        const Cyc& xe = x.at(j, k);
        if (xe.is_zero()) continue;
        t += xe * Cyc::eps_pow(n, static_cast<long>(j) * d);
      }
      if (t.is_zero()) continue;
      Cyc coeff = t * Cyc::eps_pow(n, -static_cast<long>(a) * static_cast<long>(b)) * invN;
      if (!coeff.is_zero()) out[{a, b}] = coeff;
    }
  return out;
}

bool Weight::operator<(const Weight& rhs) const {
  if (values.size() != rhs.values.size())
    return values.size() < rhs.values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    int c = values[i].cmp(rhs.values[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

Weight Weight::operator+(const Weight& rhs) const {
  Weight out(*this);
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] += rhs.values[i];
  return out;
}

Weight Weight::operator-(const Weight& rhs) const { return *this + (-rhs); }

Weight Weight::operator-() const {
  Weight out(*this);
  for (auto& v : out.values) v = -v;
  return out;
}

bool Weight::is_zero() const {
  for (const auto& v : values)
    if (!v.is_zero()) return false;
  return true;
}

std::string Weight::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ", ";
    os << values[i].to_string();
  }
  os << ")";
  return os.str();
}

std::pair<Weight, Weight> tilde_weights(unsigned n, const Weight& lambda) {
  if (lambda.values.size() + 1 != n)
    throw std::invalid_argument("tilde_weights: weight has wrong length");
  Weight t, tp;
  t.values.resize(n - 1);
  tp.values.resize(n - 1);
  for (unsigned b = 1; b < n; ++b) {
    // Ad(beta) H_b = eps^b H_b and eps^b != 1, so 1 - Ad(beta^{\pm 1}) is
    // invertible on h.
    Cyc eb = Cyc::eps_pow(n, b);
    Cyc denom = (Cyc(1) - eb).inverse();
    t.values[b - 1] = eb * denom * lambda.values[b - 1];
    tp.values[b - 1] = -denom * lambda.values[b - 1];
  }
  return {t, tp};
}

FinRep FinRep::defining(unsigned n) {
  FinRep v;
  v.n = n;
  v.dim = n;
  v.label = "def";
  v.mats.resize(n * n);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      if (a != 0 || b != 0) v.mats[a * n + b] = j_basis(n, a, b);
  v.h_candidates.resize(n - 1);
  for (unsigned b = 1; b < n; ++b)
    for (unsigned j = 0; j < n; ++j)
      v.h_candidates[b - 1].push_back(
          Cyc::eps_pow(n, static_cast<long>(j) * b));
  return v;
}

FinRep FinRep::dual(const FinRep& w) {
  FinRep v;
  v.n = w.n;
  v.dim = w.dim;
  v.label = w.label == "def" ? "dual" : "dual(" + w.label + ")";
  v.mats.resize(w.n * w.n);
  for (unsigned a = 0; a < w.n; ++a)
    for (unsigned b = 0; b < w.n; ++b)
      if (a != 0 || b != 0)
        v.mats[a * w.n + b] = w.mat(a, b).transpose().scaled(Cyc(-1));
  v.h_candidates.resize(w.n - 1);
  for (unsigned b = 1; b < w.n; ++b)
    for (const auto& c : w.h_candidates[b - 1])
      v.h_candidates[b - 1].push_back(-c);
  return v;
}

FinRep FinRep::tensor(const FinRep& v, const FinRep& w) {
  if (v.n != w.n) throw std::invalid_argument("tensor: rank mismatch");
  FinRep t;
  t.n = v.n;
  t.dim = v.dim * w.dim;
  t.label = v.label + "*" + w.label;
  t.mats.resize(t.n * t.n);
  for (unsigned a = 0; a < t.n; ++a)
    for (unsigned b = 0; b < t.n; ++b) {
      if (a == 0 && b == 0) continue;
      CMat m(t.dim, t.dim);
      const CMat& mv = v.mat(a, b);
      const CMat& mw = w.mat(a, b);
      // rho(X) = rho_v(X) (x) 1 + 1 (x) rho_w(X)
      for (std::size_t i = 0; i < v.dim; ++i)
        for (std::size_t j = 0; j < v.dim; ++j) {
          if (mv.at(i, j).is_zero()) continue;
          for (std::size_t k = 0; k < w.dim; ++k)
            m.at(i * w.dim + k, j * w.dim + k) += mv.at(i, j);
        }
      for (std::size_t k = 0; k < w.dim; ++k)
        for (std::size_t l = 0; l < w.dim; ++l) {
          if (mw.at(k, l).is_zero()) continue;
          for (std::size_t i = 0; i < v.dim; ++i)
            m.at(i * w.dim + k, i * w.dim + l) += mw.at(k, l);
        }
      t.mats[a * t.n + b] = std::move(m);
    }
  t.h_candidates.resize(t.n - 1);
  for (unsigned b = 1; b < t.n; ++b) {
    std::set<Cyc> seen;
    for (const auto& cv : v.h_candidates[b - 1])
      for (const auto& cw : w.h_candidates[b - 1]) seen.insert(cv + cw);
    t.h_candidates[b - 1].assign(seen.begin(), seen.end());
  }
  return t;
}

std::vector<WeightSpace> weight_decompose(const FinRep& v) {
  const unsigned n = v.n;
  for (unsigned b = 1; b < n; ++b)
    for (unsigned c = b + 1; c < n; ++c)
      if (!commutator(v.cartan(b), v.cartan(c)).is_zero())
        throw std::invalid_argument(
            "weight_decompose: Cartan matrices do not commute");

  struct Block {
    std::vector<Cyc> partial;  // eigenvalues fixed so far
    CMat basis;                // dim x k
  };
  std::vector<Block> blocks{{{}, CMat::identity(v.dim)}};

  for (unsigned b = 1; b < n; ++b) {
    std::vector<Block> next;
    for (auto& blk : blocks) {
      std::size_t covered = 0;
      std::set<Cyc> cands(v.h_candidates[b - 1].begin(),
                          v.h_candidates[b - 1].end());
      for (const auto& c : cands) {
        // Solve (H_b - c) B x = 0 for coordinates x in the block.
        CMat hb = v.cartan(b);
        CMat shifted = hb * blk.basis - blk.basis.scaled(c);
        CMat ker = shifted.kernel();
        if (ker.cols() == 0) continue;
        Block sub;
        sub.partial = blk.partial;
        sub.partial.push_back(c);
        sub.basis = blk.basis * ker;
        covered += ker.cols();
        next.push_back(std::move(sub));
      }
      if (covered != blk.basis.cols())
        throw std::invalid_argument(
            "weight_decompose: module does not split over candidate "
            "eigenvalues (not simultaneously diagonalizable over Q(eps))");
    }
    blocks = std::move(next);
  }

  std::vector<WeightSpace> out;
  for (auto& blk : blocks) {
    WeightSpace ws;
    ws.weight.values = blk.partial;
    ws.multiplicity = blk.basis.cols();
    ws.basis = blk.basis;
    out.push_back(std::move(ws));
  }
  std::sort(out.begin(), out.end(),
            [](const WeightSpace& a, const WeightSpace& b) {
              return a.weight < b.weight;
            });
  return out;
}

}  // namespace factorlab
