#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gbd/common.hpp"
#include "gbd/permsystem.hpp"

namespace gbd {

/// Laurent polynomial with exact rational coefficients; zero coefficients are
/// never stored.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly monomial(Rat c, long long k) {
    LaurentPoly p;
    if (c != 0) p.c_[k] = std::move(c);
    return p;
  }
  static LaurentPoly one() { return monomial(Rat(1), 0); }

  bool is_zero() const { return c_.empty(); }

  Rat coeff(long long k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Rat(0) : it->second;
  }

  const std::map<long long, Rat>& terms() const { return c_; }

  /// True for c*z^k with c != 0.
  bool is_monomial(Rat& c, long long& k) const {
    if (c_.size() != 1) return false;
    c = c_.begin()->second;
    k = c_.begin()->first;
    return true;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [k, v] : o.c_) {
      Rat& slot = c_[k];
      slot += v;
      if (slot == 0) c_.erase(k);
    }
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    a += b;
    return a;
  }

  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out = a;
    for (const auto& [k, v] : b.c_) {
      Rat& slot = out.c_[k];
      slot -= v;
      if (slot == 0) out.c_.erase(k);
    }
    return out;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ka, va] : a.c_)
      for (const auto& [kb, vb] : b.c_) {
        Rat& slot = out.c_[ka + kb];
        slot += va * vb;
        if (slot == 0) out.c_.erase(ka + kb);
      }
    return out;
  }

  LaurentPoly scaled(const Rat& c) const {
    LaurentPoly out;
    if (c == 0) return out;
    for (const auto& [k, v] : c_) out.c_[k] = v * c;
    return out;
  }

  /// Adjoint in the circle algebra: z -> z^{-1} (coefficients are real).
  LaurentPoly adjoint() const {
    LaurentPoly out;
    for (const auto& [k, v] : c_) out.c_[-k] = v;
    return out;
  }

  Rat coeff_abs_sum() const {
    Rat s = 0;
    for (const auto& [k, v] : c_) {
      (void)k;
      s += v < 0 ? -v : v;
    }
    return s;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
      if (!first) os << " + ";
      first = false;
      os << v;
      if (k != 0) os << "*z^" << k;
    }
    return os.str();
  }

 private:
  std::map<long long, Rat> c_;
};

namespace detail {

// dense rational polynomial helpers for the determinant fallback
using Poly = std::vector<Rat>;

inline Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return poly_trim(std::move(out));
}

inline Poly poly_sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rat(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return poly_trim(std::move(a));
}

/// Exact division; the remainder must vanish (fraction-free elimination
/// guarantees it does).
inline Poly poly_div_exact(Poly num, const Poly& den) {
  internal_check(!den.empty(), "polynomial division by zero");
  if (num.empty()) return {};
  internal_check(num.size() >= den.size(), "inexact polynomial division");
  Poly q(num.size() - den.size() + 1, Rat(0));
  for (size_t i = q.size(); i-- > 0;) {
    Rat c = num[i + den.size() - 1] / den.back();
    q[i] = c;
    if (c != 0)
      for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  internal_check(poly_trim(num).empty(), "inexact polynomial division");
  return poly_trim(std::move(q));
}

}  // namespace detail

/// Square matrix over LaurentPoly.
class LaurentMat {
 public:
  LaurentMat() = default;
  explicit LaurentMat(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

  static LaurentMat identity(int n) {
    LaurentMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = LaurentPoly::one();
    return m;
  }

  int dim() const { return n_; }

  LaurentPoly& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const LaurentPoly& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  LaurentMat& operator+=(const LaurentMat& o) {
    internal_check(n_ == o.n_, "block size mismatch");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  friend LaurentMat operator+(LaurentMat a, const LaurentMat& b) {
    a += b;
    return a;
  }

  friend LaurentMat operator-(const LaurentMat& a, const LaurentMat& b) {
    internal_check(a.n_ == b.n_, "block size mismatch");
    LaurentMat out(a.n_);
    for (size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] - b.a_[i];
    return out;
  }

  friend LaurentMat operator*(const LaurentMat& a, const LaurentMat& b) {
    internal_check(a.n_ == b.n_, "block size mismatch");
    LaurentMat out(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        const LaurentPoly& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < b.n_; ++j) {
          if (b(k, j).is_zero()) continue;
          out(i, j) += aik * b(k, j);
        }
      }
    return out;
  }

  LaurentMat scaled(const Rat& c) const {
    LaurentMat out(n_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i].scaled(c);
    return out;
  }

  LaurentMat adjoint() const {
    LaurentMat out(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(j, i) = (*this)(i, j).adjoint();
    return out;
  }

  friend bool operator==(const LaurentMat& a, const LaurentMat& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }
  friend bool operator!=(const LaurentMat& a, const LaurentMat& b) { return !(a == b); }

  bool is_zero() const {
    for (const auto& p : a_)
      if (!p.is_zero()) return false;
    return true;
  }

  LaurentPoly trace() const {
    LaurentPoly t;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Exact determinant. Matrices with one monomial per row and column (the
  /// generalized permutation shape every represented unitary has) are handled
  /// directly; anything else goes through fraction-free elimination over the
  /// polynomial ring after clearing negative exponents.
  LaurentPoly det() const {
    if (n_ == 0) return LaurentPoly::one();
    // generalized permutation fast path
    {
      std::vector<int> col_of(n_, -1);
      std::vector<bool> used(n_, false);
      bool perm = true;
      Rat c = 1;
      long long k = 0;
      for (int i = 0; i < n_ && perm; ++i) {
        int hits = 0;
        for (int j = 0; j < n_; ++j) {
          if ((*this)(i, j).is_zero()) continue;
          Rat mc;
          long long mk;
          if (!(*this)(i, j).is_monomial(mc, mk)) {
            perm = false;
            break;
          }
          ++hits;
          if (hits > 1) {
            perm = false;
            break;
          }
          col_of[i] = j;
          c *= mc;
          k += mk;
        }
        if (hits != 1) perm = false;
        if (perm) {
          if (used[col_of[i]]) perm = false;
          else used[col_of[i]] = true;
        }
      }
      if (perm) {
        // parity of the column permutation
        std::vector<int> p = col_of;
        int sign = 1;
        std::vector<bool> seen(n_, false);
        for (int i = 0; i < n_; ++i) {
          if (seen[i]) continue;
          int len = 0, j = i;
          while (!seen[j]) {
            seen[j] = true;
            j = p[j];
            ++len;
          }
          if (len % 2 == 0) sign = -sign;
        }
        return LaurentPoly::monomial(sign > 0 ? c : -c, k);
      }
    }
    // shift rows to ordinary polynomials, track the total shift
    long long shift = 0;
    std::vector<std::vector<detail::Poly>> m(n_, std::vector<detail::Poly>(n_));
    for (int i = 0; i < n_; ++i) {
      long long low = 0;
      for (int j = 0; j < n_; ++j)
        for (const auto& [k, v] : (*this)(i, j).terms()) {
          (void)v;
          low = std::min(low, k);
        }
      shift += low;
      for (int j = 0; j < n_; ++j) {
        const auto& terms = (*this)(i, j).terms();
        detail::Poly p;
        for (const auto& [k, v] : terms) {
          size_t ix = static_cast<size_t>(k - low);
          if (p.size() <= ix) p.resize(ix + 1, Rat(0));
          p[ix] = v;
        }
        m[i][j] = detail::poly_trim(std::move(p));
      }
    }
    // fraction-free elimination
    detail::Poly prev{Rat(1)};
    int sign = 1;
    for (int k = 0; k < n_ - 1; ++k) {
      if (m[k][k].empty()) {
        int p = -1;
        for (int i = k + 1; i < n_; ++i)
          if (!m[i][k].empty()) {
            p = i;
            break;
          }
        if (p < 0) return LaurentPoly();
        std::swap(m[k], m[p]);
        sign = -sign;
      }
      for (int i = k + 1; i < n_; ++i)
        for (int j = k + 1; j < n_; ++j) {
          detail::Poly t = detail::poly_sub(detail::poly_mul(m[i][j], m[k][k]),
                                            detail::poly_mul(m[i][k], m[k][j]));
          m[i][j] = detail::poly_div_exact(std::move(t), prev);
        }
      prev = m[k][k];
    }
    detail::Poly d = m[n_ - 1][n_ - 1];
    LaurentPoly out;
    for (size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0)
        out += LaurentPoly::monomial(sign > 0 ? d[i] : -d[i], static_cast<long long>(i) + shift);
    return out;
  }

 private:
  int n_ = 0;
  std::vector<LaurentPoly> a_;
};

/// The permutation embedding on block matrices: z goes to the z-weighted
/// permutation matrix of sigma, constants are copied along the diagonal.
/// Index order is letter-major: row l*n + p.
inline LaurentMat psi_sigma(const Perm& sigma, const LaurentMat& f) {
  int m = sigma.size();
  int n = f.dim();
  LaurentMat w(m * n);
  for (int l = 0; l < m; ++l)
    for (int p = 0; p < n; ++p) w(l * n + p, sigma(l) * n + p) = LaurentPoly::monomial(Rat(1), 1);
  LaurentMat winv = w.adjoint();
  LaurentMat out(m * n);
  // split f into monomial layers and transport each through w^k
  std::map<long long, LaurentMat> layers;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& [k, v] : f(i, j).terms()) {
        auto it = layers.find(k);
        if (it == layers.end()) it = layers.emplace(k, LaurentMat(n)).first;
        it->second(i, j) += LaurentPoly::monomial(v, 0);
      }
  for (const auto& [k, layer] : layers) {
    LaurentMat amp(m * n);
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) amp(l * n + i, l * n + j) = layer(i, j);
    LaurentMat power = LaurentMat::identity(m * n);
    for (long long t = 0; t < (k >= 0 ? k : -k); ++t) power = power * (k >= 0 ? w : winv);
    out += power * amp;
  }
  return out;
}

}  // namespace gbd
