#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <string>

#include "gbd/common.hpp"

namespace gbd {

/// Probability measure on the circle: a Lebesgue component plus finitely many
/// point masses at rational angles (reduced fractions in [0, 1)). This class
/// is closed under the rotation-averaging operators and has exact total
/// variation distances.
class CircleMeasure {
 public:
  CircleMeasure() = default;

  static CircleMeasure lebesgue() {
    CircleMeasure m;
    m.leb_ = 1;
    return m;
  }

  static CircleMeasure point(const Rat& angle) {
    CircleMeasure m;
    m.atoms_[normalise(angle)] = 1;
    return m;
  }

  static CircleMeasure mix(const Rat& lebesgue_weight, std::map<Rat, Rat> atoms) {
    CircleMeasure m;
    m.leb_ = lebesgue_weight;
    for (auto& [a, w] : atoms) {
      require(w > 0, "atom weights must be positive");
      m.atoms_[normalise(a)] += w;
    }
    m.check();
    return m;
  }

  const Rat& lebesgue_weight() const { return leb_; }
  const std::map<Rat, Rat>& atoms() const { return atoms_; }

  void check() const {
    require(leb_ >= 0, "negative Lebesgue weight");
    Rat total = leb_;
    for (const auto& [a, w] : atoms_) {
      require(a >= 0 && a < 1, "angles must be reduced into [0,1)");
      require(w > 0, "atom weights must be positive");
      total += w;
    }
    require(total == 1, "measure must have total mass 1, got " + to_str(total));
  }

  /// Rotation averaging: each atom splits into k translates of weight w/k;
  /// the Lebesgue part is fixed.
  CircleMeasure averaged(long long k) const {
    require(k >= 1, "averaging order must be positive");
    CircleMeasure out;
    out.leb_ = leb_;
    for (const auto& [a, w] : atoms_) {
      Rat piece = w / k;
      for (long long j = 0; j < k; ++j) {
        Rat angle = normalise(a + Rat(j, k));
        out.atoms_[angle] += piece;
      }
    }
    return out;
  }

  friend CircleMeasure convex(const std::vector<std::pair<Rat, CircleMeasure>>& parts);

  /// Exact total variation distance in the probabilist normalisation
  /// sup_A |mu(A) - nu(A)|, i.e. half the measure norm of the difference.
  /// This is the normalisation under which the telescoping trace bounds hold
  /// with constant one. Distances between probability measures lie in [0, 1].
  friend Rat tv_distance(const CircleMeasure& a, const CircleMeasure& b) {
    Rat d = a.leb_ >= b.leb_ ? a.leb_ - b.leb_ : b.leb_ - a.leb_;
    std::map<Rat, Rat> diff;
    for (const auto& [ang, w] : a.atoms_) diff[ang] += w;
    for (const auto& [ang, w] : b.atoms_) diff[ang] -= w;
    for (const auto& [ang, w] : diff) {
      (void)ang;
      d += w >= 0 ? w : -w;
    }
    return d / 2;
  }

  /// Fourier coefficient: the integral of z^k.
  std::complex<double> fourier(long long k) const {
    std::complex<double> out = k == 0 ? std::complex<double>(rat_to_double(leb_), 0.0)
                                      : std::complex<double>(0.0, 0.0);
    for (const auto& [a, w] : atoms_) {
      double theta = 2.0 * M_PI * static_cast<double>(k) * rat_to_double(a);
      out += rat_to_double(w) * std::complex<double>(std::cos(theta), std::sin(theta));
    }
    return out;
  }

  friend bool operator==(const CircleMeasure& a, const CircleMeasure& b) {
    return a.leb_ == b.leb_ && a.atoms_ == b.atoms_;
  }
  friend bool operator!=(const CircleMeasure& a, const CircleMeasure& b) { return !(a == b); }

  std::string to_string() const {
    std::ostringstream os;
    os << "{lebesgue: " << leb_ << ", atoms: [";
    bool first = true;
    for (const auto& [a, w] : atoms_) {
      if (!first) os << ", ";
      first = false;
      os << "{angle: " << a << ", weight: " << w << "}";
    }
    os << "]}";
    return os.str();
  }

  static double rat_to_double(const Rat& r) {
    return numerator(r).convert_to<double>() / denominator(r).convert_to<double>();
  }

 private:
  static Rat normalise(Rat a) {
    Int den = denominator(a);
    Int num = numerator(a) % den;
    if (num < 0) num += den;
    return Rat(num, den);
  }

  static std::string to_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
  }

  Rat leb_ = 0;
  std::map<Rat, Rat> atoms_;
};

/// Convex combination of measures; weights must sum to exactly 1.
inline CircleMeasure convex(const std::vector<std::pair<Rat, CircleMeasure>>& parts) {
  CircleMeasure out;
  Rat total = 0;
  for (const auto& [c, m] : parts) {
    require(c >= 0, "convex weights must be nonnegative");
    total += c;
    out.leb_ += c * m.leb_;
    for (const auto& [a, w] : m.atoms_) {
      Rat add = c * w;
      if (add != 0) out.atoms_[a] += add;
    }
  }
  require(total == 1, "convex weights must sum to 1");
  for (auto it = out.atoms_.begin(); it != out.atoms_.end();)
    it = it->second == 0 ? out.atoms_.erase(it) : std::next(it);
  return out;
}

/// The averaging operator of order k applied to a measure.
inline CircleMeasure markov_apply(long long k, const CircleMeasure& mu) { return mu.averaged(k); }

inline bool fixed_by(const CircleMeasure& mu, long long k) { return mu.averaged(k) == mu; }

}  // namespace gbd
