#pragma once

#include <map>
#include <string>

#include "bfq/rational.hpp"

namespace bfq {

/// Finite Laurent polynomial in hbar with coefficients in Q(i).
class Scalar {
 public:
  Scalar() = default;
  Scalar(const GaussianRational& c) { if (!c.is_zero()) c_[0] = c; }
  Scalar(const Rat& r) : Scalar(GaussianRational(r)) {}
  Scalar(long long n) : Scalar(GaussianRational(Rat(n))) {}

  static Scalar hbar(long long power, GaussianRational c = GaussianRational(1)) {
    Scalar s;
    if (!c.is_zero()) s.c_[power] = c;
    return s;
  }
  static Scalar i() { return Scalar(GaussianRational::i()); }
  /// i / hbar
  static Scalar i_over_hbar() { return hbar(-1, GaussianRational::i()); }

  bool is_zero() const { return c_.empty(); }
  const std::map<long long, GaussianRational>& terms() const { return c_; }

  /// Coefficient of hbar^k.
  GaussianRational coeff(long long k) const {
    auto it = c_.find(k);
    return it == c_.end() ? GaussianRational() : it->second;
  }

  /// True if the scalar is c * hbar^k for a single k (or zero).
  bool is_monomial() const { return c_.size() <= 1; }

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
  Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
  Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
  bool operator==(const Scalar& o) const { return c_ == o.c_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const;

  /// Division by a monomial scalar c*hbar^k; throws otherwise.
  Scalar operator/(const Scalar& o) const;

  std::string str() const;

 private:
  std::map<long long, GaussianRational> c_;
  void prune();
};

}  // namespace bfq
