#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bfq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_to_string(const Rat& r) { return r.str(); }

Rat rat_from_string(const std::string& s);

/// Element of Q(i).
struct GaussianRational {
  Rat re;
  Rat im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rat r) : re(std::move(r)), im(0) {}
  GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long long r) : re(r), im(0) {}

  static GaussianRational i() { return GaussianRational(Rat(0), Rat(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_rational() const { return im == 0; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational conj() const { return {re, -im}; }
  Rat norm2() const { return re * re + im * im; }
  GaussianRational inverse() const {
    Rat n = norm2();
    if (n == 0) throw std::domain_error("division by zero in Q(i)");
    return {re / n, -im / n};
  }
  GaussianRational operator/(const GaussianRational& o) const { return *this * o.inverse(); }
  GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
  GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
  GaussianRational& operator*=(const GaussianRational& o) { *this = *this * o; return *this; }
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }

  std::string str() const;
};

/// i^k for k mod 4.
GaussianRational i_power(long long k);

/// Largest a with a^2 | n (n > 0); returns {a, n / a^2} with the cofactor squarefree.
/// Trial division; inputs here stay small.
std::pair<Int, Int> extract_square(Int n);

}  // namespace bfq
