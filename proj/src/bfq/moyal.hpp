#pragma once

#include <map>
#include <vector>

#include "bfq/errors.hpp"
#include "bfq/scalar.hpp"

namespace bfq {

/// Polynomial in target coordinates u^1..u^m with Scalar coefficients,
/// keyed by exponent vectors.
class PolyU {
 public:
  PolyU() = default;
  explicit PolyU(int dim) : dim_(dim) {}

  static PolyU constant(int dim, const Scalar& c);
  static PolyU coordinate(int dim, int alpha);  // u^alpha, 0-based

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::vector<int>, Scalar>& terms() const { return terms_; }
  void add_term(const std::vector<int>& expo, const Scalar& c);

  PolyU operator+(const PolyU& o) const;
  PolyU operator-(const PolyU& o) const;
  PolyU operator*(const PolyU& o) const;
  PolyU operator*(const Scalar& s) const;
  bool operator==(const PolyU& o) const { return terms_ == o.terms_; }

  PolyU derivative(int alpha) const;
  /// Drop all hbar powers above `order` from every coefficient.
  PolyU truncate_hbar(long long order) const;
  long long total_degree() const;

  std::string str() const;

 private:
  int dim_ = 0;
  std::map<std::vector<int>, Scalar> terms_;
};

/// Polynomial Poisson bivector on R^m: antisymmetric coefficients pi^{ab}(u).
struct PoissonStructure {
  int dim = 0;
  // pi[{a,b}] for a < b; the (b,a) entry is minus this.
  std::map<std::pair<int, int>, PolyU> entries;

  PolyU component(int a, int b) const;  // full antisymmetric lookup
  bool is_constant() const;
  bool is_linear() const;
  /// sum_a d(pi^{ab})/du^a = 0 for every b.
  bool is_unimodular() const;
  /// Coefficient of the derivative tensor d_{g1}..d_{gr} pi^{ab} at u = 0.
  Scalar derivative_at_zero(int a, int b, const std::vector<int>& derivs) const;
  /// Schouten bracket [pi,pi] = 0, checked symbolically degree by degree.
  bool jacobi_holds() const;

  static PoissonStructure from_json(const std::string& text);
  std::string to_json() const;
};

/// Moyal product for a constant antisymmetric pi:
///   f * g = sum_r (i hbar / 2)^r / r! pi^{a1 b1}..pi^{ar br} d_a..f d_b..g,
/// truncated at hbar order `order`.
PolyU moyal_star(const PolyU& f, const PolyU& g, const PoissonStructure& pi, long long order);

/// Pi^{ab} = (u^a * u^b - u^b * u^a)/(i hbar); for constant pi this equals
/// pi^{ab} exactly at every order. For polynomial pi only order 0 is available
/// (OrderUnavailable beyond).
PolyU star_commutator_bivector(const PoissonStructure& pi, int a, int b, long long order);

}  // namespace bfq
