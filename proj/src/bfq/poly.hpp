#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bfq/errors.hpp"
#include "bfq/scalar.hpp"

namespace bfq {

enum class Role { BoundaryA, BoundaryB, ResidualA, ResidualB, Field, FieldB, Delta, Auxiliary };

struct GenInfo {
  std::string name;
  int ghost = 0;    // total ghost number of the coordinate
  int degree = 0;   // form degree of the underlying cell (bookkeeping)
  Role role = Role::Auxiliary;
};

/// Immutable table of graded generators. Parity is ghost mod 2.
class GenContext {
 public:
  explicit GenContext(std::vector<GenInfo> gens);

  std::size_t size() const { return gens_.size(); }
  const GenInfo& info(int g) const { return gens_.at(g); }
  int parity(int g) const { return ((gens_.at(g).ghost % 2) + 2) % 2; }
  bool is_odd(int g) const { return parity(g) == 1; }
  int index(const std::string& name) const;
  bool has(const std::string& name) const { return by_name_.count(name) != 0; }
  const std::vector<GenInfo>& all() const { return gens_; }

 private:
  std::vector<GenInfo> gens_;
  std::map<std::string, int> by_name_;
};

using ContextPtr = std::shared_ptr<const GenContext>;

/// Monomial in normal form: generator indices ascending, odd exponents <= 1.
struct Monomial {
  std::vector<std::pair<int, int>> factors;  // (generator, exponent > 0)

  bool empty() const { return factors.empty(); }
  int exponent_of(int g) const;
  long long total_degree() const;
  bool operator<(const Monomial& o) const { return factors < o.factors; }
  bool operator==(const Monomial& o) const { return factors == o.factors; }
  std::string str(const GenContext& ctx) const;
};

/// Graded-commutative polynomial with Scalar coefficients over a GenContext.
class Poly {
 public:
  Poly() = default;
  explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Poly constant(ContextPtr ctx, const Scalar& c);
  static Poly generator(ContextPtr ctx, int g);

  const ContextPtr& ctx() const { return ctx_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// Scalar part (coefficient of the empty monomial).
  Scalar constant_term() const;
  /// True if the polynomial is a scalar (possibly zero).
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

  void add_term(const Monomial& m, const Scalar& c);

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Scalar& s) const;
  Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
  Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  /// Parity of a homogeneous polynomial; throws if mixed. 0 = even, 1 = odd.
  int parity() const;
  bool is_homogeneous_parity() const;
  /// Split into (even part, odd part).
  std::pair<Poly, Poly> parity_split() const;

  long long max_degree() const;
  /// Terms of polynomial degree <= d.
  Poly truncate_degree(long long d) const;
  /// True if any term contains g.
  bool depends_on(int g) const;

  /// Graded left derivative d_L/dg.
  Poly left_derivative(int g) const;

  /// Substitute generators by polynomials of the same parity; missing entries
  /// are kept. Ghost-number changes are the caller's business.
  Poly substitute(const std::map<int, Poly>& replacements) const;

  /// Rewrite over another context; every generator name must exist there.
  /// Reordering of odd generators contributes the Koszul sign.
  Poly remap(const ContextPtr& target) const;

  long long ghost_of(const Monomial& m) const;
  /// Ghost number of a homogeneous polynomial; throws if mixed.
  long long ghost() const;

  std::string str() const;

 private:
  ContextPtr ctx_;
  std::map<Monomial, Scalar> terms_;
};

/// First-order graded derivation  D = sum_g coeff_g * d_L/dg.
struct Derivation {
  ContextPtr ctx;
  std::map<int, Poly> coeff;  // generator -> coefficient polynomial

  Poly apply(const Poly& p) const;
  /// D(D(g)) for every generator; zero iff the derivation squares to zero
  /// (enough for odd derivations, where D^2 = (1/2)[D,D] is again a derivation).
  Poly square_on_generator(int g) const;
};

/// Product sign for concatenating two normal-form words (Koszul).
int koszul_merge_sign(const GenContext& ctx, const Monomial& a, const Monomial& b);

}  // namespace bfq
