#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bfq/cell_complex.hpp"
#include "bfq/matrix.hpp"

namespace bfq {

/// Cochain complex over Q with labelled bases, degrees 0..n.
/// d(k) maps C^k -> C^{k+1}; entry (f, e) is the incidence [f : e].
class CochainComplex {
 public:
  CochainComplex() = default;
  CochainComplex(int top, std::vector<std::vector<std::string>> basis, std::vector<Matrix> d);

  int top_degree() const { return top_; }
  std::size_t dim(int k) const;
  const std::vector<std::string>& basis(int k) const;
  const Matrix& d(int k) const;  // C^k -> C^{k+1}; zero-sized matrices outside range

  /// Index of a label within degree k; throws if absent.
  std::size_t index_of(int k, const std::string& label) const;
  bool has_label(int k, const std::string& label) const;

  long long euler_characteristic() const;
  void check_complex() const;  // asserts d d = 0

 private:
  int top_ = 0;
  std::vector<std::vector<std::string>> basis_;  // size top_+1
  std::vector<Matrix> d_;                        // size top_+1; d_[top_] has 0 rows
};

/// Cochains of X, optionally relative to the marked out- or in-boundary
/// (relative = delete the marked cells; the remaining block is a complex
/// because marked parts are closed under faces).
CochainComplex relative_cochains(const CellComplex& X, RelMode mode);

enum class PivotStrategy {
  LowestIdFirst,   // degrees ascending, columns by label, rows by label
  HighestIdFirst,  // degrees ascending, columns by reverse label, rows by reverse label
};

/// Chain contraction of C onto a reduced complex R (deformation retract data):
/// incl : R -> C, proj : C -> R, hom : C -> C[-1] with, exactly and in all degrees,
///   d K + K d = id - incl proj,   proj incl = id,   K K = 0,   proj K = 0,   K incl = 0.
/// For a full contraction R has zero differential and is the cohomology.
struct Contraction {
  CochainComplex ambient;
  CochainComplex reduced;
  std::vector<Matrix> incl;  // per degree k: dim_C(k) x dim_R(k)
  std::vector<Matrix> proj;  // per degree k: dim_R(k) x dim_C(k)
  std::vector<Matrix> hom;   // per degree k: dim_C(k-1) x dim_C(k); hom[0] empty
  std::vector<std::pair<std::string, std::string>> pivot_sequence;  // (col cell, row cell) eliminated

  void verify() const;  // throws Internal if any identity fails
  std::vector<std::size_t> betti() const;
};

/// Eliminate acyclic pairs by exact Gaussian elimination. `eliminable` limits which
/// basis labels may be removed (both members of a pivot pair must be eliminable);
/// passing nullptr allows everything, yielding the minimal (cohomology) model.
Contraction contract(const CochainComplex& C, PivotStrategy strategy,
                     const std::function<bool(const std::string&)>& eliminable = nullptr);

/// Replay a recorded pivot sequence on C (used to reproduce a gauge on a glued complex),
/// then finish with `strategy` for any remaining pairs among `eliminable` labels.
Contraction contract_with_pivots(const CochainComplex& C,
                                 const std::vector<std::pair<std::string, std::string>>& pivots,
                                 bool finish, PivotStrategy strategy);

/// Compose contractions C -> R1 and R1 -> R2 into C -> R2.
Contraction compose(const Contraction& outer, const Contraction& inner);

struct CohomologyResult {
  std::vector<std::size_t> betti;
  Contraction contraction;  // full contraction onto cohomology
};

CohomologyResult cohomology(const CochainComplex& C,
                            PivotStrategy strategy = PivotStrategy::LowestIdFirst);

}  // namespace bfq
