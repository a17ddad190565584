#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bfq/errors.hpp"
#include "bfq/rational.hpp"

namespace bfq {

struct RawCell {
  std::string id;
  int dim = 0;
  // Boundary chain: (face id, integer incidence coefficient).
  std::vector<std::pair<std::string, long long>> boundary;
};

enum class RelMode { Absolute, RelOut, RelIn };

/// Finite abstract cell complex with an in/out split of the boundary.
/// Validated on construction: dd = 0, markings disjoint and closed under faces.
class CellComplex {
 public:
  static CellComplex build(int dimension, std::vector<RawCell> cells,
                           std::set<std::string> in_boundary, std::set<std::string> out_boundary);

  static CellComplex from_json(const std::string& text);
  std::string to_json() const;

  int dimension() const { return dimension_; }
  const std::vector<RawCell>& cells() const { return cells_; }
  const std::set<std::string>& in_boundary() const { return in_; }
  const std::set<std::string>& out_boundary() const { return out_; }

  bool has_cell(const std::string& id) const { return index_.count(id) != 0; }
  const RawCell& cell(const std::string& id) const;
  bool is_in(const std::string& id) const { return in_.count(id) != 0; }
  bool is_out(const std::string& id) const { return out_.count(id) != 0; }
  bool is_boundary(const std::string& id) const { return is_in(id) || is_out(id); }

  /// Cell ids of dimension k, ascending by id.
  std::vector<std::string> cells_of_dim(int k) const;

  /// Incidence coefficient [f : e] (coefficient of e in the boundary of f).
  long long incidence(const std::string& f, const std::string& e) const;

  long long euler_characteristic() const;

  /// New complex with one edge split in two; `edge` must be 1-dimensional.
  CellComplex subdivide_edge(const std::string& edge, const std::string& new_vertex,
                             const std::string& new_edge_a, const std::string& new_edge_b) const;

  /// Complex with in/out markings swapped.
  CellComplex reversed() const;

 private:
  int dimension_ = 0;
  std::vector<RawCell> cells_;  // sorted by (dim, id)
  std::map<std::string, std::size_t> index_;
  std::set<std::string> in_, out_;

  void validate() const;
};

// Standard small models used across the test corpus.
CellComplex interval_complex(int segments, const std::string& prefix = "");
CellComplex circle_complex(int segments, const std::string& prefix = "");
/// S1 x I with `segments` cells around and one cell along the interval;
/// in-boundary is the bottom circle, out-boundary the top circle.
CellComplex cylinder_complex(int segments);
/// Minimal CW disk {v, e, f} with boundary circle marked out.
CellComplex disk_complex();
/// Disjoint union with id prefixes applied to each part.
CellComplex disjoint_union(const CellComplex& a, const CellComplex& b, const std::string& prefix_a,
                           const std::string& prefix_b);

/// Compose two cobordisms along out(a) ~ in(b); `identify` maps out-cells of a
/// to in-cells of b. Identified cells keep the id from `a`. Throws InterfaceMismatch.
CellComplex glue_complexes(const CellComplex& a, const CellComplex& b,
                           const std::map<std::string, std::string>& identify);

}  // namespace bfq
