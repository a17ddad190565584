#pragma once

#include <map>
#include <string>
#include <vector>

#include "bfq/moyal.hpp"
#include "bfq/poly.hpp"

namespace bfq {

/// Directed decorated graph of the sigma-model expansion. Vertices are indexed
/// 0..j-1 (in-boundary), j..j+k-1 (out-boundary), j+k..j+k+l-1 (internal).
/// In-vertices emit exactly one half-edge, out-vertices absorb exactly one,
/// internal vertices emit exactly two and absorb up to R. Loose half-edges are
/// leaves: outgoing ones carry residual a, incoming ones residual b.
struct PsmGraph {
  int in_count = 0, out_count = 0, internal_count = 0;
  std::map<std::pair<int, int>, int> edges;  // (src, dst) -> multiplicity
  std::vector<int> a_leaves;                 // per vertex
  std::vector<int> b_leaves;                 // per vertex

  int vertex_count() const { return in_count + out_count + internal_count; }
  bool is_in(int v) const { return v < in_count; }
  bool is_out(int v) const { return v >= in_count && v < in_count + out_count; }
  bool is_internal(int v) const { return v >= in_count + out_count; }
  int edge_count() const;
  int loop_count() const;  // E - V + 1 for connected graphs
  int out_degree(int v) const;
  int in_degree(int v) const;
  bool connected() const;

  /// Canonical encoding under permutations within vertex classes.
  std::string canonical_key() const;
  /// Structure-preserving symmetries: class permutations fixing the adjacency
  /// data, times parallel-edge and leaf factorials.
  long long automorphism_count() const;

  static PsmGraph from_json(const std::string& text);
  std::string to_json() const;

  void validate(int max_valence) const;
};

struct EnumerationBounds {
  int max_incoming = 3;
  int max_leaves = 4;
  int max_total_vertices = 6;
};

/// All admissible graphs with the given vertex counts, duplicate-free up to
/// isomorphism, each with |Aut|. Throws BoundsTooLarge over the caps.
std::vector<std::pair<PsmGraph, long long>> enumerate_graphs(int j, int k, int l,
                                                             const EnumerationBounds& bounds);

/// Every labeled admissible structure (no isomorphism reduction); the oracle
/// route used for orbit-counting cross-checks.
std::vector<PsmGraph> enumerate_labeled_graphs(int j, int k, int l, const EnumerationBounds& bounds);

/// Symbolic amplitude of a decorated graph.
struct Amplitude {
  PsmGraph graph;
  Scalar weight;        // (-i hbar)^{loops} / |Aut|
  ContextPtr ctx;       // boundary fields per vertex, shared residual fields
  Poly fields;          // index-contracted field polynomial (pi-tensors evaluated)
  int propagator_count; // unevaluated eta factors (configuration-space integral)
  std::string rendered;
};

Amplitude assemble_amplitude(const PsmGraph& g, const PoissonStructure& pi);

}  // namespace bfq
