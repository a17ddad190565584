#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bfq/errors.hpp"

namespace bfq {

/// Graph for an upper-half-plane weight integral: ground points at 0 and 1,
/// up to two free vertices, each emitting exactly two edges.
struct WeightGraph {
  int internal = 0;
  // Edge targets per internal vertex slot: -2 = ground 0, -1 = ground 1,
  // 0..internal-1 = the other free vertex.
  std::vector<std::pair<int, int>> edges;

  void validate() const;  // admissibility; short loops rejected
  static WeightGraph from_json(const std::string& text);
};

struct WeightEstimate {
  double value = 0.0;
  double sigma = 0.0;  // statistical standard error
  std::uint64_t samples = 0;
};

/// Monte Carlo estimate of the angle-form weight
///   w = (2 pi)^{-2q} Integral over H^q of wedge_e d phi(z_{s(e)}, t(e)),
/// with phi the hyperbolic angle and edges taken in slot order. Sampling is
/// stratified over charts adapted to the singular corners (near 0, near 1,
/// near infinity, bulk), with fixed substreams so the result depends only on
/// the seed. `threads` caps worker threads (0 = hardware).
WeightEstimate kontsevich_weight(const WeightGraph& g, std::uint64_t samples, std::uint64_t seed,
                                 int threads = 0);

/// Throws NonConvergent if sigma exceeds `tolerance` after the sample cap.
WeightEstimate kontsevich_weight_checked(const WeightGraph& g, std::uint64_t samples,
                                         std::uint64_t seed, double tolerance, int threads = 0);

}  // namespace bfq
