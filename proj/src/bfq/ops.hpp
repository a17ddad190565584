#pragma once

#include <optional>
#include <set>

#include "bfq/bf.hpp"
#include "bfq/kontsevich.hpp"
#include "bfq/psm_graphs.hpp"
#include "bfq/psm_omega.hpp"
#include "bfq/report.hpp"

namespace bfq {

// Operation layer shared by the C API, the command line tool and the
// acceptance suite. Verification failures are reported, not thrown; invalid
// inputs throw Error.

RunReport op_cohomology(const CellComplex& x, RelMode mode);
RunReport op_torsion(const CellComplex& x, RelMode mode);
RunReport op_classical_check(const CellComplex& x);
RunReport op_partition(const CellComplex& x);
RunReport op_qme(const CellComplex& x);
RunReport op_glue(const CellComplex& a, const CellComplex& b,
                  const std::map<std::string, std::string>& identify, bool compare_direct);
RunReport op_realize(const CellComplex& x, const std::set<std::string>& keep,
                     const std::optional<std::set<std::string>>& coarsen_to);
RunReport op_psm_graphs(int j, int k, int l, const EnumerationBounds& bounds, const std::string& emit);
RunReport op_psm_weight(const WeightGraph& g, std::uint64_t samples, std::uint64_t seed, int threads,
                        std::optional<double> tolerance);
RunReport op_psm_star(const PoissonStructure& pi, long long order, bool check_assoc);
RunReport op_selftest(std::uint64_t seed);

}  // namespace bfq
