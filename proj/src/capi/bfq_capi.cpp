#include "bfq/bfq.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "bfq/ops.hpp"

using namespace bfq;

struct bfq_complex {
  CellComplex value;
};

namespace {

thread_local std::string g_last_error;

bfq_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return BFQ_ERR_PARSE;
    case ErrorCode::Invalid: return BFQ_ERR_INVALID;
    case ErrorCode::NonSquareZero: return BFQ_ERR_NON_SQUARE_ZERO;
    case ErrorCode::DanglingFace: return BFQ_ERR_DANGLING_FACE;
    case ErrorCode::BoundaryMarkingNotClosed: return BFQ_ERR_BOUNDARY_MARKING;
    case ErrorCode::BasisMismatch: return BFQ_ERR_BASIS_MISMATCH;
    case ErrorCode::NotExact: return BFQ_ERR_NOT_EXACT;
    case ErrorCode::DegenerateOmega: return BFQ_ERR_DEGENERATE_OMEGA;
    case ErrorCode::UnsupportedExponent: return BFQ_ERR_UNSUPPORTED_EXPONENT;
    case ErrorCode::DegenerateHessian: return BFQ_ERR_DEGENERATE_HESSIAN;
    case ErrorCode::InterfaceMismatch: return BFQ_ERR_INTERFACE_MISMATCH;
    case ErrorCode::NotComparable: return BFQ_ERR_NOT_COMPARABLE;
    case ErrorCode::IndexMismatch: return BFQ_ERR_INDEX_MISMATCH;
    case ErrorCode::BoundsTooLarge: return BFQ_ERR_BOUNDS;
    case ErrorCode::NonConvergent: return BFQ_ERR_NON_CONVERGENT;
    case ErrorCode::OrderUnavailable: return BFQ_ERR_ORDER_UNAVAILABLE;
    case ErrorCode::IdentityFailed: return BFQ_ERR_IDENTITY_FAILED;
    case ErrorCode::Internal: return BFQ_ERR_INTERNAL;
  }
  return BFQ_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
bfq_status guarded(Fn&& fn) {
  try {
    fn();
    return BFQ_OK;
  } catch (const Error& e) {
    g_last_error = std::string(error_code_name(e.code())) + ": " + e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BFQ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BFQ_ERR_INTERNAL;
  }
}

RelMode rel_mode(const char* rel) {
  std::string r = rel ? rel : "";
  if (r == "out") return RelMode::RelOut;
  if (r == "in") return RelMode::RelIn;
  if (r == "none" || r.empty()) return RelMode::Absolute;
  throw Error(ErrorCode::Invalid, "rel must be 'out', 'in' or 'none'");
}

void emit_report(const RunReport& rep, char** out) {
  if (!out) throw Error(ErrorCode::Invalid, "null report out-parameter");
  *out = dup_string(rep.to_json());
}

}  // namespace

extern "C" {

const char* bfq_version(void) { return "bfq 0.1.0"; }

const char* bfq_last_error(void) { return g_last_error.c_str(); }

void bfq_string_free(char* s) { std::free(s); }

bfq_status bfq_complex_from_json(const char* json, bfq_complex** out) {
  return guarded([&] {
    if (!json || !out) throw Error(ErrorCode::Invalid, "null argument");
    *out = new bfq_complex{CellComplex::from_json(json)};
  });
}

void bfq_complex_free(bfq_complex* x) { delete x; }

int bfq_complex_dimension(const bfq_complex* x) { return x ? x->value.dimension() : -1; }

size_t bfq_complex_cell_count(const bfq_complex* x) { return x ? x->value.cells().size() : 0; }

bfq_status bfq_cohomology(const bfq_complex* x, const char* rel, char** report) {
  return guarded([&] {
    if (!x) throw Error(ErrorCode::Invalid, "null complex");
    emit_report(op_cohomology(x->value, rel_mode(rel)), report);
  });
}

bfq_status bfq_torsion(const bfq_complex* x, const char* rel, char** report) {
  return guarded([&] {
    if (!x) throw Error(ErrorCode::Invalid, "null complex");
    emit_report(op_torsion(x->value, rel_mode(rel)), report);
  });
}

bfq_status bfq_classical_check(const bfq_complex* x, char** report) {
  return guarded([&] {
    if (!x) throw Error(ErrorCode::Invalid, "null complex");
    emit_report(op_classical_check(x->value), report);
  });
}

bfq_status bfq_partition(const bfq_complex* x, char** report) {
  return guarded([&] {
    if (!x) throw Error(ErrorCode::Invalid, "null complex");
    emit_report(op_partition(x->value), report);
  });
}

bfq_status bfq_qme(const bfq_complex* x, char** report) {
  return guarded([&] {
    if (!x) throw Error(ErrorCode::Invalid, "null complex");
    emit_report(op_qme(x->value), report);
  });
}

bfq_status bfq_glue(const bfq_complex* a, const bfq_complex* b, const char* interface_json,
                    int compare_direct, char** report) {
  return guarded([&] {
    if (!a || !b || !interface_json) throw Error(ErrorCode::Invalid, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(interface_json);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Parse, std::string("bad interface JSON: ") + e.what());
    }
    std::map<std::string, std::string> identify;
    for (auto& p : j.at("identify"))
      identify[p.at(0).get<std::string>()] = p.at(1).get<std::string>();
    emit_report(op_glue(a->value, b->value, identify, compare_direct != 0), report);
  });
}

bfq_status bfq_realize(const bfq_complex* x, const char* realization_json, char** report) {
  return guarded([&] {
    if (!x || !realization_json) throw Error(ErrorCode::Invalid, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(realization_json);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Parse, std::string("bad realization JSON: ") + e.what());
    }
    std::set<std::string> keep;
    for (auto& s : j.at("keep")) keep.insert(s.get<std::string>());
    std::optional<std::set<std::string>> coarse;
    if (j.contains("coarsen_to")) {
      std::set<std::string> c;
      for (auto& s : j.at("coarsen_to")) c.insert(s.get<std::string>());
      coarse = c;
    }
    emit_report(op_realize(x->value, keep, coarse), report);
  });
}

bfq_status bfq_psm_graphs(int in_vertices, int out_vertices, int internal_vertices, int max_valence,
                          int max_leaves, const char* emit, char** report) {
  return guarded([&] {
    EnumerationBounds bounds;
    if (max_valence >= 0) bounds.max_incoming = max_valence;
    if (max_leaves >= 0) bounds.max_leaves = max_leaves;
    emit_report(op_psm_graphs(in_vertices, out_vertices, internal_vertices, bounds,
                              emit ? emit : "json"),
                report);
  });
}

bfq_status bfq_psm_weight(const char* graph_json, uint64_t samples, uint64_t seed, int threads,
                          double tolerance, char** report) {
  return guarded([&] {
    if (!graph_json) throw Error(ErrorCode::Invalid, "null graph");
    WeightGraph g = WeightGraph::from_json(graph_json);
    std::optional<double> tol;
    if (tolerance >= 0) tol = tolerance;
    emit_report(op_psm_weight(g, samples, seed, threads, tol), report);
  });
}

bfq_status bfq_psm_star(const char* pi_json, long long order, int check_assoc, char** report) {
  return guarded([&] {
    if (!pi_json) throw Error(ErrorCode::Invalid, "null bivector");
    PoissonStructure pi = PoissonStructure::from_json(pi_json);
    emit_report(op_psm_star(pi, order, check_assoc != 0), report);
  });
}

bfq_status bfq_selftest(uint64_t seed, char** report) {
  return guarded([&] { emit_report(op_selftest(seed), report); });
}

}  // extern "C"
