// Exercises the shared-library surface: opaque handles, error codes, reports.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "bfq/bfq.h"

namespace {

const char* kInterval = R"({
  "dimension": 1,
  "cells": [
    {"id": "v0", "dim": 0, "boundary": []},
    {"id": "v1", "dim": 0, "boundary": []},
    {"id": "v2", "dim": 0, "boundary": []},
    {"id": "e01", "dim": 1, "boundary": [["v1", 1], ["v0", -1]]},
    {"id": "e12", "dim": 1, "boundary": [["v2", 1], ["v1", -1]]}
  ],
  "in_boundary": ["v0"],
  "out_boundary": ["v2"]
})";

struct Guard {
  bfq_complex* x = nullptr;
  char* s = nullptr;
  ~Guard() {
    bfq_complex_free(x);
    bfq_string_free(s);
  }
};

}  // namespace

TEST_CASE("version and error strings exist") {
  CHECK(std::strlen(bfq_version()) > 0);
  CHECK(bfq_last_error() != nullptr);
}

TEST_CASE("complex round trip through the handle") {
  Guard g;
  REQUIRE(bfq_complex_from_json(kInterval, &g.x) == BFQ_OK);
  CHECK(bfq_complex_dimension(g.x) == 1);
  CHECK(bfq_complex_cell_count(g.x) == 5);
}

TEST_CASE("parse errors carry messages and codes") {
  bfq_complex* x = nullptr;
  CHECK(bfq_complex_from_json("{not json", &x) == BFQ_ERR_PARSE);
  CHECK(x == nullptr);
  CHECK(std::strlen(bfq_last_error()) > 0);

  // dd != 0 is detected with its own code.
  const char* bad = R"({"dimension": 2, "cells": [
    {"id": "v", "dim": 0, "boundary": []},
    {"id": "e", "dim": 1, "boundary": [["v", 1]]},
    {"id": "f", "dim": 2, "boundary": [["e", 1]]}],
    "in_boundary": [], "out_boundary": []})";
  CHECK(bfq_complex_from_json(bad, &x) == BFQ_ERR_NON_SQUARE_ZERO);
}

TEST_CASE("qme report carries a pass verdict") {
  Guard g;
  REQUIRE(bfq_complex_from_json(kInterval, &g.x) == BFQ_OK);
  REQUIRE(bfq_qme(g.x, &g.s) == BFQ_OK);
  auto j = nlohmann::json::parse(g.s);
  CHECK(j["pass"].get<bool>());
}

TEST_CASE("torsion report is an exact fraction") {
  Guard g;
  REQUIRE(bfq_complex_from_json(kInterval, &g.x) == BFQ_OK);
  REQUIRE(bfq_torsion(g.x, "out", &g.s) == BFQ_OK);
  auto j = nlohmann::json::parse(g.s);
  CHECK(j["values"]["torsion"].get<std::string>() == "1");
}

TEST_CASE("reports are byte-identical across repeated runs") {
  Guard g;
  REQUIRE(bfq_complex_from_json(kInterval, &g.x) == BFQ_OK);
  char* first = nullptr;
  char* second = nullptr;
  REQUIRE(bfq_partition(g.x, &first) == BFQ_OK);
  REQUIRE(bfq_partition(g.x, &second) == BFQ_OK);
  CHECK(std::string(first) == std::string(second));
  bfq_string_free(first);
  bfq_string_free(second);

  char* w1 = nullptr;
  char* w2 = nullptr;
  const char* wedge = R"({"internal": 1, "edges": [[0, "g0"], [0, "g1"]]})";
  REQUIRE(bfq_psm_weight(wedge, 50000, 7, 1, -1.0, &w1) == BFQ_OK);
  REQUIRE(bfq_psm_weight(wedge, 50000, 7, 8, -1.0, &w2) == BFQ_OK);
  CHECK(std::string(w1) == std::string(w2));  // thread count must not matter
  bfq_string_free(w1);
  bfq_string_free(w2);
}

TEST_CASE("interface mismatch surfaces as its error code") {
  Guard a, b;
  REQUIRE(bfq_complex_from_json(kInterval, &a.x) == BFQ_OK);
  const char* other = R"({"dimension": 1, "cells": [
    {"id": "w0", "dim": 0, "boundary": []},
    {"id": "w1", "dim": 0, "boundary": []},
    {"id": "f0", "dim": 1, "boundary": [["w1", 1], ["w0", -1]]}],
    "in_boundary": ["w0"], "out_boundary": ["w1"]})";
  REQUIRE(bfq_complex_from_json(other, &b.x) == BFQ_OK);
  char* rep = nullptr;
  CHECK(bfq_glue(a.x, b.x, R"({"identify": [["v2", "w1"]]})", 0, &rep) == BFQ_ERR_INTERFACE_MISMATCH);
  CHECK(rep == nullptr);
  // Correct interface works.
  REQUIRE(bfq_glue(a.x, b.x, R"({"identify": [["v2", "w0"]]})", 1, &rep) == BFQ_OK);
  auto j = nlohmann::json::parse(rep);
  CHECK(j["pass"].get<bool>());
  bfq_string_free(rep);
}

TEST_CASE("realize rejects incomparable targets") {
  Guard g;
  REQUIRE(bfq_complex_from_json(kInterval, &g.x) == BFQ_OK);
  char* rep = nullptr;
  CHECK(bfq_realize(g.x, R"({"keep": ["v1", "e12"], "coarsen_to": ["v1"]})", &rep) ==
        BFQ_ERR_NOT_COMPARABLE);
  REQUIRE(bfq_realize(g.x, R"({"keep": ["v1", "e12"], "coarsen_to": []})", &rep) == BFQ_OK);
  auto j = nlohmann::json::parse(rep);
  CHECK(j["pass"].get<bool>());
  bfq_string_free(rep);
}

TEST_CASE("psm star and graphs through the c api") {
  char* rep = nullptr;
  const char* pi = R"({"dim": 2, "terms": [{"alpha": 0, "beta": 1, "monomial": [0,0], "coeff": "1"}]})";
  REQUIRE(bfq_psm_star(pi, 3, 1, &rep) == BFQ_OK);
  auto j = nlohmann::json::parse(rep);
  CHECK(j["pass"].get<bool>());
  bfq_string_free(rep);
  rep = nullptr;
  REQUIRE(bfq_psm_graphs(1, 1, 0, 3, 0, "json", &rep) == BFQ_OK);
  auto j2 = nlohmann::json::parse(rep);
  CHECK(j2["values"]["count"].get<std::string>() == "1");
  bfq_string_free(rep);
  rep = nullptr;
  // Bounds produce the dedicated code.
  CHECK(bfq_psm_graphs(5, 5, 5, 3, 0, "json", &rep) == BFQ_ERR_BOUNDS);
}

TEST_CASE("selftest passes through the c api") {
  char* rep = nullptr;
  REQUIRE(bfq_selftest(123, &rep) == BFQ_OK);
  auto j = nlohmann::json::parse(rep);
  CHECK(j["pass"].get<bool>());
  bfq_string_free(rep);
}
