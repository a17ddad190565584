#include <doctest.h>

#include "bfq/cell_complex.hpp"

using namespace bfq;

TEST_CASE("interval I2 builds and validates") {
  CellComplex x = interval_complex(2);
  CHECK(x.dimension() == 1);
  CHECK(x.cells().size() == 5);
  CHECK(x.is_in("v0"));
  CHECK(x.is_out("v2"));
  CHECK(x.incidence("e0", "v1") == 1);
  CHECK(x.incidence("e0", "v0") == -1);
  CHECK(x.euler_characteristic() == 1);
}

TEST_CASE("circle with one cell has zero differential") {
  CellComplex x = circle_complex(1);
  CHECK(x.cells().size() == 2);
  CHECK(x.incidence("e0", "v0") == 0);
  CHECK(x.euler_characteristic() == 0);
}

TEST_CASE("dd != 0 is rejected with the offending cell") {
  // f with df = e, e with de = v: dd(f) = v != 0.
  std::vector<RawCell> cells = {
      {"v", 0, {}},
      {"e", 1, {{"v", 1}}},
      {"f", 2, {{"e", 1}}},
  };
  CHECK_THROWS_WITH_AS(CellComplex::build(2, cells, {}, {}),
                       doctest::Contains("cell 'f'"), Error);
  try {
    CellComplex::build(2, cells, {}, {});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonSquareZero);
  }
}

TEST_CASE("dangling face reference") {
  std::vector<RawCell> cells = {{"e", 1, {{"missing", 1}}}};
  try {
    CellComplex::build(1, cells, {}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DanglingFace);
  }
}

TEST_CASE("boundary marking must be closed and disjoint") {
  // Marking an edge without its endpoints is rejected.
  try {
    interval_complex(1);  // baseline ok
    std::vector<RawCell> cells = {
        {"v0", 0, {}}, {"v1", 0, {}}, {"e0", 1, {{"v1", 1}, {"v0", -1}}}};
    CellComplex::build(1, cells, {"e0"}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryMarkingNotClosed);
  }
  try {
    std::vector<RawCell> cells = {{"v0", 0, {}}};
    CellComplex::build(0, cells, {"v0"}, {"v0"});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundaryMarkingNotClosed);
  }
}

TEST_CASE("json round trip") {
  CellComplex x = cylinder_complex(2);
  CellComplex y = CellComplex::from_json(x.to_json());
  CHECK(y.cells().size() == x.cells().size());
  CHECK(y.in_boundary() == x.in_boundary());
  CHECK(y.to_json() == x.to_json());
}

TEST_CASE("cells of dim above the declared dimension are rejected") {
  std::vector<RawCell> cells = {{"v", 0, {}}, {"e", 1, {}}};
  try {
    CellComplex::build(0, cells, {}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Invalid);
  }
}

TEST_CASE("gluing two intervals end to end gives a longer interval") {
  CellComplex a = interval_complex(1, "a_");
  CellComplex b = interval_complex(1, "b_");
  CellComplex g = glue_complexes(a, b, {{"a_v1", "b_v0"}});
  CHECK(g.cells().size() == 5);
  CHECK(g.is_in("a_v0"));
  CHECK(g.is_out("b_v1"));
  CHECK(g.euler_characteristic() == 1);
}

TEST_CASE("gluing an interval to itself gives a circle") {
  CellComplex a = interval_complex(1, "a_");
  // Both endpoints of a second interval glued onto a's endpoints.
  CellComplex left = CellComplex::build(
      1, {{"p", 0, {}}, {"q", 0, {}}, {"s", 1, {{"q", 1}, {"p", -1}}}}, {}, {"p", "q"});
  CellComplex right = CellComplex::build(
      1, {{"x", 0, {}}, {"y", 0, {}}, {"t", 1, {{"y", 1}, {"x", -1}}}}, {"x", "y"}, {});
  CellComplex g = glue_complexes(left, right, {{"p", "x"}, {"q", "y"}});
  CHECK(g.cells().size() == 4);
  CHECK(g.euler_characteristic() == 0);
  CHECK(g.in_boundary().empty());
  CHECK(g.out_boundary().empty());
}

TEST_CASE("edge subdivision preserves the euler characteristic") {
  CellComplex x = interval_complex(1);
  CellComplex y = x.subdivide_edge("e0", "w", "ea", "eb");
  CHECK(y.euler_characteristic() == x.euler_characteristic());
  CHECK(y.cells().size() == x.cells().size() + 2);
}
