#include <doctest.h>

#include "bfq/matrix.hpp"
#include "bfq/prefactor.hpp"
#include "bfq/scalar.hpp"

using namespace bfq;

TEST_CASE("gaussian rational arithmetic") {
  GaussianRational a(Rat(1), Rat(2));
  GaussianRational b(Rat(3), Rat(-1));
  CHECK((a * b) == GaussianRational(Rat(5), Rat(5)));
  CHECK((a / a) == GaussianRational(Rat(1)));
  CHECK(i_power(2) == GaussianRational(Rat(-1)));
  CHECK(i_power(-1) == GaussianRational(Rat(0), Rat(-1)));
}

TEST_CASE("scalar laurent arithmetic") {
  Scalar x = Scalar::hbar(2) + Scalar::hbar(-1);
  Scalar y = Scalar::i_over_hbar();
  Scalar p = x * y;
  CHECK(p.coeff(1) == GaussianRational::i());
  CHECK(p.coeff(-2) == GaussianRational::i());
  CHECK((x - x).is_zero());
  CHECK((p / Scalar::hbar(1)).coeff(0) == GaussianRational::i());
}

TEST_CASE("prefactor canonical form") {
  Prefactor p;
  p.mul_sqrt(Rat(8));  // 2 sqrt(2)
  CHECK(p.coeff == GaussianRational(Rat(2)));
  CHECK(p.sqrt_arg == Rat(2));
  p.mul_phase16(20);  // zeta^20 = zeta^4 = i
  CHECK(p.phase16 == 0);
  CHECK(p.coeff == GaussianRational(Rat(0), Rat(2)));

  Prefactor q1, q2;
  q1.mul_phase16(8);          // -1
  q2.coeff = GaussianRational(Rat(-1));
  CHECK(q1 == q2);
  CHECK(q1.equals_up_to_sign(Prefactor::one()));
}

TEST_CASE("matrix basics") {
  Matrix m(2, 2);
  m.at(0, 0) = 1; m.at(0, 1) = 2; m.at(1, 0) = 3; m.at(1, 1) = 4;
  CHECK(m.det() == Rat(-2));
  CHECK(m.rank() == 2);
  Matrix inv = m.inverse();
  CHECK(inv * m == Matrix::identity(2));

  Matrix s(2, 2);
  s.at(0, 0) = 2; s.at(1, 1) = -3;
  CHECK(s.signature() == 0);
  Matrix cross(2, 2);
  cross.at(0, 1) = 1; cross.at(1, 0) = 1;
  CHECK(cross.signature() == 0);
  Matrix pos(2, 2);
  pos.at(0, 0) = 1; pos.at(1, 1) = 5;
  CHECK(pos.signature() == 2);
}

TEST_CASE("matrix solve and nullspace") {
  Matrix m(2, 3);
  m.at(0, 0) = 1; m.at(0, 1) = 1; m.at(0, 2) = 0;
  m.at(1, 1) = 1; m.at(1, 2) = 1;
  auto x = m.solve({Rat(3), Rat(2)});
  REQUIRE(x.has_value());
  // residual check
  CHECK((*x)[0] + (*x)[1] == Rat(3));
  CHECK((*x)[1] + (*x)[2] == Rat(2));
  Matrix ns = m.nullspace();
  CHECK(ns.cols() == 1);
  Matrix inconsistent(2, 1);
  inconsistent.at(0, 0) = 1;
  inconsistent.at(1, 0) = 1;
  CHECK(!inconsistent.solve({Rat(1), Rat(2)}).has_value());
}
