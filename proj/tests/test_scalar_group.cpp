#include <doctest.h>

#include <cmath>
#include <complex>

#include "support.hpp"
#include "weylgraph/errors.hpp"
#include "weylgraph/group.hpp"
#include "weylgraph/scalar.hpp"

using namespace weylgraph;

namespace {

// Floating-point shadow of an exact scalar; the oracle for field arithmetic.
std::complex<double> approx(const Scalar& s) {
  std::complex<double> z = 0;
  const double two_pi = 2 * std::acos(-1.0);
  for (std::size_t k = 0; k < s.coefficients().size(); ++k)
    z += s.coefficients()[k].get_d() * std::polar(1.0, two_pi * static_cast<double>(k) / s.conductor());
  return z;
}

Scalar random_scalar(Rng& rng) {
  static const std::uint32_t conductors[] = {1, 2, 3, 4, 5, 6, 8, 12};
  Scalar s;
  for (int t = 0; t < 3; ++t) {
    auto n = conductors[rng.below(8)];
    long num = static_cast<long>(rng.below(9)) - 4;
    long den = static_cast<long>(rng.below(3)) + 1;
    s += Scalar(mpq_class(num, den)) * Scalar::root_of_unity(n, static_cast<std::int64_t>(rng.below(n)));
  }
  return s;
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

}  // namespace

TEST_CASE("cyclotomic arithmetic matches the complex shadow") {
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    auto a = random_scalar(rng), b = random_scalar(rng);
    CHECK(close(approx(a + b), approx(a) + approx(b)));
    CHECK(close(approx(a * b), approx(a) * approx(b)));
    CHECK(close(approx(a.conj()), std::conj(approx(a))));
    CHECK((a == b) == close(approx(a), approx(b)));
    if (!a.is_zero()) {
      CHECK(a * a.inverse() == Scalar(1));
      CHECK(close(approx(a.inverse()), 1.0 / approx(a)));
    }
    CHECK(parse_scalar(a.to_string()) == a);
    CHECK(a.reduced() == a);
  }
}

TEST_CASE("roots of unity") {
  CHECK(Scalar::root_of_unity(4, 2) == Scalar(-1));
  CHECK(Scalar::root_of_unity(6, 1) * Scalar::root_of_unity(6, 1) == Scalar::root_of_unity(3, 1));
  Scalar sum;
  for (int k = 0; k < 8; ++k) sum += Scalar::root_of_unity(8, k);
  CHECK(sum.is_zero());
  CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
  CHECK(Scalar::i().conj() == -Scalar::i());
  CHECK(Scalar::root_of_unity(8, 2).to_string() == "zeta(4)");
  auto z = RootOfUnity::make(3, 8);
  CHECK(z.pow(8).is_one());
  CHECK((z * z.inverse()).is_one());
  CHECK(RootOfUnity::make(2, 4) == RootOfUnity::make(1, 2));
  CHECK(RootOfUnity::make(1, 2).to_scalar() == Scalar(-1));
  CHECK_THROWS_AS(Scalar(0).inverse(), PreconditionError);
  CHECK(parse_scalar("-3/4*zeta(8)^3") == Scalar(mpq_class(-3, 4)) * Scalar::root_of_unity(8, 3));
}

TEST_CASE("finite groups and characters") {
  auto s3 = FiniteGroup::symmetric(3);
  CHECK(s3.size() == 6);
  CHECK_FALSE(s3.is_abelian());
  auto t12 = *s3.find("(1 2)"), t23 = *s3.find("(2 3)");
  CHECK(s3.mul(t12, t12) == 0);
  CHECK(s3.order_of(s3.mul(t12, t23)) == 3);
  auto ab = abelianize(s3);
  CHECK(ab.quotient.size() == 2);
  auto chars = enumerate_characters(ab.quotient);
  REQUIRE(chars.size() == 2);
  CHECK(chars[0].is_trivial());
  auto sign = lift_character(chars[1], ab);
  CHECK(is_homomorphism(s3, sign));
  CHECK(sign({t12}) == RootOfUnity::make(1, 2));
  CHECK(sign({s3.mul(t12, t23)}).is_one());
  auto z6 = FiniteGroup::cyclic(6);
  auto c6 = enumerate_characters(z6);
  CHECK(c6.size() == 6);
  for (const auto& c : c6) CHECK(is_homomorphism(z6, c));
  for (std::size_t i = 0; i < c6.size(); ++i)
    for (std::size_t j = i + 1; j < c6.size(); ++j) CHECK_FALSE(c6[i] == c6[j]);
  auto s4 = FiniteGroup::symmetric(4);
  CHECK(s4.size() == 24);
  CHECK(abelianize(s4).quotient.size() == 2);
}

TEST_CASE("group parsing") {
  auto g = parse_group("S3");
  CHECK(g.order() == 6u);
  CHECK(g.format(g.parse_element("(1 2)")) == "(1 2)");
  CHECK(g.parse_element("perm 2 1 3") == g.parse_element("(1 2)"));
  auto z = parse_group("Z");
  CHECK(z.is_integers());
  CHECK(z.mul(z.parse_element("3"), z.inverse({5})).value == -2);
  CHECK(parse_group("Z/4").order() == 4u);
  CHECK_THROWS_AS(parse_group("Q8"), ParseError);
}
