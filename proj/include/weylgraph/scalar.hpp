#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace weylgraph {

// Element of the cyclotomic field Q(ζ_N): rational coefficients of
// 1, ζ, ..., ζ^{φ(N)-1}, reduced modulo the N-th cyclotomic polynomial.
// Values with different conductors are compared and combined in Q(ζ_lcm).
class Scalar {
 public:
  Scalar() : Scalar(mpq_class(0)) {}
  Scalar(long n) : Scalar(mpq_class(n)) {}
  Scalar(const mpq_class& q);
  static Scalar root_of_unity(std::uint32_t n, std::int64_t k);
  static Scalar i() { return root_of_unity(4, 1); }

  std::uint32_t conductor() const { return n_; }
  const std::vector<mpq_class>& coefficients() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  Scalar conj() const;
  // Throws PreconditionError on zero.
  Scalar inverse() const;
  // Same value at the least conductor dividing the current one that contains it.
  Scalar reduced() const;
  // "3/2 - zeta(4)^1"-style text at the least conductor; parseable by parse_scalar.
  std::string to_string() const;

 private:
  Scalar(std::uint32_t n, std::vector<mpq_class> c) : n_(n), c_(std::move(c)) {}
  Scalar embedded(std::uint32_t m) const;

  std::uint32_t n_ = 1;
  std::vector<mpq_class> c_;
};

// exp(2πi·num/den), stored with 0 ≤ num < den and gcd(num, den) = 1.
struct RootOfUnity {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static RootOfUnity make(std::int64_t num, std::int64_t den);
  static RootOfUnity one() { return {}; }
  bool is_one() const { return num == 0; }
  RootOfUnity inverse() const { return make(-num, den); }
  RootOfUnity pow(std::int64_t k) const;
  Scalar to_scalar() const { return Scalar::root_of_unity(static_cast<std::uint32_t>(den), num); }
  std::string to_string() const;

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
  friend auto operator<=>(const RootOfUnity&, const RootOfUnity&) = default;
};

// Grammar: product of factors, each a rational ("-3/4") or "zeta(N)" with an
// optional "^k"; a parenthesized sum of such products is also accepted.
Scalar parse_scalar(const std::string& text);

}  // namespace weylgraph
