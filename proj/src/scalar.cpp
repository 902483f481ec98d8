#include "weylgraph/scalar.hpp"

#include <cctype>
#include <numeric>
#include <optional>
#include <unordered_map>

#include "weylgraph/errors.hpp"

namespace weylgraph {

namespace {

using IntPoly = std::vector<long>;

// Monic integer Φ_n, coefficients in increasing degree.
const IntPoly& cyclotomic(std::uint32_t n) {
  thread_local std::unordered_map<std::uint32_t, IntPoly> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  IntPoly p(n + 1, 0);
  p[0] = -1;
  p[n] = 1;
  for (std::uint32_t d = 1; d < n; ++d) {
    if (n % d) continue;
    IntPoly q = cyclotomic(d);
    // Exact division of p by the monic q.
    const auto dq = q.size() - 1;
    IntPoly quot(p.size() - dq, 0);
    for (std::size_t i = p.size(); i-- > dq;) {
      long c = p[i];
      quot[i - dq] = c;
      if (c)
        for (std::size_t j = 0; j <= dq; ++j) p[i - dq + j] -= c * q[j];
    }
    p = std::move(quot);
  }
  return cache.emplace(n, std::move(p)).first->second;
}

std::size_t phi(std::uint32_t n) { return cyclotomic(n).size() - 1; }

std::vector<mpq_class> reduce(std::vector<mpq_class> poly, std::uint32_t n) {
  const auto& f = cyclotomic(n);
  const auto deg = f.size() - 1;
  for (std::size_t i = poly.size(); i-- > deg;) {
    if (sgn(poly[i]) == 0) continue;
    mpq_class c = poly[i];
    for (std::size_t j = 0; j <= deg; ++j)
      if (f[j]) poly[i - deg + j] -= c * f[j];
  }
  poly.resize(deg);
  return poly;
}

// Solves A x = b for a tall matrix given by columns; nullopt when inconsistent.
std::optional<std::vector<mpq_class>> solve(std::vector<std::vector<mpq_class>> cols,
                                            std::vector<mpq_class> b) {
  const auto rows = b.size(), n = cols.size();
  std::vector<std::vector<mpq_class>> m(rows, std::vector<mpq_class>(n + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) m[r][c] = cols[c][r];
    m[r][n] = b[r];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    mpq_class inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || sgn(m[q][c]) == 0) continue;
      mpq_class f = m[q][c];
      for (std::size_t k = c; k <= n; ++k) m[q][k] -= f * m[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t q = r; q < rows; ++q)
    if (sgn(m[q][n]) != 0) return std::nullopt;
  std::vector<mpq_class> x(n, 0);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = m[i][n];
  return x;
}

std::uint32_t lcm32(std::uint32_t a, std::uint32_t b) {
  auto l = std::lcm<std::uint64_t>(a, b);
  if (l > (1u << 16)) throw BoundExceeded("cyclotomic conductor exceeds 65536");
  return static_cast<std::uint32_t>(l);
}

}  // namespace

Scalar::Scalar(const mpq_class& q) : n_(1), c_{q} { c_[0].canonicalize(); }

Scalar Scalar::root_of_unity(std::uint32_t n, std::int64_t k) {
  if (n == 0) throw PreconditionError("root of unity of order 0");
  auto e = static_cast<std::size_t>(((k % static_cast<std::int64_t>(n)) + n) % n);
  std::vector<mpq_class> poly(std::max<std::size_t>(e + 1, phi(n)), 0);
  poly[e] = 1;
  return Scalar(n, reduce(std::move(poly), n));
}

bool Scalar::is_zero() const {
  for (const auto& q : c_)
    if (sgn(q) != 0) return false;
  return true;
}

bool Scalar::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (sgn(c_[i]) != 0) return false;
  return true;
}

Scalar Scalar::embedded(std::uint32_t m) const {
  if (m == n_) return *this;
  const std::uint32_t s = m / n_;
  std::vector<mpq_class> poly(std::max<std::size_t>((c_.size() - 1) * s + 1, phi(m)), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) poly[i * s] = c_[i];
  return Scalar(m, reduce(std::move(poly), m));
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.n_ != n_) {
    auto m = lcm32(n_, o.n_);
    *this = embedded(m);
    Scalar b = o.embedded(m);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.n_ == 1) {
    for (auto& q : c_) q *= o.c_[0];
    return *this;
  }
  if (n_ == 1) {
    mpq_class f = c_[0];
    *this = o;
    for (auto& q : c_) q *= f;
    return *this;
  }
  auto m = lcm32(n_, o.n_);
  Scalar a = embedded(m), b = o.embedded(m);
  std::vector<mpq_class> poly(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) poly[i + j] += a.c_[i] * b.c_[j];
  }
  *this = Scalar(m, reduce(std::move(poly), m));
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.n_ == b.n_) return a.c_ == b.c_;
  auto m = lcm32(a.n_, b.n_);
  return a.embedded(m).c_ == b.embedded(m).c_;
}

Scalar Scalar::conj() const {
  if (n_ == 1) return *this;
  std::vector<mpq_class> poly(n_, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) poly[(n_ - i) % n_] += c_[i];
  return Scalar(n_, reduce(std::move(poly), n_));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw PreconditionError("inverse of zero scalar");
  if (n_ == 1) return Scalar(mpq_class(1 / c_[0]));
  const auto d = c_.size();
  std::vector<std::vector<mpq_class>> cols;
  for (std::size_t j = 0; j < d; ++j) cols.push_back((*this * root_of_unity(n_, j)).embedded(n_).c_);
  std::vector<mpq_class> e0(d, 0);
  e0[0] = 1;
  auto x = solve(std::move(cols), std::move(e0));
  return Scalar(n_, std::move(*x));
}

Scalar Scalar::reduced() const {
  if (is_rational()) return Scalar(c_[0]);
  for (std::uint32_t d = 2; d < n_; ++d) {
    if (n_ % d) continue;
    std::vector<std::vector<mpq_class>> cols;
    for (std::size_t j = 0; j < phi(d); ++j) cols.push_back(root_of_unity(d, j).embedded(n_).c_);
    if (auto x = solve(std::move(cols), c_)) return Scalar(d, std::move(*x));
  }
  return *this;
}

std::string Scalar::to_string() const {
  Scalar r = reduced();
  std::string out;
  for (std::size_t k = 0; k < r.c_.size(); ++k) {
    const mpq_class& q = r.c_[k];
    if (sgn(q) == 0) continue;
    std::string term;
    if (k == 0) {
      term = q.get_str();
    } else {
      std::string mono = "zeta(" + std::to_string(r.n_) + ")";
      if (k > 1) mono += "^" + std::to_string(k);
      if (q == 1) term = mono;
      else if (q == -1) term = "-" + mono;
      else term = q.get_str() + "*" + mono;
    }
    if (out.empty()) out = term;
    else if (term[0] == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

RootOfUnity RootOfUnity::make(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw PreconditionError("root of unity needs a positive denominator");
  num %= den;
  if (num < 0) num += den;
  auto g = std::gcd(num, den);
  if (g == 0) g = den;
  return {num / g, den / g};
}

RootOfUnity RootOfUnity::pow(std::int64_t k) const {
  // num·k mod den without overflow for the small orders used here.
  __int128 v = static_cast<__int128>(num) * k % den;
  return make(static_cast<std::int64_t>(v), den);
}

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
  auto l = std::lcm(a.den, b.den);
  return RootOfUnity::make(a.num * (l / a.den) + b.num * (l / b.den), l);
}

std::string RootOfUnity::to_string() const {
  if (is_one()) return "1";
  if (den == 2) return "-1";
  std::string s = "zeta(" + std::to_string(den) + ")";
  return num == 1 ? s : s + "^" + std::to_string(num);
}

namespace {

class ScalarParser {
 public:
  explicit ScalarParser(const std::string& s) : s_(s) {}

  Scalar parse() {
    Scalar v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(0, "scalar at column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  Scalar sum() {
    Scalar v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  Scalar product() {
    Scalar v = factor();
    while (eat('*')) v *= factor();
    return v;
  }
  Scalar factor() {
    if (eat('-')) return -factor();
    if (eat('(')) {
      Scalar v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    skip();
    if (s_.compare(pos_, 5, "zeta(") == 0) {
      pos_ += 5;
      auto n = integer();
      if (n <= 0) fail("zeta order must be positive");
      if (!eat(')')) fail("expected ')'");
      long long k = 1;
      if (eat('^')) {
        bool neg = eat('-');
        k = integer();
        if (neg) k = -k;
      }
      return Scalar::root_of_unity(static_cast<std::uint32_t>(n), k);
    }
    auto num = integer();
    if (eat('/')) {
      auto den = integer();
      if (den == 0) fail("zero denominator");
      return Scalar(mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))));
    }
    return Scalar(mpq_class(mpz_class(static_cast<long>(num))));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(const std::string& text) { return ScalarParser(text).parse(); }

}  // namespace weylgraph
