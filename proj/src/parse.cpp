#include "weylgraph/parse.hpp"

#include <cctype>
#include <sstream>

#include "weylgraph/errors.hpp"

namespace weylgraph {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(const GraphPtr& g, std::string_view text) : g_(g), s_(text) {}

  AlgebraElement parse() {
    auto v = expr();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, "column " + std::to_string(col) + ": " + msg);
  }

  void skip() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  long long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }
  std::string until(char close) {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != close) ++pos_;
    if (pos_ == s_.size()) fail(std::string("expected '") + close + "'");
    auto body = std::string(s_.substr(start, pos_ - start));
    ++pos_;
    return body;
  }

  AlgebraElement expr() {
    AlgebraElement v = AlgebraElement::zero(g_);
    bool negative = false;
    if (eat("-"))
      negative = true;
    else
      eat("+");
    v = term();
    if (negative) v *= Scalar(-1);
    for (;;) {
      if (eat("+"))
        v += term();
      else if (eat("-"))
        v -= term();
      else
        return v;
    }
  }

  AlgebraElement term() {
    AlgebraElement v = item();
    while (eat("*")) v = v * item();
    return v;
  }

  AlgebraElement item() {
    skip();
    const std::size_t at = pos_;
    if (eat("S(")) {
      auto body = until(')');
      FinitePath mu;
      try {
        mu = parse_path(*g_, body);
      } catch (const ParseError& e) {
        pos_ = at;
        fail(e.what());
      }
      auto s = AlgebraElement::monomial(g_, mu, FinitePath::at(mu.target()));
      return eat("^*") ? involute(s) : s;
    }
    if (eat("P(")) {
      auto name = until(')');
      while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
      auto v = g_->find_vertex(name);
      if (!v) {
        pos_ = at;
        fail("unknown vertex '" + name + "'");
      }
      return AlgebraElement::vertex(g_, *v);
    }
    if (eat("(")) {
      auto v = expr();
      expect(")");
      return eat("^*") ? involute(v) : v;
    }
    return AlgebraElement::scalar(g_, scalar());
  }

  Scalar scalar() {
    if (eat("zeta(")) {
      auto n = integer();
      if (n <= 0) fail("zeta order must be positive");
      expect(")");
      long long k = 1;
      if (eat("^")) {
        const bool neg = eat("-");
        k = integer();
        if (neg) k = -k;
      }
      return Scalar::root_of_unity(static_cast<std::uint32_t>(n), k);
    }
    auto num = integer();
    if (eat("/")) {
      auto den = integer();
      if (den == 0) fail("zero denominator");
      return Scalar(mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))));
    }
    return Scalar(mpq_class(mpz_class(static_cast<long>(num))));
  }

  GraphPtr g_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

RootOfUnity parse_fraction(const std::string& text, std::size_t line) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return RootOfUnity::make(std::stoll(text), 1);
    auto den = std::stoll(text.substr(slash + 1));
    if (den <= 0) throw ParseError(line, "denominator must be positive");
    return RootOfUnity::make(std::stoll(text.substr(0, slash)), den);
  } catch (const std::logic_error&) {
    throw ParseError(line, "expected a fraction p/q, got '" + text + "'");
  }
}

}  // namespace

AlgebraElement parse_expression(const GraphPtr& g, std::string_view text) { return ExpressionParser(g, text).parse(); }

Cocycle parse_cocycle(const EdgeLabeling& theta, std::string_view text) {
  const auto& gp = theta.graph_ptr();
  const Graph& g = *gp;
  std::vector<Cocycle> factors;
  CircleFunction edges{1, {}, RootOfUnity::one()};
  std::optional<CircleFunction> cob;
  std::istringstream in{std::string(text)};
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    if (kw == "trivial" && args.empty()) {
      factors.push_back(Cocycle::trivial());
    } else if (kw == "char" && args.size() == 1) {
      if (theta.group().is_integers()) throw ParseError(line, "char needs a finite group");
      auto ab = abelianize(theta.group().finite_group());
      auto chars = enumerate_characters(ab.quotient);
      std::size_t index = 0;
      try {
        index = std::stoul(args[0]);
      } catch (const std::logic_error&) {
        throw ParseError(line, "bad character index '" + args[0] + "'");
      }
      if (index >= chars.size())
        throw ParseError(line, "character index " + args[0] + " out of range (" + std::to_string(chars.size()) +
                                   " characters)");
      factors.push_back(Cocycle::labeled(theta, lift_character(chars[index], ab)));
    } else if (kw == "gauge" && args.size() == 2) {
      try {
        auto n = std::stoul(args[0]);
        if (n == 0) throw ParseError(line, "gauge order must be positive");
        factors.push_back(Cocycle::gauge(gp, n, std::stoll(args[1])));
      } catch (const std::logic_error&) {
        throw ParseError(line, "gauge expects <n> <k>");
      }
    } else if (kw == "edge" && args.size() == 2) {
      auto e = g.find_edge(args[0]);
      if (!e) throw ParseError(line, "unknown edge '" + args[0] + "'");
      edges.values[FinitePath::of(g, {*e})] = parse_fraction(args[1], line);
    } else if (kw == "cob" && args.size() >= 3 && args[args.size() - 2] == "=") {
      std::string word;
      for (std::size_t i = 0; i + 2 < args.size(); ++i) word += (i ? " " : "") + args[i];
      FinitePath p;
      try {
        p = parse_path(g, word);
      } catch (const ParseError& err) {
        throw ParseError(line, err.what());
      }
      if (!cob) cob = CircleFunction{p.length(), {}, RootOfUnity::one()};
      if (cob->window != p.length()) throw ParseError(line, "coboundary words must share one length");
      cob->values[p] = parse_fraction(args.back(), line);
    } else {
      throw ParseError(line, "unrecognized cocycle line '" + raw + "'");
    }
  }
  if (!edges.values.empty()) factors.push_back(Cocycle::birkhoff(gp, edges));
  if (cob) factors.push_back(Cocycle::coboundary(gp, *cob));
  if (factors.size() == 1) return factors.front();
  return Cocycle::product(std::move(factors));
}

}  // namespace weylgraph
