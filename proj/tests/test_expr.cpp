#include <cmath>
#include <random>
#include <string>

#include "corpus.hpp"
#include "doctest.h"
#include "pasurf/expr.hpp"

using namespace pasurf;
using pasurf::testing::kCorpus;

namespace {

const std::vector<std::string> kXYZ{"x", "y", "z"};

Jet2 eval_at(const expr::Expr& e, std::span<const double> p) {
  return jet_eval(expr::to_field(e), p);
}

}  // namespace

TEST_CASE("parse and evaluate 1/(z*z)") {
  const auto e = expr::parse("1/(z*z)", kXYZ);
  const double p[] = {0.0, 0.0, 2.0};
  CHECK(eval_at(e, p).value() == 0.25);
}

TEST_CASE("hemisphere parametrization parses with a bound constant") {
  const auto e = expr::parse("r*cos(asin(sech(u)))*cos(v)", {"u", "v", "r"});
  const std::vector<Jet2> b{Jet2::variable(0.7, 0, 2), Jet2::variable(0.3, 1, 2), Jet2(2.0)};
  const Jet2 j = e.eval(b);
  // cos(asin(sech u)) = tanh u for u > 0
  CHECK(j.value() == doctest::Approx(2.0 * std::tanh(0.7) * std::cos(0.3)).epsilon(1e-14));
  const double sech = 1.0 / std::cosh(0.7);
  CHECK(j.grad(0) == doctest::Approx(2.0 * sech * sech * std::cos(0.3)).epsilon(1e-13));
}

TEST_CASE("unbalanced parenthesis is located") {
  try {
    expr::parse("sech(q - sqrt(2)*u", {"q", "u"});
    FAIL("expected a parse error");
  } catch (const expr::ParseError& err) {
    CHECK(err.offset() == 4);
    CHECK(err.excerpt() == "sech(q - sqrt(2)*u\n    ^");
  }
  CHECK_THROWS_AS(expr::parse("(x + y", kXYZ), expr::ParseError);
  CHECK_THROWS_AS(expr::parse("x + y)", kXYZ), expr::ParseError);
}

TEST_CASE("parse diagnostics") {
  auto offset_of = [](std::string_view src) -> std::size_t {
    try {
      expr::parse(src, kXYZ);
    } catch (const expr::ParseError& e) {
      return e.offset();
    }
    return std::string::npos;
  };
  CHECK(offset_of("x + w") == 4);           // unknown identifier
  CHECK(offset_of("x # y") == 2);           // lexical error
  CHECK(offset_of("sin(x, y)") == 0);       // arity mismatch
  CHECK(offset_of("sin + 1") == 0);         // function without argument
  CHECK(offset_of("x * ") == 4);            // premature end
  CHECK_THROWS_AS(expr::parse("x", {"x", "sin"}), ValidationError);
}

TEST_CASE("precedence and associativity") {
  const double p[] = {2.0, 3.0, 0.5};
  auto v = [&](std::string_view s) { return eval_at(expr::parse(s, kXYZ), p).value(); };
  CHECK(v("-x^2") == -4.0);
  CHECK(v("x^y^2") == doctest::Approx(std::pow(2.0, 9.0)).epsilon(1e-14));
  CHECK(v("x - y - z") == doctest::Approx(-1.5));
  CHECK(v("x / y / z") == doctest::Approx(2.0 / 3.0 / 0.5));
  CHECK(v("x + y * z") == doctest::Approx(3.5));
  CHECK(v("x^-1") == 0.5);
  CHECK(v("2e-1 * x") == doctest::Approx(0.4));
  CHECK(v("2*e") == doctest::Approx(2.0 * std::exp(1.0)));
  CHECK(v("pi") == doctest::Approx(M_PI));
}

TEST_CASE("sech at 0: value 1, first derivative 0, second derivative -1") {
  const auto e = expr::parse("sech(u)", {"u"});
  const double p[] = {0.0};
  const Jet2 j = eval_at(e, p);
  CHECK(j.value() == 1.0);
  CHECK(j.grad(0) == 0.0);
  CHECK(j.hess(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("x^2 + y^2 gradient") {
  const auto e = expr::parse("x^2 + y^2", kXYZ);
  const double p[] = {1.5, -0.5, 1.0};
  const Jet2 j = eval_at(e, p);
  CHECK(j.grad(0) == 3.0);
  CHECK(j.grad(1) == -1.0);
  CHECK(j.grad(2) == 0.0);
}

TEST_CASE("domain errors carry the node location") {
  const double p[] = {0.0, 0.0, -1.0};
  try {
    eval_at(expr::parse("x + log(z)", kXYZ), p);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
  }
  CHECK_THROWS_AS(eval_at(expr::parse("sqrt(z)", kXYZ), p), DomainError);
  CHECK_THROWS_AS(eval_at(expr::parse("coth(x)", kXYZ), p), DomainError);
  CHECK_THROWS_AS(eval_at(expr::parse("csch(y)", kXYZ), p), DomainError);
  CHECK_THROWS_AS(eval_at(expr::parse("asin(z - 1)", kXYZ), p), DomainError);
  CHECK_THROWS_AS(eval_at(expr::parse("z^0.5", kXYZ), p), DomainError);
  CHECK_THROWS_AS(eval_at(expr::parse("z^x", kXYZ), p), DomainError);
  CHECK_THROWS_AS(eval_at(expr::parse("1/x", kXYZ), p), DomainError);
  CHECK(eval_at(expr::parse("z^3", kXYZ), p).value() == -1.0);
}

TEST_CASE("property: parse . print . parse is idempotent on the corpus") {
  for (auto src : kCorpus) {
    CAPTURE(src);
    const auto first = expr::parse(src, kXYZ);
    const auto second = expr::parse(first.print(), kXYZ);
    CHECK(expr::structurally_equal(first.root(), second.root()));
    CHECK(second.print() == first.print());
  }
}

TEST_CASE("property: corpus jets agree with finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> xy(-1.0, 1.0), z(0.5, 2.0);
  for (auto src : kCorpus) {
    CAPTURE(src);
    const auto e = expr::parse(src, kXYZ);
    const ScalarField f = expr::to_field(e);
    for (int k = 0; k < 5; ++k) {
      const double p[] = {xy(rng), xy(rng), z(rng)};
      const Jet2 j = jet_eval(f, p);
      const FdEstimate fd = fd_oracle(f, p, 2, 1e-4);
      const double scale = 1.0 + std::abs(j.value());
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(j.grad(i) - fd.gradient(i)) <= 1e-6 * scale);
        for (int l = 0; l < 3; ++l) CHECK(std::abs(j.hess(i, l) - fd.hessian(i, l)) <= 1e-4 * scale);
      }
    }
  }
}
