#include <cmath>
#include <random>

#include "doctest.h"
#include "pasurf/errors.hpp"
#include "pasurf/jet.hpp"

using namespace pasurf;

namespace {

ScalarField field3(std::function<Jet2(const Jet2&, const Jet2&, const Jet2&)> f) {
  return {3, [f](std::span<const Jet2> x) { return f(x[0], x[1], x[2]); }};
}

// Random composition of elementary functions, built from a seed so every
// draw is reproducible. Arguments are kept inside each function's domain.
Jet2 random_composite(std::mt19937& rng, int depth, std::span<const Jet2> x) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> var(0, static_cast<int>(x.size()) - 1);
  std::uniform_real_distribution<double> coef(0.3, 1.5);
  if (depth == 0) return x[var(rng)] * coef(rng);
  const Jet2 a = random_composite(rng, depth - 1, x);
  const Jet2 b = random_composite(rng, depth - 1, x);
  switch (pick(rng)) {
    case 0: return a + b;
    case 1: return a * b;
    case 2: return a / (2.0 + b * b);
    case 3: return sin(a) + b;
    case 4: return exp(0.3 * a) * cos(b);
    case 5: return log(1.0 + a * a) - b;
    case 6: return sqrt(1.0 + b * b) * a;
    case 7: return tanh(a) * sech(b);
    case 8: return atan(a) + asinh(b);
    default: return pow(1.5 + sin(a), 3.0) - b;
  }
}

}  // namespace

TEST_CASE("jet_eval of a constant has zero derivatives") {
  ScalarField one{2, [](std::span<const Jet2>) { return Jet2(1.0); }};
  const double p[] = {0.3, -1.2};
  const Jet2 j = jet_eval(one, p);
  CHECK(j.value() == 1.0);
  for (int i = 0; i < 2; ++i) {
    CHECK(j.grad(i) == 0.0);
    for (int k = 0; k < 2; ++k) CHECK(j.hess(i, k) == 0.0);
  }
}

TEST_CASE("jet_eval of x*y at (2,3)") {
  ScalarField xy{2, [](std::span<const Jet2> x) { return x[0] * x[1]; }};
  const double p[] = {2.0, 3.0};
  const Jet2 j = jet_eval(xy, p);
  CHECK(j.value() == 6.0);
  CHECK(j.grad(0) == 3.0);
  CHECK(j.grad(1) == 2.0);
  CHECK(j.hess(0, 1) == 1.0);
  CHECK(j.hess(1, 0) == 1.0);
  CHECK(j.hess(0, 0) == 0.0);
}

TEST_CASE("1/z^2 derivatives match the finite-difference oracle") {
  const ScalarField f = field3([](const Jet2&, const Jet2&, const Jet2& z) { return 1.0 / (z * z); });
  const double p[] = {0.4, -0.7, 2.0};

  // Oracle first: Richardson-extrapolated central differences.
  const FdEstimate fd = fd_oracle(f, p, 2, 1e-4);
  CHECK(fd.gradient(2) == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(fd.hessian(2, 2) == doctest::Approx(0.375).epsilon(1e-6));
  CHECK_FALSE(fd.roundoff_warning);

  const Jet2 j = jet_eval(f, p);
  CHECK(j.grad(2) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(j.hess(2, 2) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(j.grad(0) == 0.0);
}

TEST_CASE("fd_oracle: sin at 0 and round-off warning") {
  ScalarField s{1, [](std::span<const Jet2> x) { return sin(x[0]); }};
  const double p[] = {0.0};
  const FdEstimate fd = fd_oracle(s, p, 1, 1e-4);
  CHECK(std::abs(fd.gradient(0) - 1.0) <= 1e-8);

  const FdEstimate tiny = fd_oracle(s, p, 2, 1e-9);
  CHECK(tiny.roundoff_warning);
  CHECK_THROWS_AS(fd_oracle(s, p, 1, 0.0), ValidationError);
  CHECK_THROWS_AS(fd_oracle(s, p, 3, 1e-4), ValidationError);
}

TEST_CASE("Hessian is exactly symmetric") {
  const ScalarField f = field3([](const Jet2& x, const Jet2& y, const Jet2& z) {
    return exp(x * y) * sin(z - y) / (1.0 + x * x);
  });
  const double p[] = {0.3, 0.7, -0.2};
  const Jet2 j = jet_eval(f, p);
  const Eigen::MatrixXd h = j.hessian();
  CHECK((h - h.transpose()).norm() == 0.0);
}

TEST_CASE("property: jets agree with finite differences on random composites") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned seed = rng();
    ScalarField f{3, [seed](std::span<const Jet2> x) {
                    std::mt19937 local(seed);
                    return random_composite(local, 3, x);
                  }};
    const double p[] = {coord(rng), coord(rng), coord(rng)};
    const Jet2 j = jet_eval(f, p);
    const FdEstimate fd = fd_oracle(f, p, 2, 1e-4);
    const double scale = 1.0 + std::abs(j.value());
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(j.grad(i) - fd.gradient(i)) <= 1e-6 * scale);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(j.hess(i, k) - fd.hessian(i, k)) <= 1e-4 * scale);
    }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("chain rule: jet of a composition equals composition of jets") {
  // g(x, y) = (x*y, x + y); f(a, b) = sin(a) * b. Composite h = f(g(x, y)).
  const double p[] = {0.6, -0.4};
  ScalarField h{2, [](std::span<const Jet2> x) {
                  const Jet2 a = x[0] * x[1];
                  const Jet2 b = x[0] + x[1];
                  return sin(a) * b;
                }};
  const Jet2 direct = jet_eval(h, p);

  // Manual chain rule from the inner and outer jets.
  ScalarField ga{2, [](std::span<const Jet2> x) { return x[0] * x[1]; }};
  ScalarField gb{2, [](std::span<const Jet2> x) { return x[0] + x[1]; }};
  ScalarField f{2, [](std::span<const Jet2> x) { return sin(x[0]) * x[1]; }};
  const Jet2 ja = jet_eval(ga, p), jb = jet_eval(gb, p);
  const double inner[] = {ja.value(), jb.value()};
  const Jet2 jf = jet_eval(f, inner);
  for (int i = 0; i < 2; ++i) {
    const double gi = jf.grad(0) * ja.grad(i) + jf.grad(1) * jb.grad(i);
    CHECK(direct.grad(i) == doctest::Approx(gi).epsilon(1e-14));
    for (int k = 0; k < 2; ++k) {
      const double hik = jf.hess(0, 0) * ja.grad(i) * ja.grad(k) +
                         jf.hess(0, 1) * (ja.grad(i) * jb.grad(k) + jb.grad(i) * ja.grad(k)) +
                         jf.hess(1, 1) * jb.grad(i) * jb.grad(k) + jf.grad(0) * ja.hess(i, k) +
                         jf.grad(1) * jb.hess(i, k);
      CHECK(direct.hess(i, k) == doctest::Approx(hik).epsilon(1e-13));
    }
  }
}

TEST_CASE("domain violations throw") {
  const Jet2 neg = Jet2::variable(-1.0, 0, 1);
  CHECK_THROWS_AS(log(neg), DomainError);
  CHECK_THROWS_AS(sqrt(neg), DomainError);
  CHECK_THROWS_AS(coth(Jet2::variable(0.0, 0, 1)), DomainError);
  CHECK_THROWS_AS(asin(Jet2::variable(1.5, 0, 1)), DomainError);
  CHECK_THROWS_AS(pow(neg, 0.5), DomainError);
  CHECK(pow(neg, 3.0).value() == -1.0);

  ScalarField bad{1, [](std::span<const Jet2> x) { return x[0] / 0.0; }};
  const double p[] = {1.0};
  CHECK_THROWS_AS(jet_eval(bad, p), DomainError);
}

TEST_CASE("dual arithmetic") {
  const Dual x = Dual::variable(0.5, 0, 2);
  const Dual y = Dual::variable(2.0, 1, 2);
  const Dual r = x * y / (x + y);
  // d/dx (xy/(x+y)) = y²/(x+y)², d/dy = x²/(x+y)²
  CHECK(r.d(0) == doctest::Approx(4.0 / 6.25));
  CHECK(r.d(1) == doctest::Approx(0.25 / 6.25));
  const Dual t = atan2(y, x);
  CHECK(t.d(0) == doctest::Approx(-2.0 / 4.25));
  CHECK(t.d(1) == doctest::Approx(0.5 / 4.25));
  CHECK(sqrt(y).d(1) == doctest::Approx(0.5 / std::sqrt(2.0)));
}
