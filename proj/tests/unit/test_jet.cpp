#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "memkernel/jet.hpp"

using namespace memkernel;

TEST_CASE("products and compositions reproduce hand-computed partials") {
  const double x0 = 0.7, y0 = -0.4;
  const auto x = Jet<4>::variable(x0, 0);
  const auto y = Jet<4>::variable(y0, 1);

  // f = sin(x) exp(y): d1^i d2^j f = sin^(i)(x0) exp(y0)
  const auto f = sin(x) * exp(y);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      CHECK(f.partial(i, j) ==
            doctest::Approx(std::sin(x0 + i * M_PI / 2) * std::exp(y0)).epsilon(1e-14));

  // g = x^2 y^3: d1^2 d2^2 g = 2 * 6 y0 = 12 y0
  const auto g = x * x * y * y * y;
  CHECK(g.partial(2, 2) == doctest::Approx(12 * y0));
  CHECK(g.partial(1, 3) == doctest::Approx(2 * x0 * 6));
  CHECK(g.partial(0, 4) == doctest::Approx(0.0));
}

TEST_CASE("sqrt and inverse match closed-form derivatives") {
  const double x0 = 1.3;
  const auto x = Jet<4>::variable(x0, 0);
  const auto s = sqrt(x);
  CHECK(s.partial(1, 0) == doctest::Approx(0.5 / std::sqrt(x0)));
  CHECK(s.partial(2, 0) == doctest::Approx(-0.25 * std::pow(x0, -1.5)));
  CHECK(s.partial(3, 0) == doctest::Approx(0.375 * std::pow(x0, -2.5)));
  CHECK(s.partial(4, 0) == doctest::Approx(-0.9375 * std::pow(x0, -3.5)));
  const auto r = 1.0 / x;
  CHECK(r.partial(4, 0) == doctest::Approx(24.0 / std::pow(x0, 5)));
  const auto one = r * x;
  CHECK(one.value() == doctest::Approx(1.0));
  for (int k = 1; k < Jet<4>::size; ++k) CHECK(std::abs(one.c[k]) < 1e-14);
}

TEST_CASE("derivative and truncate shift orders consistently") {
  const auto x = Jet<4>::variable(0.3, 0);
  const auto y = Jet<4>::variable(0.2, 1);
  const auto f = cos(x * y) + x * x * x * y;
  const auto fy = derivative(f, 1);
  const auto fxy = derivative(fy, 0);
  CHECK(fxy.value() == doctest::Approx(f.partial(1, 1)));
  CHECK(fxy.partial(1, 1) == doctest::Approx(f.partial(2, 2)));
  const auto t = truncate<2>(f);
  CHECK(t.partial(2, 0) == doctest::Approx(f.partial(2, 0)));
  CHECK(lift<double>(f) == f.value());
}

TEST_CASE("Eigen vectors of jets") {
  const auto x = Jet<2>::variable(0.5, 0);
  Vec3<Jet<2>> v(x, x * x, Jet<2>(2.0));
  Vec3<Jet<2>> w = v * x + Vec3<double>(1, 2, 3).cast<Jet<2>>();
  CHECK(w(1).partial(2, 0) == doctest::Approx(6 * 0.5));
  CHECK(w(2).partial(1, 0) == doctest::Approx(2.0));
}
