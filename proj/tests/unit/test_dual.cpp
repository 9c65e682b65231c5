#include <doctest.h>

#include <cmath>

#include "pinn/errors.hpp"
#include "pinn//dual.hpp"
#include "pinn/verify.hpp"

using pinn::ad::Dual;

TEST_CASE("dual arithmetic carries exact first derivatives") {
  const double x0 = 0.7, y0 = -1.3;
  const auto x = Dual<2>::variable(x0, 0);
  const auto y = Dual<2>::variable(y0, 1);
  const auto f = [](auto a, auto b) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    return sin(a) * b - a / (b * b) + sqrt(a * a + b * b) - cos(a * b) + 3.0 * a - b / 2.0;
  };
  const auto r = f(x, y);
  CHECK(r.v == doctest::Approx(f(x0, y0)).epsilon(1e-15));
  const double dfx = pinn::richardson_first([&](double a) { return f(a, y0); }, x0);
  const double dfy = pinn::richardson_first([&](double b) { return f(x0, b); }, y0);
  CHECK(r.d[0] == doctest::Approx(dfx).epsilon(1e-10));
  CHECK(r.d[1] == doctest::Approx(dfy).epsilon(1e-10));
}

TEST_CASE("hand derivatives") {
  const auto x = Dual<1>::variable(0.5, 0);
  CHECK((x * x).d[0] == doctest::Approx(1.0));
  CHECK(sin(x).d[0] == doctest::Approx(std::cos(0.5)));
  CHECK(cos(x).d[0] == doctest::Approx(-std::sin(0.5)));
  CHECK(sqrt(x).d[0] == doctest::Approx(0.5 / std::sqrt(0.5)));
  CHECK((1.0 / x).d[0] == doctest::Approx(-4.0));
  CHECK((-x).d[0] == doctest::Approx(-1.0));
  CHECK(pinn::ad::value_of(x) == 0.5);
}
