#include <doctest.h>

#include <cmath>
#include <random>

#include "hausmeter/enclosure.hpp"
#include "hausmeter/errors.hpp"

using namespace hausmeter;

TEST_CASE("ulp stepping agrees with nextafter") {
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_real_distribution<double> mag(-300.0, 300.0);
  for (int i = 0; i < 20000; ++i) {
    double x = std::ldexp(std::uniform_real_distribution<double>(-1.0, 1.0)(rng),
                          static_cast<int>(mag(rng) / 4));
    double up = x, down = x;
    for (int s = 0; s < 4; ++s) {
      up = std::nextafter(up, std::numeric_limits<double>::infinity());
      down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    }
    CHECK(ulp_up(x, 4) == up);
    CHECK(ulp_down(x, 4) == down);
  }
  CHECK(ulp_up(0.0, 4) > 0.0);
  CHECK(ulp_down(0.0, 4) < 0.0);
  CHECK(ulp_up(-0.0, 1) > 0.0);
  CHECK(ulp_up(std::numeric_limits<double>::max(), 4) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("arithmetic contains sampled values") {
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_real_distribution<double> val(0.01, 3.0);
  std::uniform_real_distribution<double> wid(0.0, 0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double alo = val(rng), blo = val(rng);
    const Enclosure a(alo, alo + wid(rng));
    const Enclosure b(blo, blo + wid(rng));
    const double x = a.lo + unit(rng) * a.width();
    const double y = b.lo + unit(rng) * b.width();
    CHECK(add(a, b).contains(x + y));
    CHECK(sub(a, b).contains(x - y));
    CHECK(mul(a, b).contains(x * y));
    CHECK(div(a, b).contains(x / y));
    CHECK(pow(a, b).contains(std::pow(x, y)));
    CHECK(log(a).contains(std::log(x)));
    CHECK(exp(b).contains(std::exp(y)));
  }
}

TEST_CASE("signed multiplication covers all quadrants") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    double a0 = val(rng), a1 = val(rng), b0 = val(rng), b1 = val(rng);
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    const Enclosure a(a0, a1), b(b0, b1);
    std::uniform_real_distribution<double> ua(a0, a1), ub(b0, b1);
    const double x = ua(rng), y = ub(rng);
    CHECK(mul(a, b).contains(x * y));
  }
}

TEST_CASE("pow handles zero base and unit edges") {
  const Enclosure base(0.0, 0.5);
  const Enclosure expo(0.5, 1.0);
  const Enclosure r = pow(base, expo);
  CHECK(r.lo <= 0.0);
  CHECK(r.hi >= std::pow(0.5, 0.5));
  CHECK(pow(Enclosure(1.0), Enclosure(0.7)).contains(1.0));
}

TEST_CASE("intersect and hull") {
  const Enclosure a(0.0, 2.0), b(1.0, 3.0);
  CHECK(intersect(a, b).lo == doctest::Approx(1.0));
  CHECK(intersect(a, b).hi == doctest::Approx(2.0));
  CHECK(hull(a, b).lo == 0.0);
  CHECK(hull(a, b).hi == 3.0);
  const Enclosure c = clamp(Enclosure(-1.0, 2.0), 0.0, 1.0);
  CHECK(c.lo == 0.0);
  CHECK(c.hi == 1.0);
}

TEST_CASE("division by zero-straddling interval is rejected") {
  CHECK_THROWS_AS(div(Enclosure(1.0), Enclosure(-1.0, 1.0)), Error);
}
