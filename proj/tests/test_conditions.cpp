#include <doctest.h>

#include <cmath>
#include <random>

#include "hausmeter/conditions.hpp"
#include "hausmeter/errors.hpp"
#include "hausmeter/words.hpp"

using namespace hausmeter;

TEST_CASE("c2 verdicts") {
  const ConditionReport geo = check_c2(FamilySpec::geometric(0.5), 1000);
  CHECK(geo.verdict == Verdict::holds);
  CHECK(geo.witness_value == doctest::Approx(1.0).epsilon(1e-12));

  const ConditionReport pw = check_c2(FamilySpec::power(1.0), 1000);
  CHECK(pw.verdict == Verdict::holds);
  CHECK(pw.witness_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pw.witness_index == 0);

  const ConditionReport tab = check_c2(FamilySpec::from_table({1.0, 0.5, 0.05}), 100);
  CHECK(tab.verdict == Verdict::inconclusive);
  CHECK(tab.witness_value == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("strong ratio condition verdicts") {
  const ConditionReport pw = check_c2_strong(FamilySpec::power(2.0), 1000);
  CHECK(pw.verdict == Verdict::holds);
  CHECK(std::fabs(pw.witness_value - 1.0) <= 2.5e-3); // ratio at k ~ 10^3

  const ConditionReport geo = check_c2_strong(FamilySpec::geometric(0.5), 1000);
  CHECK(geo.verdict == Verdict::fails);
  CHECK(geo.witness_value == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(check_c2_strong(FamilySpec::luroth(), 100).verdict == Verdict::holds);
}

TEST_CASE("distortion closed forms") {
  const auto lin = build_system(FamilySpec::geometric(0.5), 3);
  CHECK(distortion(lin, 2).mid() == 1.0);

  const auto g = build_system(FamilySpec::gauss(), 5);
  CHECK(distortion(g, 3).mid() == doctest::Approx(16.0 / 9.0).epsilon(1e-9));
  CHECK(distortion(g, 3, Enclosure(0.0, 0.1)).mid() ==
        doctest::Approx(std::pow(3.1 / 3.0, 2.0)).epsilon(1e-9));
  CHECK_THROWS_AS(distortion(g, 9), Error);
}

TEST_CASE("distortion matches ((k+1)/k)^2 along the gauss family") {
  const auto g = build_system(FamilySpec::gauss(), 100);
  for (int k = 1; k <= 100; ++k) {
    const double expect = std::pow((k + 1.0) / k, 2.0);
    CHECK(distortion(g, k).mid() == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("distortion bracketing bounds image lengths") {
  const auto g = build_system(FamilySpec::gauss(), 6);
  std::mt19937_64 rng(kDefaultConditionSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> letter(1, 6);
  for (int rep = 0; rep < 1000; ++rep) {
    const int k = letter(rng);
    double a = unit(rng), b = unit(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) continue;
    const double len = std::fabs(g.g(k, a) - g.g(k, b));
    const Enclosure r = g.derivative_range(k, Enclosure(0.0, 1.0));
    const double kappa = r.hi / r.lo;
    CHECK((1.0 / kappa) * r.hi * (b - a) <= len * (1 + 1e-9));
    CHECK(len <= kappa * r.lo * (b - a) * (1 + 1e-9));
  }
}

TEST_CASE("distortion is submultiplicative over words") {
  for (const auto& spec : {FamilySpec::gauss(), FamilySpec::gauss2()}) {
    const int n = spec.variant == FamilySpec::Variant::gauss ? 4 : 4;
    const auto sys = build_system(spec, n);
    std::mt19937_64 rng(kDefaultConditionSeed);
    std::uniform_int_distribution<int> letter(1, n);
    for (int rep = 0; rep < 200; ++rep) {
      Word w;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < len; ++i) w.letters.push_back(letter(rng));
      // sampled distortion of the composition
      double lo = 1e300, hi = 0.0;
      for (int s = 0; s <= 400; ++s) {
        const double x = s / 400.0;
        double d = 1.0, z = x;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
          d *= std::fabs(sys.dg(*it, z));
          z = sys.g(*it, z);
        }
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      double product = 1.0;
      for (auto k : w.letters) product *= distortion(sys, k).hi;
      CHECK(hi / lo <= product * (1 + 1e-9));
    }
  }
}

TEST_CASE("nonlinearity gates: gauss") {
  const auto reports = check_g4_g5_g6(FamilySpec::gauss(), 32);
  CHECK(reports[0].verdict == Verdict::holds);
  CHECK(reports[0].witness_value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(reports[1].verdict == Verdict::holds);
  CHECK(reports[2].verdict == Verdict::fails);
  CHECK(reports[2].witness_index == 1);
  CHECK(reports[2].witness_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("nonlinearity gates: gauss second iterate") {
  const auto reports = check_g4_g5_g6(FamilySpec::gauss2(), 64);
  CHECK(reports[0].verdict == Verdict::holds);
  CHECK(reports[2].verdict == Verdict::holds);
  CHECK(reports[2].witness_value <= 0.25 + 1e-12);
  // pair truncation keeps kappa away from 1 along the (j,1) column
  CHECK(reports[1].verdict == Verdict::fails);
}

TEST_CASE("nonlinearity gates reject linear families") {
  CHECK_THROWS_AS(check_g4_g5_g6(FamilySpec::geometric(0.5), 8), Error);
}

TEST_CASE("derivative growth bound: gauss second iterate") {
  const auto sys = build_system(FamilySpec::gauss2(), 16);
  const GrowthCheck gc = distortion_growth_check(sys, 2.0, 0.25, 4, 200);
  CHECK_FALSE(gc.inconclusive);
  CHECK(gc.passed);
  CHECK(gc.failures == 0);
  CHECK(gc.D >= 0.0);
}

TEST_CASE("derivative growth bound: trivial cases") {
  // equal points: ratio is exactly 1 <= 1
  const auto sys = build_system(FamilySpec::gauss2(), 9);
  const Word w{1, 2};
  double d = 1.0, z = 0.37;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    d *= std::fabs(sys.dg(*it, z));
    z = sys.g(*it, z);
  }
  CHECK(d / d <= 1.0);

  // linear systems have constant derivatives
  const auto lin = build_system(FamilySpec::geometric(0.5), 3);
  const GrowthCheck gc = distortion_growth_check(lin, 1.0, 0.5, 4, 100);
  CHECK(gc.passed);
  CHECK(gc.D == 0.0);

  // first-iterate gauss violates the derivative gate: inconclusive
  const auto g = build_system(FamilySpec::gauss(), 4);
  CHECK(distortion_growth_check(g, 2.0, 1.0, 4, 50).inconclusive);
}
