#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hausmeter/errors.hpp"
#include "hausmeter/families.hpp"
#include "hausmeter/generation.hpp"
#include "hausmeter/words.hpp"
#include "oracles.hpp"

using namespace hausmeter;

namespace {
TruncatedSystem geo(double q, int n) { return build_system(FamilySpec::geometric(q), n); }
TruncatedSystem luroth(int n) { return build_system(FamilySpec::luroth(), n); }
TruncatedSystem gauss(int n) { return build_system(FamilySpec::gauss(), n); }
} // namespace

TEST_CASE("first generation equals the defining intervals") {
  const auto cyls = enumerate_generation(geo(0.5, 2), 1);
  REQUIRE(cyls.size() == 2);
  // lexicographic word order: letter 1 first (the rightmost interval)
  CHECK(cyls[0].left == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cyls[0].right == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cyls[1].left == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cyls[1].right == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cyls[0].length() == doctest::Approx(0.5));
  CHECK(cyls[1].length() == doctest::Approx(0.25));
}

TEST_CASE("generation lengths are the gap products") {
  const auto sys = geo(0.5, 2);
  const auto cyls = enumerate_generation(sys, 3);
  REQUIRE(cyls.size() == 8);
  // direct product enumeration oracle
  std::vector<double> expected;
  for (int i1 = 1; i1 <= 2; ++i1)
    for (int i2 = 1; i2 <= 2; ++i2)
      for (int i3 = 1; i3 <= 2; ++i3)
        expected.push_back(sys.gap(i1) * sys.gap(i2) * sys.gap(i3));
  std::vector<double> got;
  for (const auto& c : cyls) got.push_back(c.length());
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("generation preconditions") {
  CHECK_THROWS_WITH_AS(enumerate_generation(geo(0.5, 2), 0), doctest::Contains("depth"),
                       Error);
  try {
    enumerate_generation(geo(0.5, 4), 20, 1000);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
  }
}

TEST_CASE("generation cylinders are disjoint and nested") {
  const auto sys = luroth(3);
  for (int l = 1; l <= 3; ++l) {
    auto cyls = enumerate_generation(sys, l);
    std::sort(cyls.begin(), cyls.end(),
              [](const Cylinder& a, const Cylinder& b) { return a.left < b.left; });
    for (std::size_t i = 0; i + 1 < cyls.size(); ++i)
      CHECK(cyls[i].right <= cyls[i + 1].left + 1e-14);
    // refinement: each deeper cylinder sits in exactly one parent
    if (l < 3) {
      const auto children = enumerate_generation(sys, l + 1);
      for (const auto& ch : children) {
        int parents = 0;
        for (const auto& p : cyls)
          if (p.left - 1e-14 <= ch.left && ch.right <= p.right + 1e-14) ++parents;
        CHECK(parents == 1);
      }
    }
  }
}

TEST_CASE("apply_word composes left to right") {
  CHECK(apply_word(gauss(3), Word{1}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(apply_word(geo(0.5, 2), Word{2, 1}, 1.0) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(apply_word(geo(0.5, 2), Word{}, 0.3) == 0.3);
  CHECK_THROWS_AS(apply_word(geo(0.5, 2), Word{3}, 0.0), Error);
}

TEST_CASE("orientation alternates with word length") {
  const auto sys = luroth(3);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> letter(1, 3);
  for (int len = 1; len <= 5; ++len) {
    for (int rep = 0; rep < 20; ++rep) {
      Word w;
      for (int i = 0; i < len; ++i) w.letters.push_back(letter(rng));
      const double at0 = apply_word(sys, w, 0.0);
      const double at1 = apply_word(sys, w, 1.0);
      if (len % 2 == 1) CHECK(at0 > at1);
      else CHECK(at0 < at1);
    }
  }
}

TEST_CASE("linear cylinder length equals the gap product") {
  // The derivative slot carries the product exactly; the endpoint difference
  // matches it to 1e-12 relative or to endpoint granularity (a length below
  // ~1e-4 cannot be encoded to 1e-12 relative by two doubles near 1).
  for (int n : {3, 8}) {
    const auto sys = geo(0.45, n);
    for (int depth = 1; depth <= 6; ++depth) {
      std::size_t bad = 0;
      for_each_cylinder(sys, depth, [&](const Cylinder& c) {
        double prod = 1.0;
        for (auto k : c.word.letters) prod *= sys.gap(k);
        if (std::fabs(c.length() - prod) > 1e-12 * prod + 1e-15) ++bad;
        if (c.deriv.lo != c.deriv.hi || std::fabs(c.deriv.lo - prod) > 1e-14 * prod) ++bad;
      });
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("endpoint ratio decays geometrically with the generation") {
  struct Case {
    FamilySpec spec;
    double c2sup;
  };
  for (const auto& [spec, c2sup] :
       {Case{FamilySpec::geometric(0.5), 1.0}, Case{FamilySpec::luroth(), 1.0}}) {
    const auto sys = build_system(spec, 3);
    double alpha = 0.0;
    for (int k = 1; k <= 3; ++k) alpha = std::max(alpha, sys.gap(k));
    for (int l = 1; l <= 8; ++l) {
      const double bound = 1.0 + c2sup * std::pow(alpha, l - 1);
      for_each_cylinder(sys, l, [&](const Cylinder& c) {
        CHECK(c.right / c.left <= bound * (1.0 + 1e-12));
      });
    }
  }
}

TEST_CASE("word derivative bounds: linear products") {
  const auto sys = geo(0.5, 2);
  const Enclosure e = word_derivative_bounds(sys, Word{1, 2});
  CHECK(e.lo == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(e.hi == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("word derivative bounds: gauss closed forms") {
  const auto sys = gauss(2);
  const Enclosure e1 = word_derivative_bounds(sys, Word{1});
  CHECK(e1.lo <= 0.25);
  CHECK(e1.hi >= 1.0);
  CHECK(e1.lo == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e1.hi == doctest::Approx(1.0).epsilon(1e-12));
  // |(g_1 o g_1)'| = 1/(2+x)^2: range [1/9, 1/4]
  const Enclosure e11 = word_derivative_bounds(sys, Word{1, 1});
  CHECK(e11.lo <= 1.0 / 9.0);
  CHECK(e11.hi >= 0.25);
}

TEST_CASE("word derivative bounds contain dense sampling") {
  const auto sys = gauss(3);
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_int_distribution<int> letter(1, 3);
  for (int len = 1; len <= 4; ++len) {
    for (int rep = 0; rep < 10; ++rep) {
      Word w;
      for (int i = 0; i < len; ++i) w.letters.push_back(letter(rng));
      const Enclosure e = word_derivative_bounds(sys, w);
      for (int s = 0; s <= 1000; ++s) {
        const double x = s / 1000.0;
        double d = 1.0, z = x;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
          d *= std::fabs(sys.dg(*it, z));
          z = sys.g(*it, z);
        }
        CHECK(e.lo <= d * (1 + 1e-12));
        CHECK(d <= e.hi * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("words reject letters beyond n") {
  CHECK_THROWS_AS(word_derivative_bounds(geo(0.5, 2), Word{1, 5}), Error);
}

TEST_CASE("sequence tables validate") {
  CHECK_THROWS_AS(SequenceB::from_table({1.0, 0.4, 0.7}), Error);
  CHECK_THROWS_AS(SequenceB::from_table({0.9, 0.5}), Error);
  const SequenceB s = SequenceB::from_table({1.0, 0.5, 0.25});
  CHECK(s(0) == 1.0);
  CHECK(s.max_index() == 2);
  CHECK_THROWS_AS(s(3), Error);
}
