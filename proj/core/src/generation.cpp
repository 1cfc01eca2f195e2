#include "hausmeter/generation.hpp"

#include <algorithm>
#include <cmath>

#include "hausmeter/errors.hpp"

namespace hausmeter {

std::uint64_t generation_size(const TruncatedSystem& sys, int l) {
  std::uint64_t total = 1;
  const auto n = static_cast<std::uint64_t>(sys.n());
  for (int i = 0; i < l; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / n)
      return std::numeric_limits<std::uint64_t>::max();
    total *= n;
  }
  return total;
}

namespace {

struct Enumerator {
  const TruncatedSystem& sys;
  int depth;
  const std::function<void(const Cylinder&)>& fn;
  Cylinder cyl;
  // Affine composition state for linear systems: g_w(x) = off + slope * x.
  std::vector<double> off, slope;

  void descend(int level) {
    if (level == depth) {
      emit();
      return;
    }
    for (int k = 1; k <= sys.n(); ++k) {
      cyl.word.letters[level] = k;
      if (sys.linear()) {
        // Appending k: g_{w.k}(x) = g_w(g_k(x)) with g_k affine.
        off[level + 1] = off[level] + slope[level] * sys.map_right(k);
        slope[level + 1] = -slope[level] * sys.gap(k);
      }
      descend(level + 1);
    }
  }

  void emit() {
    if (sys.linear()) {
      const double e0 = off[depth];
      const double e1 = off[depth] + slope[depth];
      cyl.left = std::min(e0, e1);
      cyl.right = std::max(e0, e1);
      cyl.deriv = Enclosure(std::fabs(slope[depth]));
    } else {
      const double e0 = apply_word(sys, cyl.word, 0.0);
      const double e1 = apply_word(sys, cyl.word, 1.0);
      cyl.left = std::min(e0, e1);
      cyl.right = std::max(e0, e1);
      cyl.deriv = word_derivative_bounds(sys, cyl.word);
    }
    fn(cyl);
  }
};

} // namespace

void for_each_cylinder(const TruncatedSystem& sys, int l,
                       const std::function<void(const Cylinder&)>& fn,
                       std::uint64_t budget) {
  if (l < 1) raise(Errc::invalid_depth, "generation depth must be >= 1");
  if (generation_size(sys, l) > budget)
    raise(Errc::budget_exceeded, "n^l exceeds the enumeration budget");
  Enumerator e{sys, l, fn, {}, {}, {}};
  e.cyl.word.letters.assign(l, 1);
  e.off.assign(l + 1, 0.0);
  e.slope.assign(l + 1, 1.0);
  e.descend(0);
}

std::vector<Cylinder> enumerate_generation(const TruncatedSystem& sys, int l,
                                           std::uint64_t budget) {
  std::vector<Cylinder> out;
  const std::uint64_t count = generation_size(sys, l);
  if (l >= 1 && count <= budget) out.reserve(count);
  for_each_cylinder(sys, l, [&](const Cylinder& c) { out.push_back(c); }, budget);
  return out;
}

} // namespace hausmeter
