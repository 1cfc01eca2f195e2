#ifndef HAUSMETER_GENERATION_HPP
#define HAUSMETER_GENERATION_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "hausmeter/words.hpp"

namespace hausmeter {

inline constexpr std::uint64_t kDefaultEnumBudget = 10'000'000;

// g_w([0,1]) together with derivative bounds for the composition. The stored
// interval is always (min, max); odd-length words of a chain system reverse
// orientation.
struct Cylinder {
  Word word;
  double left = 0.0;
  double right = 0.0;
  Enclosure deriv;

  double length() const { return right - left; }
};

// n^l with saturation, for budget checks.
std::uint64_t generation_size(const TruncatedSystem& sys, int l);

// Visits the l-th generation in lexicographic word order. The Cylinder passed
// to the callback is reused between calls; copy it if you keep it.
void for_each_cylinder(const TruncatedSystem& sys, int l,
                       const std::function<void(const Cylinder&)>& fn,
                       std::uint64_t budget = kDefaultEnumBudget);

std::vector<Cylinder> enumerate_generation(const TruncatedSystem& sys, int l,
                                           std::uint64_t budget = kDefaultEnumBudget);

} // namespace hausmeter

#endif
