#ifndef HAUSMETER_WORDS_HPP
#define HAUSMETER_WORDS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "hausmeter/enclosure.hpp"
#include "hausmeter/system.hpp"

namespace hausmeter {

// A finite composition index: g_w = g_{w1} o g_{w2} o ... o g_{wl}.
// The empty word is the identity.
struct Word {
  std::vector<std::int32_t> letters;

  Word() = default;
  Word(std::initializer_list<std::int32_t> ls) : letters(ls) {}
  explicit Word(std::vector<std::int32_t> ls) : letters(std::move(ls)) {}

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
};

double apply_word(const TruncatedSystem& sys, const Word& w, double x);

// Enclosure of {|g_w'(x)| : x in [0,1]}, built by the chain rule with each
// per-map derivative bounded over the image interval of the remaining suffix
// rather than over all of [0,1]. Linear systems collapse to the exact
// product of the gaps.
Enclosure word_derivative_bounds(const TruncatedSystem& sys, const Word& w);

// Same chain walked over an explicit span (used by the hot enumeration paths).
Enclosure word_derivative_bounds(const TruncatedSystem& sys,
                                 std::span<const std::int32_t> letters);

} // namespace hausmeter

#endif
