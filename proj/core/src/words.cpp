#include "hausmeter/words.hpp"

#include "hausmeter/errors.hpp"

namespace hausmeter {

double apply_word(const TruncatedSystem& sys, const Word& w, double x) {
  if (!(x >= 0.0 && x <= 1.0)) raise(Errc::invalid_parameter, "x must lie in [0,1]");
  double y = x;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) y = sys.g(*it, y);
  return y;
}

Enclosure word_derivative_bounds(const TruncatedSystem& sys,
                                 std::span<const std::int32_t> letters) {
  if (sys.linear()) {
    double prod = 1.0;
    for (std::int32_t k : letters) prod *= sys.gap(k);
    return Enclosure(prod);
  }
  // Walk the composition from the innermost map outward, carrying the image
  // interval the next factor will be evaluated on.
  Enclosure img(0.0, 1.0);
  Enclosure bounds(1.0);
  for (std::size_t i = letters.size(); i-- > 0;) {
    const std::int32_t k = letters[i];
    bounds = mul(bounds, sys.derivative_range(k, img));
    img = sys.image(k, img);
  }
  return bounds;
}

Enclosure word_derivative_bounds(const TruncatedSystem& sys, const Word& w) {
  return word_derivative_bounds(sys, std::span<const std::int32_t>(w.letters));
}

} // namespace hausmeter
