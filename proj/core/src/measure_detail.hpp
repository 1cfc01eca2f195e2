#ifndef HAUSMETER_MEASURE_DETAIL_HPP
#define HAUSMETER_MEASURE_DETAIL_HPP

#include <vector>

#include "hausmeter/measure.hpp"

namespace hausmeter::detail {

// Level-1 data shared by the measure operations: per-cylinder masses and
// their tail sums, plus the pullback scale factors.
struct MeasureContext {
  const TruncatedSystem* sys = nullptr;
  Enclosure h;
  std::vector<double> b;          // b_0..b_n
  std::vector<Enclosure> mu;      // mu[k] = m(C_k), 1-based
  std::vector<Enclosure> tail;    // tail[k] = sum_{j>k} mu_j, 0..n (tail[n]=0)
  std::vector<Enclosure> factor;  // pullback scale: |g_k'|-range^h over [0,1]

  MeasureContext(const TruncatedSystem& s, const Enclosure& hh);

  int n() const { return sys->n(); }
  // sum_{j=a}^{b} mu_j as an enclosure (empty when a > b)
  Enclosure block(int a, int bidx) const;
};

Enclosure interval_measure_rec(const MeasureContext& ctx, double s, double t,
                               const Enclosure& scale, double tol, int depth);

} // namespace hausmeter::detail

#endif
