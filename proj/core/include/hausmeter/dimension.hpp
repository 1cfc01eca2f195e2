#ifndef HAUSMETER_DIMENSION_HPP
#define HAUSMETER_DIMENSION_HPP

#include <cstdint>
#include <vector>

#include "hausmeter/enclosure.hpp"
#include "hausmeter/families.hpp"
#include "hausmeter/generation.hpp"
#include "hausmeter/system.hpp"

namespace hausmeter {

inline constexpr double kRootWidth = 1e-12;

enum class DimensionMethod { moran, pressure };

struct DimensionResult {
  Enclosure h;
  DimensionMethod method = DimensionMethod::moran;
  int pressure_depth = 0;
  double residual = 0.0;   // solved equation evaluated at the midpoint root
  int iterations = 0;
};

// Root of sum_k a_k^h = 1, bisected to width kRootWidth. Linear systems only;
// n = 1 returns h = 0 exactly.
DimensionResult solve_moran(const TruncatedSystem& sys);

struct PressureOptions {
  std::uint64_t budget = kDefaultEnumBudget;
  int threads = 1;
};

// Sandwich of the dimension between the roots of the depth-L cylinder sums
// sum_{|w|=L} (inf|g_w'|)^t = 1 and sum (sup|g_w'|)^t = 1. The per-word
// bounds come from word_derivative_bounds. n = 1 returns h = 0.
DimensionResult solve_pressure(const TruncatedSystem& sys, int depth,
                               const PressureOptions& opts = {});

struct GapBound {
  int n = 0;
  double t = 0.0;
  double bound = 0.0;
  std::int64_t tail_terms = 0;          // explicitly summed numerator terms
  double tail_remainder_bound = 0.0;    // integral-test remainder added on top
};

// Upper bound for 1 - h_n: (sum_{k>n} a_k^t) / (sum_k ln(1/a_k) a_k),
// valid whenever t <= h_n. Closed forms for geometric; partial sums with an
// integral-test numerator remainder for power/luroth.
GapBound dim_gap_bound(const FamilySpec& spec, int n, double t,
                       std::int64_t series_terms = 100000);

// Default exponent for dim_gap_bound: max(t_min + 0.01, 0.9) where t_min is
// the family's convergence threshold.
double default_gap_t(const FamilySpec& spec);

struct C1Row {
  int n = 0;
  Enclosure h;
  Enclosure product;   // (1 - h_n) * ln n
  bool degenerate = false;
};

struct C1Diagnostic {
  std::vector<C1Row> rows;
  bool monotone_decreasing_trend = false;
};

C1Diagnostic c1_diagnostic(const FamilySpec& spec, const std::vector<int>& n_list,
                           DimensionMethod method, int depth = 6,
                           const PressureOptions& opts = {});

} // namespace hausmeter

#endif
