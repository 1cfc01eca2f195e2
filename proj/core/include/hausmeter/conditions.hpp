#ifndef HAUSMETER_CONDITIONS_HPP
#define HAUSMETER_CONDITIONS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "hausmeter/enclosure.hpp"
#include "hausmeter/families.hpp"
#include "hausmeter/system.hpp"

namespace hausmeter {

inline constexpr std::uint64_t kDefaultConditionSeed = 0xC0FFEE;

enum class Verdict { holds, fails, inconclusive };

const char* verdict_name(Verdict v);

// A finite scan can refute a condition or make it plausible; "holds" is only
// reported when a closed form covers the tail.
struct ConditionReport {
  std::string id;
  Verdict verdict = Verdict::inconclusive;
  double witness_value = 0.0;
  std::int64_t witness_index = -1;
  std::int64_t scan_range = 0;
  std::string detail;
};

// sup_k (b_k - b_{k+1})/b_{k+1} < infinity, scanned over 0 <= k < K and
// closed analytically where analytic_c2 applies.
ConditionReport check_c2(const FamilySpec& spec, std::int64_t K);

// b_k / b_{k+1} -> 1 (the strengthened ratio condition).
ConditionReport check_c2_strong(const FamilySpec& spec, std::int64_t K);

// kappa(g_k) restricted to sub (default [0,1]): sup|g'| / inf|g'|.
Enclosure distortion(const TruncatedSystem& sys, int k,
                     std::optional<Enclosure> sub = std::nullopt);

// The three nonlinearity gates: bounded g''/g', distortions tending to 1,
// and a uniform derivative bound below 1. Reports are ordered {G4, G5, G6}.
std::array<ConditionReport, 3> check_g4_g5_g6(const FamilySpec& spec, int K, int grid = 128);

struct GrowthCheck {
  bool passed = false;
  int cases = 0;
  int failures = 0;
  double c = 0.0;
  double alpha = 0.0;
  double D = 0.0;           // calibrated quadratic coefficient
  double worst_margin = 0.0;
  bool inconclusive = false; // preconditions (G4/G6) not met
};

// Verifies |g_w'(x)/g_w'(y)| <= 1 + c/(1-alpha)|x-y| + D|x-y|^2 with D fitted
// on a calibration half and tested out-of-sample on the rest.
GrowthCheck distortion_growth_check(const TruncatedSystem& sys, double c, double alpha,
                                    int max_word_len = 6, int cases = 200,
                                    std::uint64_t seed = kDefaultConditionSeed);

} // namespace hausmeter

#endif
