#include "hausmeter/dimension.hpp"

#include <cmath>

#include "hausmeter/errors.hpp"

namespace hausmeter {

namespace {

// Bisection for a strictly decreasing f with f(lo) >= 0 >= f(hi).
template <class F>
Enclosure bisect_decreasing(F&& f, double lo, double hi, int& iterations) {
  iterations = 0;
  while (hi - lo > kRootWidth) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) lo = mid;
    else hi = mid;
    ++iterations;
    if (iterations > 200) break;
  }
  return Enclosure(lo, hi);
}

} // namespace

DimensionResult solve_moran(const TruncatedSystem& sys) {
  if (!sys.linear()) raise(Errc::not_linear, "the Moran equation applies to linear systems");
  DimensionResult res;
  res.method = DimensionMethod::moran;
  if (sys.n() == 1) {
    res.h = Enclosure(0.0);
    res.residual = 0.0;
    return res;
  }
  const int n = sys.n();
  auto moran = [&](double h) {
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += std::pow(sys.gap(k), h);
    return sum - 1.0;
  };
  res.h = bisect_decreasing(moran, 0.0, 1.0, res.iterations);
  res.residual = moran(res.h.mid());
  return res;
}

double default_gap_t(const FamilySpec& spec) {
  double t_min = 0.0;
  switch (spec.variant) {
    case FamilySpec::Variant::geometric:
      t_min = 0.0; // geometric tails converge for every t > 0
      break;
    case FamilySpec::Variant::power:
      t_min = 1.0 / (spec.alpha + 1.0);
      break;
    case FamilySpec::Variant::luroth:
      t_min = 0.5;
      break;
    default:
      raise(Errc::unavailable, "gap bound exponent defined for linear closed-form families");
  }
  return std::max(t_min + 0.01, 0.9);
}

GapBound dim_gap_bound(const FamilySpec& spec, int n, double t, std::int64_t series_terms) {
  if (!(t > 0.0 && t <= 1.0)) raise(Errc::invalid_t, "t must lie in (0, 1]");
  if (n < 1) raise(Errc::invalid_parameter, "n must be >= 1");
  GapBound gb;
  gb.n = n;
  gb.t = t;

  switch (spec.variant) {
    case FamilySpec::Variant::geometric: {
      const double q = spec.q;
      // numerator: sum_{k>n} (q^{k-1}(1-q))^t = (1-q)^t q^{tn} / (1 - q^t)
      const double numerator =
          std::pow(1.0 - q, t) * std::pow(q, t * n) / (1.0 - std::pow(q, t));
      // denominator: sum_k a_k ln(1/a_k) = -q ln q/(1-q) - ln(1-q)
      const double denominator = -q * std::log(q) / (1.0 - q) - std::log(1.0 - q);
      gb.bound = numerator / denominator;
      gb.tail_terms = 0;
      gb.tail_remainder_bound = 0.0;
      return gb;
    }
    case FamilySpec::Variant::power:
    case FamilySpec::Variant::luroth: {
      const double alpha = spec.variant == FamilySpec::Variant::luroth ? 1.0 : spec.alpha;
      const double s = t * (alpha + 1.0);
      if (s <= 1.0)
        raise(Errc::series_divergence, "power family needs t(alpha+1) > 1");
      auto a_of = [&](std::int64_t k) {
        return std::pow(static_cast<double>(k), -alpha) -
               std::pow(static_cast<double>(k + 1), -alpha);
      };
      // numerator: explicit terms k = n+1 .. n+K, then the integral-test
      // remainder through a_k <= alpha / k^{alpha+1} (mean value theorem).
      double numerator = 0.0;
      const std::int64_t K = series_terms;
      for (std::int64_t k = n + 1; k <= n + K; ++k) numerator += std::pow(a_of(k), t);
      const double cutoff = static_cast<double>(n + K);
      const double remainder = std::pow(alpha, t) * std::pow(cutoff, 1.0 - s) / (s - 1.0);
      numerator += remainder;
      // denominator: truncated sum of positive terms -> valid lower bound.
      double denominator = 0.0;
      for (std::int64_t k = 1; k <= K; ++k) {
        const double a = a_of(k);
        denominator += a * std::log(1.0 / a);
      }
      gb.bound = numerator / denominator;
      gb.tail_terms = K;
      gb.tail_remainder_bound = remainder;
      return gb;
    }
    default:
      raise(Errc::unavailable, "gap bound available for geometric/power/luroth families");
  }
}

C1Diagnostic c1_diagnostic(const FamilySpec& spec, const std::vector<int>& n_list,
                           DimensionMethod method, int depth, const PressureOptions& opts) {
  if (n_list.empty()) raise(Errc::invalid_parameter, "n_list must be nonempty");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i) {
    if (!(n_list[i] < n_list[i + 1]))
      raise(Errc::invalid_parameter, "n_list must be strictly ascending");
  }
  C1Diagnostic out;
  out.rows.reserve(n_list.size());
  for (int n : n_list) {
    C1Row row;
    row.n = n;
    if (n == 1) {
      row.h = Enclosure(0.0);
      row.product = Enclosure(0.0);
      row.degenerate = true;
      out.rows.push_back(row);
      continue;
    }
    const TruncatedSystem sys = build_system(spec, n);
    const DimensionResult dim = method == DimensionMethod::moran
                                    ? solve_moran(sys)
                                    : solve_pressure(sys, depth, opts);
    row.h = dim.h;
    const Enclosure one_minus_h = clamp(sub(Enclosure(1.0), dim.h), 0.0, 1.0);
    const Enclosure log_n = pad(Enclosure(std::log(static_cast<double>(n))));
    row.product = mul(one_minus_h, log_n);
    out.rows.push_back(row);
  }
  // Trend over the tail half: upper endpoints strictly decreasing.
  const std::size_t half = out.rows.size() / 2;
  bool trend = out.rows.size() >= 2;
  for (std::size_t i = std::max<std::size_t>(half, 1); i < out.rows.size(); ++i) {
    if (!(out.rows[i].product.hi < out.rows[i - 1].product.hi)) trend = false;
  }
  out.monotone_decreasing_trend = trend;
  return out;
}

} // namespace hausmeter
