#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

#include "hausmeter/dimension.hpp"
#include "hausmeter/errors.hpp"

namespace hausmeter {

namespace {

// Below this leaf count the per-word bounds are kept verbatim and the root
// equations are evaluated on them directly. Above it, log-values are binned
// into a fixed grid; lo values round to the lower bucket edge and hi values
// to the upper edge, so the resulting roots can only widen the sandwich.
constexpr std::uint64_t kExactCap = 1u << 20;
constexpr double kBucketWidth = 1e-5;
constexpr std::size_t kMaxBuckets = 1u << 26;

struct ExactSink {
  std::vector<double> log_lo, log_hi;
  void emit(const Enclosure& d) {
    log_lo.push_back(std::log(d.lo));
    log_hi.push_back(std::log(d.hi));
  }
};

// Table-driven bracket of the natural log: exponent bits plus a 256-entry
// mantissa table give log(v) within one table step in either direction, an
// order of magnitude cheaper than libm at the leaf rate of the suffix walk.
struct FastLog {
  double lo_tab[257];

  FastLog() {
    for (int i = 0; i <= 256; ++i) lo_tab[i] = std::log2(1.0 + i / 256.0);
  }

  // returns l with l <= log(v); pass upper=true for l >= log(v)
  double bound(double v, bool upper) const {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    const int e = static_cast<int>((bits >> 52) & 0x7ff) - 1023;
    const int m = static_cast<int>((bits >> 44) & 0xff);
    const double l2 = e + lo_tab[upper ? m + 1 : m];
    constexpr double ln2_lo = 0.6931471805599452;
    constexpr double ln2_hi = 0.6931471805599454;
    return l2 * (l2 >= 0.0 ? (upper ? ln2_hi : ln2_lo) : (upper ? ln2_lo : ln2_hi));
  }
};

struct HistogramSink {
  double l_min = 0.0;
  double width = kBucketWidth;
  std::vector<std::uint64_t> counts_lo, counts_hi;
  const FastLog* flog = nullptr;

  HistogramSink(double lmin, double lmax, const FastLog* fl) : flog(fl) {
    l_min = lmin;
    std::size_t nb = static_cast<std::size_t>((lmax - lmin) / width) + 2;
    if (nb > kMaxBuckets) {
      width = (lmax - lmin) / static_cast<double>(kMaxBuckets - 2);
      nb = kMaxBuckets;
    }
    counts_lo.assign(nb, 0);
    counts_hi.assign(nb, 0);
  }

  void emit(const Enclosure& d) {
    // lo values bucket by a lower bound of their log (the bucket's lower
    // edge stays below the true value); hi values by an upper bound
    const double llo = flog->bound(d.lo, false);
    const double lhi = flog->bound(d.hi, true);
    auto idx = [&](double l) {
      double f = (l - l_min) / width;
      if (f < 0.0) f = 0.0;
      std::size_t i = static_cast<std::size_t>(f);
      if (i >= counts_lo.size()) i = counts_lo.size() - 1;
      return i;
    };
    ++counts_lo[idx(llo)];
    ++counts_hi[idx(lhi)];
  }

  void merge(const HistogramSink& other) {
    for (std::size_t i = 0; i < counts_lo.size(); ++i) {
      counts_lo[i] += other.counts_lo[i];
      counts_hi[i] += other.counts_hi[i];
    }
  }
};

template <class Sink>
void suffix_dfs(const TruncatedSystem& sys, const Enclosure& img, const Enclosure& d,
                int remaining, Sink& sink) {
  const int n = sys.n();
  if (remaining == 1) {
    for (int k = 1; k <= n; ++k) sink.emit(mul(d, sys.derivative_range(k, img)));
    return;
  }
  for (int k = 1; k <= n; ++k) {
    const Enclosure d2 = mul(d, sys.derivative_range(k, img));
    suffix_dfs(sys, sys.image(k, img), d2, remaining - 1, sink);
  }
}

// Strictly decreasing in t for summands < 1; bisect the root of S(t) = 1.
template <class SumFn>
Enclosure bisect_sum_root(SumFn&& sum, int& iterations) {
  if (sum(1.0) >= 1.0) return Enclosure(1.0); // dimension is capped at 1
  double lo = 0.0, hi = 1.0;
  iterations = 0;
  while (hi - lo > kRootWidth && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    if (sum(mid) >= 1.0) lo = mid;
    else hi = mid;
    ++iterations;
  }
  return Enclosure(lo, hi);
}

struct CompressedHistogram {
  std::vector<double> log_value;
  std::vector<double> count;

  static CompressedHistogram from(const std::vector<std::uint64_t>& counts, double l_min,
                                  double width, bool upper_edge) {
    CompressedHistogram ch;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0) continue;
      const double edge = l_min + width * static_cast<double>(i + (upper_edge ? 1 : 0));
      ch.log_value.push_back(edge);
      ch.count.push_back(static_cast<double>(counts[i]));
    }
    return ch;
  }

  double sum_pow(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < log_value.size(); ++i)
      s += count[i] * std::exp(t * log_value[i]);
    return s;
  }
};

double sum_pow(const std::vector<double>& logs, double t) {
  double s = 0.0;
  for (double l : logs) s += std::exp(t * l);
  return s;
}

} // namespace

DimensionResult solve_pressure(const TruncatedSystem& sys, int depth,
                               const PressureOptions& opts) {
  DimensionResult res;
  res.method = DimensionMethod::pressure;
  res.pressure_depth = depth;
  if (sys.n() == 1) {
    // single-map limit set is one point
    res.h = Enclosure(0.0);
    return res;
  }
  if (depth < 1) raise(Errc::invalid_depth, "pressure depth must be >= 1");
  const std::uint64_t count = generation_size(sys, depth);
  if (count > opts.budget)
    raise(Errc::budget_exceeded, "n^depth exceeds the enumeration budget");

  const Enclosure unit(0.0, 1.0);

  if (count <= kExactCap) {
    ExactSink sink;
    sink.log_lo.reserve(count);
    sink.log_hi.reserve(count);
    suffix_dfs(sys, unit, Enclosure(1.0), depth, sink);
    int it_lo = 0, it_hi = 0;
    const Enclosure root_lo =
        bisect_sum_root([&](double t) { return sum_pow(sink.log_lo, t); }, it_lo);
    const Enclosure root_hi =
        bisect_sum_root([&](double t) { return sum_pow(sink.log_hi, t); }, it_hi);
    res.h = Enclosure(std::min(root_lo.lo, root_hi.lo), std::max(root_lo.hi, root_hi.hi));
    res.iterations = it_lo + it_hi;
    res.residual = sum_pow(sink.log_hi, root_hi.mid()) - 1.0;
    return res;
  }

  // Histogram route. Log range: depth * [min_k log inf, max_k log sup].
  double per_lo = std::numeric_limits<double>::infinity();
  double per_hi = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= sys.n(); ++k) {
    const Enclosure r = sys.derivative_range(k, unit);
    per_lo = std::min(per_lo, std::log(r.lo));
    per_hi = std::max(per_hi, std::log(r.hi));
  }
  const double l_min = depth * per_lo - 1.0;
  const double l_max = depth * std::max(per_hi, 0.0) + 1.0;

  const FastLog flog;
  const int threads = std::max(1, std::min(opts.threads, sys.n()));
  std::vector<HistogramSink> sinks;
  sinks.reserve(threads);
  for (int t = 0; t < threads; ++t) sinks.emplace_back(l_min, l_max, &flog);

  {
    std::atomic<int> next_letter{1};
    auto work = [&](int tid) {
      for (;;) {
        const int k = next_letter.fetch_add(1);
        if (k > sys.n()) break;
        const Enclosure d1 = sys.derivative_range(k, unit);
        if (depth == 1) sinks[tid].emit(d1);
        else suffix_dfs(sys, sys.image(k, unit), d1, depth - 1, sinks[tid]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
  }
  for (int t = 1; t < threads; ++t) sinks[0].merge(sinks[t]);

  const auto lo_h = CompressedHistogram::from(sinks[0].counts_lo, sinks[0].l_min,
                                              sinks[0].width, /*upper_edge=*/false);
  const auto hi_h = CompressedHistogram::from(sinks[0].counts_hi, sinks[0].l_min,
                                              sinks[0].width, /*upper_edge=*/true);
  int it_lo = 0, it_hi = 0;
  const Enclosure root_lo = bisect_sum_root([&](double t) { return lo_h.sum_pow(t); }, it_lo);
  const Enclosure root_hi = bisect_sum_root([&](double t) { return hi_h.sum_pow(t); }, it_hi);
  res.h = Enclosure(std::min(root_lo.lo, root_hi.lo), std::max(root_lo.hi, root_hi.hi));
  res.iterations = it_lo + it_hi;
  res.residual = hi_h.sum_pow(root_hi.mid()) - 1.0;
  return res;
}

} // namespace hausmeter
