#ifndef HAUSMETER_TEST_ORACLES_HPP
#define HAUSMETER_TEST_ORACLES_HPP

// Test-only reference computations, kept independent of the library's
// implementation paths: plain-double recursions over the raw gap data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

// Root of a strictly decreasing function on [0,1].
inline double bisect_root(const std::function<double(double)>& f, double width = 1e-14) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double moran_root(const std::vector<double>& gaps) {
  return bisect_root([&](double h) {
    double s = 0.0;
    for (double a : gaps) s += std::pow(a, h);
    return s - 1.0;
  });
}

// Linear descending-chain family data: b_0..b_n and the gaps.
struct LinearChain {
  std::vector<double> b;    // b[0..n]
  std::vector<double> gaps; // gaps[1..n]
  double h = 0.0;
  std::vector<double> mu;   // mu[1..n] = a^h
  std::vector<double> tail; // tail[k] = sum_{j>k} mu_j

  static LinearChain geometric(double q, int n) {
    LinearChain c;
    c.b.resize(n + 1);
    for (int k = 0; k <= n; ++k) c.b[k] = std::pow(q, k);
    c.finish();
    return c;
  }
  static LinearChain power(double alpha, int n) {
    LinearChain c;
    c.b.resize(n + 1);
    for (int k = 0; k <= n; ++k) c.b[k] = std::pow(k + 1.0, -alpha);
    c.finish();
    return c;
  }
  static LinearChain luroth(int n) { return power(1.0, n); }

  void finish() {
    const int n = static_cast<int>(b.size()) - 1;
    gaps.assign(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) gaps[k] = b[k - 1] - b[k];
    h = moran_root(std::vector<double>(gaps.begin() + 1, gaps.end()));
    mu.assign(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) mu[k] = std::pow(gaps[k], h);
    tail.assign(n + 1, 0.0);
    for (int k = n - 1; k >= 0; --k) tail[k] = tail[k + 1] + mu[k + 1];
  }

  int n() const { return static_cast<int>(b.size()) - 1; }

  // m([0, r]) by the exact self-similar recursion.
  double mass_left(double r, int depth = 0) const {
    const int nn = n();
    if (r <= b[nn] || depth > 200) return 0.0;
    if (r >= 1.0) return 1.0;
    int q = 1;
    while (b[q] >= r) ++q;
    const double x = (b[q - 1] - r) / gaps[q];
    return tail[q] + mu[q] * (1.0 - mass_left(x, depth + 1));
  }

  double measure(double s, double t) const { return mass_left(t) - mass_left(s); }
  double density(double s, double t) const {
    return measure(s, t) / std::pow(t - s, h);
  }
};

// Bracket [inside, inside + slack] of m([s,t]) by accumulating generation-L
// cylinder masses, cut cylinders contributing to the slack.
struct MeasureBracket {
  double inside = 0.0;
  double slack = 0.0;
};

inline void bracket_rec(const LinearChain& c, double s, double t, double off, double slope,
                        double mass, int depth, int max_depth, MeasureBracket& out) {
  const double e0 = off;
  const double e1 = off + slope;
  const double lo = std::min(e0, e1);
  const double hi = std::max(e0, e1);
  if (hi <= s || lo >= t) return;
  if (s <= lo && hi <= t) {
    out.inside += mass;
    return;
  }
  if (depth == max_depth) {
    out.slack += mass;
    return;
  }
  for (int k = 1; k <= c.n(); ++k) {
    bracket_rec(c, s, t, off + slope * c.b[k - 1], -slope * c.gaps[k], mass * c.mu[k],
                depth + 1, max_depth, out);
  }
}

inline MeasureBracket brute_measure(const LinearChain& c, double s, double t,
                                    int max_depth) {
  MeasureBracket out;
  bracket_rec(c, s, t, 0.0, 1.0, 1.0, 0, max_depth, out);
  return out;
}

// All cylinder endpoints of generations 1..L (own affine enumeration).
inline std::vector<double> chain_endpoints(const LinearChain& c, int L) {
  std::set<double> pts;
  struct Node {
    double off, slope;
    int depth;
  };
  std::vector<Node> stack{{0.0, 1.0, 0}};
  while (!stack.empty()) {
    const Node nd = stack.back();
    stack.pop_back();
    if (nd.depth > 0) {
      pts.insert(nd.off);
      pts.insert(nd.off + nd.slope);
    }
    if (nd.depth == L) continue;
    for (int k = 1; k <= c.n(); ++k)
      stack.push_back({nd.off + nd.slope * c.b[k - 1], -nd.slope * c.gaps[k], nd.depth + 1});
  }
  return {pts.begin(), pts.end()};
}

// Exhaustive endpoint-pair density maximum at generation depth L.
struct PairMax {
  double density = 0.0;
  double s = 0.0, t = 1.0;
};

inline PairMax exhaustive_pair_max(const LinearChain& c, int L) {
  const auto pts = chain_endpoints(c, L);
  PairMax best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double mi = c.mass_left(pts[i]);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double m = c.mass_left(pts[j]) - mi;
      if (m <= 0.0) continue;
      const double d = m / std::pow(pts[j] - pts[i], c.h);
      if (d > best.density) best = {d, pts[i], pts[j]};
    }
  }
  return best;
}

} // namespace oracle

#endif
