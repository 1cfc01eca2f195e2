#include "hausmeter/measure.hpp"

#include <cmath>

#include "hausmeter/errors.hpp"
#include "measure_detail.hpp"

namespace hausmeter {

namespace {

void require_chain(const TruncatedSystem& sys, const char* what) {
  if (!sys.chain()) raise(Errc::not_chain, std::string(what) + " requires a chain system");
}

std::vector<Enclosure> level1_raw(const TruncatedSystem& sys, const Enclosure& h) {
  std::vector<Enclosure> raw(sys.n() + 1);
  for (int k = 1; k <= sys.n(); ++k) {
    if (sys.linear()) {
      raw[k] = clamp(pow(Enclosure(sys.gap(k)), h), 0.0, 1.0);
    } else {
      raw[k] =
          clamp(pow(word_derivative_bounds(sys, std::vector<std::int32_t>{k}), h), 0.0, 1.0);
    }
  }
  return raw;
}

// Sibling renormalization: the n first-level cylinders carry total mass 1.
std::vector<Enclosure> level1_tightened(const TruncatedSystem& sys, const Enclosure& h) {
  auto raw = level1_raw(sys, h);
  if (sys.linear()) return raw;
  double sum_lo = 0.0, sum_hi = 0.0;
  for (int k = 1; k <= sys.n(); ++k) {
    sum_lo += raw[k].lo;
    sum_hi += raw[k].hi;
  }
  std::vector<Enclosure> tight(raw.size());
  for (int k = 1; k <= sys.n(); ++k) {
    const double other_lo = sum_lo - raw[k].lo;
    const double other_hi = sum_hi - raw[k].hi;
    const Enclosure simplex(ulp_down(1.0 - other_hi, kUlpPad), ulp_up(1.0 - other_lo, kUlpPad));
    tight[k] = clamp(intersect(raw[k], simplex), 0.0, 1.0);
  }
  return tight;
}

} // namespace

namespace detail {

MeasureContext::MeasureContext(const TruncatedSystem& s, const Enclosure& hh)
    : sys(&s), h(hh) {
  require_chain(s, "measure context");
  const int n = s.n();
  b.resize(n + 1);
  for (int k = 0; k <= n; ++k) b[k] = s.b(k);
  mu = level1_tightened(s, hh);
  tail.assign(n + 1, Enclosure(0.0));
  for (int k = n - 1; k >= 0; --k) tail[k] = add(tail[k + 1], mu[k + 1]);
  // Total mass is exactly 1; tighten the full tail accordingly.
  tail[0] = intersect(tail[0], Enclosure(1.0));
  factor.assign(n + 1, Enclosure(0.0));
  for (int k = 1; k <= n; ++k) {
    factor[k] = s.linear() ? clamp(pow(Enclosure(s.gap(k)), hh), 0.0, 1.0)
                           : clamp(pow(s.derivative_range(k, Enclosure(0.0, 1.0)), hh), 0.0, 1.0);
  }
}

Enclosure MeasureContext::block(int a, int bidx) const {
  if (a > bidx) return Enclosure(0.0);
  return clamp(sub(tail[a - 1], tail[bidx]), 0.0, 1.0);
}

namespace {

// Cylinder index holding a right endpoint: j with b_j < t <= b_{j-1};
// n+1 when t <= b_n (the bottom gap).
int locate_right(const std::vector<double>& b, int n, double t) {
  if (t <= b[n]) return n + 1;
  int lo = 1, hi = n;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (t > b[mid]) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

// Cylinder index holding a left endpoint: j with b_j <= s < b_{j-1};
// n+1 when s < b_n.
int locate_left(const std::vector<double>& b, int n, double s) {
  if (s < b[n]) return n + 1;
  int lo = 1, hi = n;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (s >= b[mid]) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

// Outward-padded preimage of y under g_j, clipped to [0,1].
Enclosure preimage(const TruncatedSystem& sys, int j, double y) {
  const double x = sys.inverse(j, y);
  return Enclosure(std::max(0.0, ulp_down(x, 2 * kUlpPad)),
                   std::min(1.0, ulp_up(x, 2 * kUlpPad)));
}

// Pullback slop: mass a preimage sliver of a few ulps could hide. Keeps the
// lower endpoint honest after inexact inverse evaluation.
double sliver_allowance(const Enclosure& h) { return 4.0 * std::pow(1e-15, h.lo); }

} // namespace

// Returns m([s,t]) in the coordinates of the current level. The scale
// argument carries the product of pullback factors accumulated so far and
// only drives the stopping rule: once the pending mass cannot exceed the
// tolerance, [0,1] is surrendered and the caller's factors shrink it.
Enclosure interval_measure_rec(const MeasureContext& ctx, double s, double t,
                               const Enclosure& scale, double tol, int depth) {
  const TruncatedSystem& sys = *ctx.sys;
  const int n = ctx.n();
  s = std::max(s, 0.0);
  t = std::min(t, 1.0);
  if (!(s < t)) return Enclosure(0.0);
  if (scale.hi < tol || depth > 300) return Enclosure(0.0, 1.0);

  const int jr = locate_right(ctx.b, n, t);
  if (jr == n + 1) return Enclosure(0.0); // entirely in the bottom gap
  int js = locate_left(ctx.b, n, s);
  bool s_at_edge = false;
  if (js == n + 1) { // left end in the gap: mass starts at b_n
    js = n;
    s_at_edge = true;
  } else {
    s_at_edge = (s == ctx.b[js]);
  }
  const bool t_at_edge = (t == ctx.b[jr - 1]);

  if (jr == js && !(s_at_edge && t_at_edge)) {
    // both endpoints in one cylinder: single pullback
    const int j = jr;
    const Enclosure xt = preimage(sys, j, t);
    const Enclosure xs = preimage(sys, j, s);
    const Enclosure pull(std::min(xt.lo, xs.lo), std::max(xt.hi, xs.hi));
    const Enclosure f = sys.linear() ? ctx.factor[j]
                                     : clamp(pow(sys.derivative_range(j, pull), ctx.h), 0.0, 1.0);
    const Enclosure inner =
        interval_measure_rec(ctx, pull.lo, pull.hi, mul(scale, f), tol, depth + 1);
    Enclosure out = mul(f, inner);
    out.lo = std::max(0.0, out.lo - sliver_allowance(ctx.h));
    return clamp(out, 0.0, 1.0);
  }

  Enclosure total(0.0);
  const int full_begin = t_at_edge ? jr : jr + 1;
  const int full_end = s_at_edge ? js : js - 1;
  if (full_begin <= full_end) total = add(total, ctx.block(full_begin, full_end));

  if (!t_at_edge) {
    // right partial piece [b_jr, t] = g_jr([f(t), 1])
    const Enclosure xt = preimage(sys, jr, t);
    const Enclosure pull(xt.lo, 1.0);
    const Enclosure f = sys.linear() ? ctx.factor[jr]
                                     : clamp(pow(sys.derivative_range(jr, pull), ctx.h), 0.0, 1.0);
    Enclosure part = mul(f, interval_measure_rec(ctx, pull.lo, 1.0, mul(scale, f),
                                                 0.5 * tol, depth + 1));
    part.lo = std::max(0.0, part.lo - sliver_allowance(ctx.h));
    total = add(total, part);
  }
  if (!s_at_edge) {
    // left partial piece [s, b_{js-1}] = g_js([0, f(s)])
    const Enclosure xs = preimage(sys, js, s);
    const Enclosure pull(0.0, xs.hi);
    const Enclosure f = sys.linear() ? ctx.factor[js]
                                     : clamp(pow(sys.derivative_range(js, pull), ctx.h), 0.0, 1.0);
    Enclosure part = mul(f, interval_measure_rec(ctx, 0.0, pull.hi, mul(scale, f),
                                                 0.5 * tol, depth + 1));
    part.lo = std::max(0.0, part.lo - sliver_allowance(ctx.h));
    total = add(total, part);
  }
  return clamp(total, 0.0, 1.0);
}

} // namespace detail

Enclosure cylinder_measure(const TruncatedSystem& sys, const Enclosure& h, const Word& w) {
  for (std::int32_t k : w.letters) {
    if (k < 1 || k > sys.n()) raise(Errc::letter_out_of_range, "word letter out of 1..n");
  }
  if (w.empty()) return Enclosure(1.0);
  if (sys.linear()) {
    double prod = 1.0;
    for (std::int32_t k : w.letters) prod *= sys.gap(k);
    return clamp(pow(Enclosure(prod), h), 0.0, 1.0);
  }
  Enclosure raw = clamp(pow(word_derivative_bounds(sys, w), h), 0.0, 1.0);
  const auto tight = level1_tightened(sys, h);
  if (w.size() == 1) return intersect(raw, tight[w.letters[0]]);
  // Peel the outer letters: m(C_w) is the chain product of per-letter
  // conditional factors times the (tightened) innermost cylinder mass.
  Enclosure img(0.0, 1.0);
  std::vector<Enclosure> images(w.size() + 1); // images[i] = image of suffix starting at i
  images[w.size()] = img;
  for (std::size_t i = w.size(); i-- > 1;) {
    img = sys.image(w.letters[i], img);
    images[i] = img;
  }
  Enclosure peeled = tight[w.letters.back()];
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const Enclosure f = pow(sys.derivative_range(w.letters[i], images[i + 1]), h);
    peeled = mul(peeled, f);
  }
  return clamp(intersect(raw, peeled), 0.0, 1.0);
}

Enclosure interval_measure(const MeasureQuery& q) {
  if (q.sys == nullptr) raise(Errc::invalid_parameter, "query needs a system");
  require_chain(*q.sys, "interval_measure");
  if (!(0.0 <= q.s && q.s < q.t && q.t <= 1.0))
    raise(Errc::invalid_interval, "need 0 <= s < t <= 1");
  if (!(q.tolerance > 0.0)) raise(Errc::invalid_parameter, "tolerance must be positive");
  detail::MeasureContext ctx(*q.sys, q.h);
  return detail::interval_measure_rec(ctx, q.s, q.t, Enclosure(1.0), q.tolerance, 0);
}

namespace {

IntervalTag classify(const TruncatedSystem& sys, double s, double t) {
  const int n = sys.n();
  auto on_grid = [&](double x) {
    for (int k = 0; k <= n; ++k)
      if (x == sys.b(k)) return true;
    return false;
  };
  if (s == 0.0) return IntervalTag::zero_anchored;
  if (on_grid(s) && on_grid(t)) return IntervalTag::grid;
  // cylinder endpoints down to generation 2
  auto on_gen2 = [&](double x) {
    for (int k = 1; k <= n; ++k) {
      for (int j = 1; j <= n; ++j) {
        const double e0 = sys.g(k, sys.g(j, 0.0));
        const double e1 = sys.g(k, sys.g(j, 1.0));
        if (x == e0 || x == e1) return true;
      }
    }
    return false;
  };
  if ((on_grid(s) || on_gen2(s)) && (on_grid(t) || on_gen2(t)))
    return IntervalTag::cylinder_anchored;
  return IntervalTag::general;
}

} // namespace

DensityReport density(const MeasureQuery& q) {
  DensityReport rep;
  rep.s = q.s;
  rep.t = q.t;
  rep.measure = interval_measure(q);
  const Enclosure diam = pad(Enclosure(q.t - q.s));
  rep.density = div(rep.measure, pow(diam, q.h));
  rep.density.lo = std::max(0.0, rep.density.lo);
  rep.tag = classify(*q.sys, q.s, q.t);
  return rep;
}

double cover_sum(const TruncatedSystem& sys, double h, int l, std::uint64_t budget) {
  if (!sys.linear()) raise(Errc::not_linear, "cover sums use exact linear lengths");
  if (l < 1) raise(Errc::invalid_depth, "generation depth must be >= 1");
  if (generation_size(sys, l) > budget)
    raise(Errc::budget_exceeded, "n^l exceeds the enumeration budget");
  const int n = sys.n();
  double total = 0.0;
  // depth-first over length products
  std::vector<double> prod(l + 1, 1.0);
  std::vector<int> letter(l + 1, 1);
  int level = 0;
  while (level >= 0) {
    if (level == l) {
      total += std::pow(prod[l], h);
      --level;
      continue;
    }
    if (letter[level] > n) {
      letter[level] = 1;
      --level;
      continue;
    }
    prod[level + 1] = prod[level] * sys.gap(letter[level]);
    ++letter[level];
    ++level;
    if (level < l) letter[level] = 1;
  }
  return total;
}

WeakStarDiagnostic weak_star_diagnostic(const FamilySpec& spec, const std::vector<int>& n_list,
                                        const std::vector<double>& x_list, double tolerance) {
  if (n_list.empty() || x_list.empty())
    raise(Errc::invalid_parameter, "need nonempty n and x lists");
  for (double x : x_list) {
    if (!(x > 0.0 && x < 1.0)) raise(Errc::invalid_parameter, "x values must lie in (0,1)");
  }
  WeakStarDiagnostic out;
  for (int n : n_list) {
    const TruncatedSystem sys = build_system(spec, n);
    const DimensionResult dim =
        sys.linear() ? solve_moran(sys) : solve_pressure(sys, 6);
    for (double x : x_list) {
      WeakStarRow row;
      row.n = n;
      row.x = x;
      row.m = interval_measure({&sys, dim.h, 0.0, x, tolerance});
      row.deviation = std::max(std::fabs(row.m.lo - x), std::fabs(row.m.hi - x));
      out.rows.push_back(row);
    }
  }
  out.converging.assign(x_list.size(), true);
  for (std::size_t xi = 0; xi < x_list.size(); ++xi) {
    for (std::size_t ni = 1; ni < n_list.size(); ++ni) {
      const double prev = out.rows[(ni - 1) * x_list.size() + xi].deviation;
      const double cur = out.rows[ni * x_list.size() + xi].deviation;
      if (!(cur <= prev)) out.converging[xi] = false;
    }
  }
  return out;
}

} // namespace hausmeter
