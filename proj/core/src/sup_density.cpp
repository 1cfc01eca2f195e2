#include <cmath>

#include "hausmeter/errors.hpp"
#include "hausmeter/measure.hpp"
#include "measure_detail.hpp"

namespace hausmeter {

namespace {

using detail::MeasureContext;

// Candidate intervals are parametrized by cylinder chains q1,q2,...: with u
// the normalized mass left of the pullback coordinate x (u = m([0,x])), the
// mass left of the chain point r = g_{q1..qd}(x) is affine in u:
//
//   m([0, r]) = cN + sN * u,   seeded by m([0,r]) = T_{q1} + F_{q1} (1 - u)
//
// and each deeper letter substitutes u = T_q + F_q (1 - u'). For linear
// systems the coefficients are exact (widths at rounding level); for
// nonlinear chains F is the derivative-range power and everything widens.
// Chain endpoints (u = 0 and u = 1, i.e. x = 0 and x = 1) are exact
// candidates; interior points are covered by the node bounds.
struct ChainNode {
  std::vector<std::int32_t> chain;
  Enclosure cN;        // m([0, r]) = cN + sN * u
  Enclosure sN;
  Enclosure pos;       // outward-padded position range of r
  double e0 = 0.0;     // exact position at u = 0 (x = 0)
  double e1 = 0.0;     // exact position at u = 1 (x = 1)
};

struct Search {
  const MeasureContext* ctx = nullptr;
  int depth_limit = 1;
  std::uint64_t budget = 0;
  std::uint64_t nodes = 0;
  bool partial = false;
  double touch_bound = std::numeric_limits<double>::infinity();
  double three_piece_bound = std::numeric_limits<double>::infinity();
  double best_lo = 0.0;
  double best_s = 0.0, best_t = 1.0;
  Enclosure best_m, best_d;
  bool have_best = false;

  bool spend() {
    if (nodes >= budget) {
      partial = true;
      return false;
    }
    ++nodes;
    return true;
  }

  void offer(double s, double t, const Enclosure& m_raw) {
    if (!(t > s)) return;
    const Enclosure m = clamp(m_raw, 0.0, 1.0);
    const Enclosure diam = pad(Enclosure(t - s));
    if (!(diam.lo > 0.0)) return;
    Enclosure d = div(m, pow(diam, ctx->h));
    d.lo = std::max(0.0, d.lo);
    if (d.lo > best_lo) {
      best_lo = d.lo;
      best_s = s;
      best_t = t;
      best_m = m;
      best_d = d;
      have_best = true;
    }
  }
};

ChainNode make_node(const MeasureContext& ctx, std::vector<std::int32_t> chain,
                    const Enclosure& cN, const Enclosure& sN) {
  const TruncatedSystem& sys = *ctx.sys;
  ChainNode node;
  node.chain = std::move(chain);
  node.cN = cN;
  node.sN = sN;
  const Word w{std::vector<std::int32_t>(node.chain)};
  node.e0 = apply_word(sys, w, 0.0);
  node.e1 = apply_word(sys, w, 1.0);
  node.pos = pad(Enclosure(std::min(node.e0, node.e1), std::max(node.e0, node.e1)));
  return node;
}

ChainNode child_node(const MeasureContext& ctx, const ChainNode& parent, int q) {
  // u = T_q + F_q (1 - u')
  const Enclosure step = add(ctx.tail[q], ctx.factor[q]);
  std::vector<std::int32_t> chain = parent.chain;
  chain.push_back(q);
  return make_node(ctx, std::move(chain), add(parent.cN, mul(parent.sN, step)),
                   minus(mul(parent.sN, ctx.factor[q])));
}

ChainNode seed_node(const MeasureContext& ctx, int q) {
  // m([0, r]) = T_q + F_q (1 - u)
  return make_node(ctx, {q}, add(ctx.tail[q], ctx.factor[q]), minus(ctx.factor[q]));
}

Enclosure mass_range(const ChainNode& n) {
  const Enclosure at0 = n.cN;
  const Enclosure at1 = add(n.cN, n.sN);
  return hull(at0, at1);
}

// ---- anchored families: [0, r] and [r, 1] with r on a chain ----

void anchored_descend(Search& st, const ChainNode& node, bool zero_anchor, double& family_ub) {
  const MeasureContext& ctx = *st.ctx;
  const bool in_budget = st.spend();

  const Enclosure m_at0 = node.cN;
  const Enclosure m_at1 = add(node.cN, node.sN);
  if (zero_anchor) {
    st.offer(0.0, node.e0, m_at0);
    st.offer(0.0, node.e1, m_at1);
  } else {
    st.offer(node.e0, 1.0, sub(Enclosure(1.0), m_at0));
    st.offer(node.e1, 1.0, sub(Enclosure(1.0), m_at1));
  }

  const Enclosure mr = mass_range(node);
  double n_max, d_min;
  if (zero_anchor) {
    n_max = std::min(mr.hi, 1.0);
    d_min = node.pos.lo;
  } else {
    n_max = std::min(1.0 - mr.lo, 1.0);
    d_min = 1.0 - node.pos.hi;
  }
  n_max = std::max(n_max, 0.0);
  double ub;
  if (!(d_min > 0.0)) ub = std::numeric_limits<double>::infinity();
  else ub = div(Enclosure(0.0, n_max), pow(Enclosure(d_min), ctx.h)).hi;

  if (ub <= st.best_lo || static_cast<int>(node.chain.size()) >= st.depth_limit ||
      !in_budget) {
    family_ub = std::max(family_ub, ub);
    return;
  }
  for (int q = 1; q <= ctx.n(); ++q)
    anchored_descend(st, child_node(ctx, node, q), zero_anchor, family_ub);
}

// ---- family (iii): two-sided pairs of chain endpoints ----
//
// s lives on a chain rooted in C_i, t on a chain rooted in C_j with j < i,
// so m([s,t]) = m([0,t]) - m([0,s]) is affine in the two independent u's.
// Same-parent pairs reduce to these by pulling the parent back.

void pair_descend(Search& st, const ChainNode& left, const ChainNode& right,
                  double& family_ub) {
  const MeasureContext& ctx = *st.ctx;
  const bool in_budget = st.spend();

  const Enclosure l0 = left.cN, l1 = add(left.cN, left.sN);
  const Enclosure r0 = right.cN, r1 = add(right.cN, right.sN);
  // corner candidates (exact positions, enclosure masses)
  const double ls[2] = {left.e0, left.e1};
  const Enclosure lm[2] = {l0, l1};
  const double rs[2] = {right.e0, right.e1};
  const Enclosure rm[2] = {r0, r1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) st.offer(ls[a], rs[b], sub(rm[b], lm[a]));

  const Enclosure mass = sub(hull(r0, r1), hull(l0, l1));
  const double n_max = std::clamp(mass.hi, 0.0, 1.0);
  const double d_min = right.pos.lo - left.pos.hi;
  // Every interval in this box straddles the grid points between the two
  // root cylinders, so it splits into at most three pieces bounded by the
  // anchored and grid families (two pieces when the chains share the point).
  double ub = d_min > 0.0 ? st.three_piece_bound : st.touch_bound;
  if (d_min > 0.0)
    ub = std::min(ub, div(Enclosure(0.0, n_max), pow(Enclosure(d_min), ctx.h)).hi);

  const int ldepth = static_cast<int>(left.chain.size());
  const int rdepth = static_cast<int>(right.chain.size());
  const bool can_split_left = ldepth < st.depth_limit;
  const bool can_split_right = rdepth < st.depth_limit;
  if (ub <= st.best_lo || (!can_split_left && !can_split_right) || !in_budget) {
    family_ub = std::max(family_ub, ub);
    return;
  }
  // refine the side with more mass uncertainty
  const double lw = std::fabs(left.sN.lo) + std::fabs(left.sN.hi);
  const double rw = std::fabs(right.sN.lo) + std::fabs(right.sN.hi);
  const bool split_left = can_split_left && (lw >= rw || !can_split_right);
  if (split_left) {
    for (int q = 1; q <= ctx.n(); ++q)
      pair_descend(st, child_node(ctx, left, q), right, family_ub);
  } else {
    for (int q = 1; q <= ctx.n(); ++q)
      pair_descend(st, left, child_node(ctx, right, q), family_ub);
  }
}

IntervalTag tag_interval(const TruncatedSystem& sys, double s, double t) {
  if (s == 0.0) return IntervalTag::zero_anchored;
  bool s_grid = false, t_grid = false;
  for (int k = 0; k <= sys.n(); ++k) {
    const double bk = sys.b(k);
    s_grid = s_grid || (s == bk);
    t_grid = t_grid || (t == bk);
  }
  if (s_grid && t_grid) return IntervalTag::grid;
  return IntervalTag::cylinder_anchored;
}

} // namespace

SupDensityResult sup_density(const TruncatedSystem& sys, const Enclosure& h, int depth,
                             std::uint64_t budget, bool allow_partial) {
  if (!sys.chain()) raise(Errc::not_chain, "density search requires a chain system");
  if (depth < 1) raise(Errc::invalid_depth, "search depth must be >= 1");
  MeasureContext ctx(sys, h);
  const int n = sys.n();

  Search st;
  st.ctx = &ctx;
  st.depth_limit = depth;
  st.budget = std::max<std::uint64_t>(budget, 16);

  // family (ii): grid intervals [b_{p+q}, b_p] (exact block sums), plus the
  // zero-anchored grid points [0, b_q]
  double grid_hi_max = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int pq = p + 1; pq <= n; ++pq) {
      const Enclosure m = ctx.block(p + 1, pq);
      st.offer(ctx.b[pq], ctx.b[p], m);
      const Enclosure d = div(m, pow(pad(Enclosure(ctx.b[p] - ctx.b[pq])), h));
      grid_hi_max = std::max(grid_hi_max, d.hi);
    }
  }
  for (int q = 1; q <= n; ++q) st.offer(0.0, ctx.b[q], ctx.tail[q]);

  // family (i): zero-anchored chains, then the right-anchored mirror.
  // Depth at least 2 here: the depth-1 chain rooted at letter 1 touches the
  // point 1 and only resolves to finite bounds once refined.
  double a0_ub = 0.0, a1_ub = 0.0, pair_ub = 0.0;
  st.depth_limit = std::max(depth, 2);
  for (int q = 1; q <= n; ++q) anchored_descend(st, seed_node(ctx, q), true, a0_ub);
  for (int q = 1; q <= n; ++q) anchored_descend(st, seed_node(ctx, q), false, a1_ub);
  st.depth_limit = depth;
  st.touch_bound =
      mul(pow(Enclosure(2.0), sub(Enclosure(1.0), h)), Enclosure(std::max(a0_ub, a1_ub))).hi;
  st.three_piece_bound =
      mul(pow(Enclosure(3.0), sub(Enclosure(1.0), h)),
          Enclosure(std::max({a0_ub, a1_ub, grid_hi_max}))).hi;

  // family (iii): two-sided endpoint pairs across distinct first letters.
  // Each seed gets its own budget window so late seeds still report bounds.
  const std::uint64_t pair_budget = st.budget > st.nodes ? st.budget - st.nodes : 0;
  const std::uint64_t seeds = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t per_seed = std::max<std::uint64_t>(64, pair_budget / std::max<std::uint64_t>(seeds, 1));
  const std::uint64_t total_cap = st.budget;
  for (int i = 2; i <= n; ++i) {
    for (int j = 1; j < i; ++j) {
      st.budget = std::min(total_cap, st.nodes + per_seed);
      pair_descend(st, seed_node(ctx, i), seed_node(ctx, j), pair_ub);
    }
  }
  st.budget = total_cap;

  SupDensityResult out;
  out.nodes = st.nodes;
  out.partial = st.partial;
  out.certified = sys.linear();
  if (out.partial && !allow_partial)
    raise(Errc::budget_exceeded, "density search budget exhausted");
  if (!st.have_best) raise(Errc::internal, "density search found no candidate");
  out.best = DensityReport{st.best_s, st.best_t, st.best_m, st.best_d,
                           tag_interval(sys, st.best_s, st.best_t)};

  // Upper bound on the supremum over all closed intervals. Every interval
  // either straddles first-level structure (then it is covered by the pair
  // family after moving endpoints inward, which only raises density) or sits
  // inside one cylinder and pulls back; for linear systems the pullback is
  // density-preserving, so the pair/anchored frontier bounds close the
  // argument. Nonlinear pullbacks pay a squared-distortion factor and the
  // result is heuristic.
  double global_ub = std::max({pair_ub, a0_ub, a1_ub, grid_hi_max, st.best_lo});
  if (!sys.linear()) {
    double kappa_max = 1.0;
    for (int k = 1; k <= n; ++k) {
      const Enclosure dr = sys.derivative_range(k, Enclosure(0.0, 1.0));
      kappa_max = std::max(kappa_max, dr.hi / dr.lo);
    }
    global_ub *= pow(Enclosure(kappa_max), mul(Enclosure(2.0), h)).hi;
  }
  out.upper_bound = std::max(global_ub, out.best.density.hi);
  return out;
}

HausdorffEstimate hausdorff_estimate(const TruncatedSystem& sys, const Enclosure& h,
                                     int depth, std::uint64_t budget) {
  HausdorffEstimate est;
  est.n = sys.n();
  est.h = h;
  est.search_depth = depth;
  if (sys.n() == 1) {
    est.degenerate = true;
    est.h = Enclosure(0.0);
    est.H_lower = est.H_upper = 1.0;
    est.witness_left = sys.chain() ? sys.b(1) : sys.map_left(1);
    est.witness_right = est.witness_left;
    return est;
  }
  const SupDensityResult sup = sup_density(sys, h, depth, budget, true);
  est.certified = sup.certified;
  if (!(sup.best.density.lo > 0.0))
    raise(Errc::internal, "density search found no positive-density interval");
  est.H_upper = 1.0 / sup.best.density.lo;
  est.H_lower = 1.0 / sup.upper_bound;
  est.witness_left = sup.best.s;
  est.witness_right = sup.best.t;
  if (sys.linear()) {
    est.cover_check = cover_sum(sys, h.mid(), sys.n() <= 6 ? 3 : 2);
    if (est.H_upper > 1.0 + 1e-8)
      raise(Errc::internal, "upper estimate exceeded 1 for a linear system");
  }
  return est;
}

} // namespace hausmeter
