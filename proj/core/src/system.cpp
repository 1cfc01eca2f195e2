#include "hausmeter/system.hpp"

#include <cmath>

#include "hausmeter/errors.hpp"

namespace hausmeter {

namespace {

// Sign-constancy scan of g'' over [0,1]; a constant sign makes |g'| monotone
// (g' never vanishes) so endpoint evaluation bounds it exactly.
bool second_derivative_sign_constant(const Evaluators& ev, int k) {
  constexpr int kSamples = 65;
  int sign = 0;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = static_cast<double>(i) / kSamples;
    const double v = ev.d2g(k, x);
    if (v == 0.0) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

} // namespace

TruncatedSystem TruncatedSystem::linear_chain(SequenceB seq, int n) {
  if (n < 1) raise(Errc::invalid_parameter, "n must be >= 1");
  if (static_cast<std::int64_t>(n) > seq.max_index())
    raise(Errc::n_too_large, "n exceeds the sequence's valid range");
  TruncatedSystem sys;
  sys.n_ = n;
  sys.linear_ = true;
  sys.chain_ = true;
  sys.seq_ = std::move(seq);
  sys.bvals_.resize(n + 1);
  for (int k = 0; k <= n; ++k) sys.bvals_[k] = sys.seq_(k);
  if (sys.bvals_[0] != 1.0) raise(Errc::invalid_parameter, "b(0) must equal 1");
  sys.gaps_.resize(n + 1);
  sys.left_.resize(n + 1);
  sys.right_.resize(n + 1);
  for (int k = 1; k <= n; ++k) {
    const double a = sys.bvals_[k - 1] - sys.bvals_[k];
    if (!(a > 0.0) || !(a < 1.0))
      raise(Errc::invalid_parameter, "gaps a_k must lie in (0, 1)");
    sys.gaps_[k] = a;
    sys.left_[k] = sys.bvals_[k];
    sys.right_[k] = sys.bvals_[k - 1];
  }
  sys.mono_.assign(n + 1, true);
  return sys;
}

TruncatedSystem TruncatedSystem::nonlinear_chain(SequenceB seq, int n, Evaluators ev) {
  if (n < 1) raise(Errc::invalid_parameter, "n must be >= 1");
  if (static_cast<std::int64_t>(n) > seq.max_index())
    raise(Errc::n_too_large, "n exceeds the sequence's valid range");
  TruncatedSystem sys;
  sys.n_ = n;
  sys.linear_ = false;
  sys.chain_ = true;
  sys.seq_ = std::move(seq);
  sys.ev_ = std::move(ev);
  sys.bvals_.resize(n + 1);
  for (int k = 0; k <= n; ++k) sys.bvals_[k] = sys.seq_(k);
  sys.gaps_.resize(n + 1);
  sys.left_.resize(n + 1);
  sys.right_.resize(n + 1);
  sys.mono_.assign(n + 1, true);
  for (int k = 1; k <= n; ++k) {
    const double g0 = sys.ev_.g(k, 0.0);
    const double g1 = sys.ev_.g(k, 1.0);
    if (std::fabs(g0 - sys.bvals_[k - 1]) > 1e-12 || std::fabs(g1 - sys.bvals_[k]) > 1e-12)
      raise(Errc::invalid_parameter, "map endpoints must match the sequence within 1e-12");
    for (int i = 0; i <= 16; ++i) {
      if (!(sys.ev_.dg(k, i / 16.0) < 0.0))
        raise(Errc::invalid_parameter, "chain maps must be strictly decreasing");
    }
    sys.gaps_[k] = sys.bvals_[k - 1] - sys.bvals_[k];
    if (!(sys.gaps_[k] > 0.0))
      raise(Errc::invalid_parameter, "gaps a_k must be positive");
    sys.left_[k] = sys.bvals_[k];
    sys.right_[k] = sys.bvals_[k - 1];
    sys.mono_[k] = second_derivative_sign_constant(sys.ev_, k);
  }
  return sys;
}

TruncatedSystem TruncatedSystem::nonlinear_general(
    int n, std::vector<std::pair<double, double>> intervals, Evaluators ev) {
  if (n < 1) raise(Errc::invalid_parameter, "n must be >= 1");
  if (intervals.size() != static_cast<std::size_t>(n))
    raise(Errc::invalid_parameter, "one interval per map required");
  TruncatedSystem sys;
  sys.n_ = n;
  sys.linear_ = false;
  sys.chain_ = false;
  sys.ev_ = std::move(ev);
  sys.gaps_.resize(n + 1);
  sys.left_.resize(n + 1);
  sys.right_.resize(n + 1);
  sys.mono_.assign(n + 1, true);
  for (int k = 1; k <= n; ++k) {
    const auto [lo, hi] = intervals[k - 1];
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
      raise(Errc::invalid_parameter, "map interval must be a proper subinterval of [0,1]");
    sys.left_[k] = lo;
    sys.right_[k] = hi;
    sys.gaps_[k] = hi - lo;
    // Derivative may be of either sign but must not vanish.
    for (int i = 0; i <= 16; ++i) {
      if (sys.ev_.dg(k, i / 16.0) == 0.0)
        raise(Errc::invalid_parameter, "maps must be diffeomorphisms (nonzero derivative)");
    }
    sys.mono_[k] = second_derivative_sign_constant(sys.ev_, k);
  }
  return sys;
}

void TruncatedSystem::check_letter(int k) const {
  if (k < 1 || k > n_) raise(Errc::letter_out_of_range, "map index out of 1..n");
}

double TruncatedSystem::b(std::int64_t k) const {
  if (!chain_) raise(Errc::not_chain, "b(k) requires a chain system");
  if (k < 0 || k > n_) raise(Errc::index_out_of_range, "b(k) defined for 0..n here");
  return bvals_[static_cast<std::size_t>(k)];
}

double TruncatedSystem::gap(int k) const {
  check_letter(k);
  return gaps_[k];
}

double TruncatedSystem::map_left(int k) const {
  check_letter(k);
  return left_[k];
}

double TruncatedSystem::map_right(int k) const {
  check_letter(k);
  return right_[k];
}

double TruncatedSystem::g(int k, double x) const {
  check_letter(k);
  if (linear_) return right_[k] - gaps_[k] * x;
  return ev_.g(k, x);
}

double TruncatedSystem::dg(int k, double x) const {
  check_letter(k);
  if (linear_) return -gaps_[k];
  return ev_.dg(k, x);
}

double TruncatedSystem::d2g(int k, double x) const {
  check_letter(k);
  if (linear_) return 0.0;
  return ev_.d2g(k, x);
}

bool TruncatedSystem::derivative_monotone(int k) const {
  check_letter(k);
  return mono_[k];
}

namespace {

void refine_abs_derivative(const TruncatedSystem& sys, int k, double lo, double hi,
                           int depth, double& out_lo, double& out_hi) {
  const double mid = 0.5 * (lo + hi);
  const double v0 = std::fabs(sys.dg(k, lo));
  const double vm = std::fabs(sys.dg(k, mid));
  const double v1 = std::fabs(sys.dg(k, hi));
  const double curv = std::max({std::fabs(sys.d2g(k, lo)), std::fabs(sys.d2g(k, mid)),
                                std::fabs(sys.d2g(k, hi))});
  const double slack = curv * (hi - lo);
  const double cell_lo = std::min({v0, vm, v1});
  const double cell_hi = std::max({v0, vm, v1});
  if (slack < 1e-6 || depth >= 20) {
    out_lo = std::min(out_lo, cell_lo - slack);
    out_hi = std::max(out_hi, cell_hi + slack);
    return;
  }
  refine_abs_derivative(sys, k, lo, mid, depth + 1, out_lo, out_hi);
  refine_abs_derivative(sys, k, mid, hi, depth + 1, out_lo, out_hi);
}

} // namespace

Enclosure TruncatedSystem::derivative_range(int k, const Enclosure& dom) const {
  check_letter(k);
  if (linear_) return Enclosure(gaps_[k]);
  const double lo = std::max(0.0, dom.lo);
  const double hi = std::min(1.0, dom.hi);
  if (mono_[k]) {
    const double v0 = std::fabs(ev_.dg(k, lo));
    const double v1 = std::fabs(ev_.dg(k, hi));
    return pad(Enclosure(std::min(v0, v1), std::max(v0, v1)));
  }
  double out_lo = std::numeric_limits<double>::infinity();
  double out_hi = 0.0;
  refine_abs_derivative(*this, k, lo, hi, 0, out_lo, out_hi);
  return pad(Enclosure(std::max(0.0, out_lo), out_hi));
}

Enclosure TruncatedSystem::image(int k, const Enclosure& dom) const {
  check_letter(k);
  const double lo = std::max(0.0, dom.lo);
  const double hi = std::min(1.0, dom.hi);
  const double e0 = g(k, lo);
  const double e1 = g(k, hi);
  return pad(Enclosure(std::min(e0, e1), std::max(e0, e1)));
}

double TruncatedSystem::inverse(int k, double y) const {
  check_letter(k);
  if (linear_) return (right_[k] - y) / gaps_[k];
  // g_k is strictly monotone on [0,1]; bisect to machine precision.
  double lo = 0.0, hi = 1.0;
  const bool decreasing = g(k, 0.0) > g(k, 1.0);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(k, mid);
    const bool go_right = decreasing ? (v > y) : (v < y);
    if (go_right) lo = mid;
    else hi = mid;
    if (hi - lo < 4e-17) break;
  }
  return 0.5 * (lo + hi);
}

} // namespace hausmeter
