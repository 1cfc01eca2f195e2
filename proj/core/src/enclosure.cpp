#include "hausmeter/enclosure.hpp"

#include "hausmeter/errors.hpp"

namespace hausmeter {

namespace {

constexpr std::uint64_t kSignMask = 0x8000000000000000ull;
constexpr std::uint64_t kInfBits = 0x7ff0000000000000ull;

} // namespace

double ulp_up(double x, int steps) {
  if (std::isnan(x)) return x;
  if (std::isinf(x)) return x > 0 ? x : -std::numeric_limits<double>::max();
  std::uint64_t bits = std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x);
  const auto s = static_cast<std::uint64_t>(steps);
  if (!(bits & kSignMask)) {
    bits += s;
    if (bits >= kInfBits) return std::numeric_limits<double>::infinity();
  } else {
    std::uint64_t mag = bits & ~kSignMask;
    if (mag > s) {
      bits -= s;
    } else {
      bits = s - mag; // crossed zero into the positive subnormals
    }
  }
  return std::bit_cast<double>(bits);
}

double ulp_down(double x, int steps) { return -ulp_up(-x, steps); }

Enclosure pad(const Enclosure& e) {
  return Enclosure(ulp_down(e.lo, kUlpPad), ulp_up(e.hi, kUlpPad));
}

Enclosure add(const Enclosure& a, const Enclosure& b) {
  return pad(Enclosure(a.lo + b.lo, a.hi + b.hi));
}

Enclosure sub(const Enclosure& a, const Enclosure& b) {
  return pad(Enclosure(a.lo - b.hi, a.hi - b.lo));
}

Enclosure mul(const Enclosure& a, const Enclosure& b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return pad(Enclosure(std::min(std::min(p1, p2), std::min(p3, p4)),
                       std::max(std::max(p1, p2), std::max(p3, p4))));
}

Enclosure div(const Enclosure& a, const Enclosure& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0)
    raise(Errc::internal, "enclosure division by interval containing zero");
  const double q1 = a.lo / b.lo;
  const double q2 = a.lo / b.hi;
  const double q3 = a.hi / b.lo;
  const double q4 = a.hi / b.hi;
  return pad(Enclosure(std::min(std::min(q1, q2), std::min(q3, q4)),
                       std::max(std::max(q1, q2), std::max(q3, q4))));
}

Enclosure pow(const Enclosure& base, const Enclosure& expo) {
  if (base.lo < 0.0) raise(Errc::internal, "enclosure pow needs nonnegative base");
  // x^t over a box has no interior critical point, so corners suffice.
  const double c1 = std::pow(base.lo, expo.lo);
  const double c2 = std::pow(base.lo, expo.hi);
  const double c3 = std::pow(base.hi, expo.lo);
  const double c4 = std::pow(base.hi, expo.hi);
  return pad(Enclosure(std::min(std::min(c1, c2), std::min(c3, c4)),
                       std::max(std::max(c1, c2), std::max(c3, c4))));
}

Enclosure pow(const Enclosure& base, double expo) {
  return pow(base, Enclosure(expo));
}

Enclosure log(const Enclosure& a) {
  if (a.lo <= 0.0) raise(Errc::internal, "enclosure log needs positive argument");
  return pad(Enclosure(std::log(a.lo), std::log(a.hi)));
}

Enclosure exp(const Enclosure& a) {
  return pad(Enclosure(std::exp(a.lo), std::exp(a.hi)));
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (lo > hi) return Enclosure(0.5 * (lo + hi));
  return Enclosure(lo, hi);
}

Enclosure clamp(const Enclosure& a, double lo, double hi) {
  return Enclosure(std::clamp(a.lo, lo, hi), std::clamp(a.hi, lo, hi));
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::invalid_depth: return "InvalidDepth";
    case Errc::letter_out_of_range: return "LetterOutOfRange";
    case Errc::not_linear: return "NotLinear";
    case Errc::not_nonlinear: return "NotNonlinear";
    case Errc::not_chain: return "NotChain";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::n_too_large: return "NTooLarge";
    case Errc::invalid_interval: return "InvalidInterval";
    case Errc::invalid_t: return "InvalidT";
    case Errc::series_divergence: return "SeriesDivergence";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::unavailable: return "Unavailable";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

} // namespace hausmeter
