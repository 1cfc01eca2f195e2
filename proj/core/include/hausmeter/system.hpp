#ifndef HAUSMETER_SYSTEM_HPP
#define HAUSMETER_SYSTEM_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "hausmeter/enclosure.hpp"
#include "hausmeter/sequence.hpp"

namespace hausmeter {

// Point evaluators for nonlinear map families: g(k, x), g'(k, x), g''(k, x)
// for x in [0, 1], k in 1..n.
struct Evaluators {
  std::function<double(int, double)> g;
  std::function<double(int, double)> dg;
  std::function<double(int, double)> d2g;
};

// The first-n iterated function system. Immutable after construction; all
// member queries are pure.
//
// Chain systems are the descending-sequence kind: map k sends [0,1] onto
// [b_k, b_{k-1}] and the images tile [b_n, 1]. Non-chain systems (the second
// Gauss iterate) only promise pairwise disjoint interiors.
class TruncatedSystem {
public:
  static TruncatedSystem linear_chain(SequenceB seq, int n);
  static TruncatedSystem nonlinear_chain(SequenceB seq, int n, Evaluators ev);
  static TruncatedSystem nonlinear_general(int n,
                                           std::vector<std::pair<double, double>> intervals,
                                           Evaluators ev);

  int n() const { return n_; }
  bool linear() const { return linear_; }
  bool chain() const { return chain_; }

  // b(k) for 0 <= k <= n; chain systems only.
  double b(std::int64_t k) const;
  // a_k = b(k-1) - b(k) for chain systems, interval length otherwise; 1-based.
  double gap(int k) const;
  double map_left(int k) const;
  double map_right(int k) const;

  double g(int k, double x) const;
  double dg(int k, double x) const;
  double d2g(int k, double x) const;

  // True when |g_k'| is monotone on [0,1] (detected via a sign-constant
  // second derivative at construction); linear maps trivially qualify.
  bool derivative_monotone(int k) const;

  // Enclosure of {|g_k'(x)| : x in dom}; dom is clipped to [0,1].
  Enclosure derivative_range(int k, const Enclosure& dom) const;
  // Outer enclosure of g_k(dom).
  Enclosure image(int k, const Enclosure& dom) const;
  // Outer enclosure of the preimage g_k^{-1}(y) for y in the map interval.
  double inverse(int k, double y) const;

  const SequenceB& seq() const { return seq_; }

private:
  TruncatedSystem() = default;
  void check_letter(int k) const;

  int n_ = 0;
  bool linear_ = true;
  bool chain_ = true;
  SequenceB seq_;
  std::vector<double> bvals_;    // b_0..b_n (chain systems)
  std::vector<double> gaps_;     // a_1..a_n
  std::vector<double> left_, right_;
  std::vector<bool> mono_;
  Evaluators ev_;
};

} // namespace hausmeter

#endif
