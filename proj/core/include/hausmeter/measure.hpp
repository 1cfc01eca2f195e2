#ifndef HAUSMETER_MEASURE_HPP
#define HAUSMETER_MEASURE_HPP

#include <cstdint>
#include <vector>

#include "hausmeter/dimension.hpp"
#include "hausmeter/enclosure.hpp"
#include "hausmeter/families.hpp"
#include "hausmeter/words.hpp"

namespace hausmeter {

// Query against the normalized Hausdorff (conformal) measure m_n of a chain
// system, at dimension enclosure h.
struct MeasureQuery {
  const TruncatedSystem* sys = nullptr;
  Enclosure h;
  double s = 0.0;
  double t = 1.0;
  double tolerance = 1e-10;
};

enum class IntervalTag { zero_anchored, grid, cylinder_anchored, general };

struct DensityReport {
  double s = 0.0;
  double t = 1.0;
  Enclosure measure;
  Enclosure density;
  IntervalTag tag = IntervalTag::general;
};

// m_n(g_w([0,1])). Linear: exact (prod a)^h. Nonlinear: derivative-bound
// power intersected with the level-1 sibling renormalization (the n top
// cylinders carry total mass 1).
Enclosure cylinder_measure(const TruncatedSystem& sys, const Enclosure& h, const Word& w);

// m_n([s,t]) by first-level grid decomposition with partial ends pulled back
// through the maps and recursed; unresolved mass below the tolerance is
// surrendered as [0, bound].
Enclosure interval_measure(const MeasureQuery& q);

DensityReport density(const MeasureQuery& q);

struct SupDensityResult {
  DensityReport best;        // largest certified density found (the witness)
  double upper_bound = 0.0;  // bound on the supremum from the pruning relation
  bool partial = false;      // search budget ran out before the frontier closed
  bool certified = true;     // linear chains only; nonlinear bounds are heuristic
  std::uint64_t nodes = 0;
};

// Structured supremum-of-density search: zero-anchored chain intervals [0,r],
// grid intervals [b_{p+q}, b_p], and right-anchored chains [r,1], refined to
// depth L with branch-and-bound pruning against the incumbent.
SupDensityResult sup_density(const TruncatedSystem& sys, const Enclosure& h, int depth,
                             std::uint64_t budget = 200000, bool allow_partial = true);

struct HausdorffEstimate {
  int n = 0;
  Enclosure h;
  double H_lower = 0.0;
  double H_upper = 0.0;
  double witness_left = 0.0;
  double witness_right = 1.0;
  int search_depth = 0;
  bool degenerate = false;  // n = 1: single-point limit set, H = 1 by convention
  bool certified = true;
  double cover_check = 1.0; // cover_sum at h.mid, for the <= 1 consistency gate
};

HausdorffEstimate hausdorff_estimate(const TruncatedSystem& sys, const Enclosure& h,
                                     int depth, std::uint64_t budget = 200000);

// sum over generation-l cylinders of |F|^h; equals (sum a_k^h)^l for linear
// systems and pins to 1 at the Moran root.
double cover_sum(const TruncatedSystem& sys, double h, int l,
                 std::uint64_t budget = kDefaultEnumBudget);

struct WeakStarRow {
  int n = 0;
  double x = 0.0;
  Enclosure m;        // m_n([0, x])
  double deviation = 0.0;  // |m - x| (outer)
};

struct WeakStarDiagnostic {
  std::vector<WeakStarRow> rows;      // n-major, x-minor order
  std::vector<bool> converging;       // one flag per x: deviations decrease in n
};

WeakStarDiagnostic weak_star_diagnostic(const FamilySpec& spec,
                                        const std::vector<int>& n_list,
                                        const std::vector<double>& x_list,
                                        double tolerance = 1e-10);

} // namespace hausmeter

#endif
