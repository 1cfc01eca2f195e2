#ifndef HAUSMETER_FAMILIES_HPP
#define HAUSMETER_FAMILIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "hausmeter/system.hpp"

namespace hausmeter {

// Declarative description of a map family. geometric/power/luroth/table are
// linear chains; gauss is the nonlinear chain g_k(x) = 1/(k+x); gauss2 is the
// second iterate of gauss, indexed by pairs (j,k) in lexicographic order.
struct FamilySpec {
  enum class Variant { geometric, power, luroth, gauss, gauss2, table };

  Variant variant = Variant::luroth;
  double q = 0.0;                 // geometric
  double alpha = 0.0;             // power
  std::vector<double> table;      // table
  std::string name;

  static FamilySpec geometric(double q);
  static FamilySpec power(double alpha);
  static FamilySpec luroth();
  static FamilySpec gauss();
  static FamilySpec gauss2();
  static FamilySpec from_table(std::vector<double> b);

  bool linear() const;
  bool chain() const { return variant != Variant::gauss2; }
  const char* variant_name() const;

  // b_k for chain variants. Throws for gauss2.
  SequenceB sequence() const;
};

TruncatedSystem build_system(const FamilySpec& spec, int n);

// Exact supremum of (b_k - b_{k+1})/b_{k+1} over k >= 0 where a closed form
// exists (geometric, power, luroth); nullopt otherwise.
std::optional<double> analytic_c2(const FamilySpec& spec);

// JSON I/O per the documented schema, e.g. {"family":"geometric","q":0.5}.
// Unknown keys are rejected.
FamilySpec family_from_json(const std::string& text);
std::string family_to_json(const FamilySpec& spec);

// Stable content hash of the canonical JSON form (cache keys).
std::uint64_t family_hash(const FamilySpec& spec);

} // namespace hausmeter

#endif
