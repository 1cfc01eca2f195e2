#ifndef HAUSMETER_SEQUENCE_HPP
#define HAUSMETER_SEQUENCE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace hausmeter {

// The generating sequence b_0 = 1 > b_1 > b_2 > ... > 0. Closed-form
// sequences are valid for every index; table-backed sequences only up to
// the table length (no extrapolation).
class SequenceB {
public:
  enum class Kind { closed_form, table };

  SequenceB() = default;

  static SequenceB closed_form(std::function<double(std::int64_t)> fn);
  static SequenceB from_table(std::vector<double> values);

  double operator()(std::int64_t k) const;

  Kind kind() const { return kind_; }
  bool valid() const { return static_cast<bool>(fn_) || !table_.empty(); }
  // Largest k for which b(k) is defined.
  std::int64_t max_index() const;

private:
  Kind kind_ = Kind::closed_form;
  std::function<double(std::int64_t)> fn_;
  std::vector<double> table_;
};

} // namespace hausmeter

#endif
