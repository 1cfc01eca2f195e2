#include "hausmeter/sequence.hpp"

#include "hausmeter/errors.hpp"

namespace hausmeter {

SequenceB SequenceB::closed_form(std::function<double(std::int64_t)> fn) {
  SequenceB s;
  s.kind_ = Kind::closed_form;
  s.fn_ = std::move(fn);
  if (s.fn_(0) != 1.0) raise(Errc::invalid_parameter, "sequence must start at b(0) = 1");
  return s;
}

SequenceB SequenceB::from_table(std::vector<double> values) {
  if (values.empty() || values.front() != 1.0)
    raise(Errc::invalid_parameter, "table sequence must start at 1.0");
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i + 1] < values[i]))
      raise(Errc::invalid_parameter, "table sequence must be strictly decreasing");
  }
  for (double v : values) {
    if (!(v > 0.0) || v > 1.0)
      raise(Errc::invalid_parameter, "table sequence values must lie in (0, 1]");
  }
  SequenceB s;
  s.kind_ = Kind::table;
  s.table_ = std::move(values);
  return s;
}

double SequenceB::operator()(std::int64_t k) const {
  if (k < 0) raise(Errc::index_out_of_range, "sequence index must be nonnegative");
  if (kind_ == Kind::table) {
    if (static_cast<std::size_t>(k) >= table_.size())
      raise(Errc::index_out_of_range, "sequence index beyond table length");
    return table_[static_cast<std::size_t>(k)];
  }
  return fn_(k);
}

std::int64_t SequenceB::max_index() const {
  if (kind_ == Kind::table) return static_cast<std::int64_t>(table_.size()) - 1;
  return std::numeric_limits<std::int64_t>::max();
}

} // namespace hausmeter
