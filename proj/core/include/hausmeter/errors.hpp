#ifndef HAUSMETER_ERRORS_HPP
#define HAUSMETER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hausmeter {

enum class Errc {
  budget_exceeded,
  invalid_depth,
  letter_out_of_range,
  not_linear,
  not_nonlinear,
  not_chain,
  invalid_parameter,
  n_too_large,
  invalid_interval,
  invalid_t,
  series_divergence,
  index_out_of_range,
  unavailable,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace hausmeter

#endif
