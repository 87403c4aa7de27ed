#ifndef SPOTCHECK_ERRORS_HPP
#define SPOTCHECK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spotcheck {

enum class Errc {
  invalid_argument,
  invalid_probability,
  degenerate,
  index_out_of_range,
  dimension_mismatch,
  too_large,
  not_applicable,
  solver_failure,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace spotcheck

#endif
