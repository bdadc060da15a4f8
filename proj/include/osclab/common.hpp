#ifndef OSCLAB_COMMON_HPP
#define OSCLAB_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace osclab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Error categories surfaced through the C API as status codes.
enum class errc {
  ok = 0,
  invalid_argument,
  non_positive_radius,
  domain_error,
  sign_violation,
  degenerate_derivative,
  zero_frequency,
  budget_exceeded,
  nonconvergent_tail,
  parse_error,
  io_error,
  internal_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace osclab

#endif
