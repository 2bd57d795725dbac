#ifndef CVQKD_ERRORS_HPP
#define CVQKD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cvqkd {

/// File/format problems (CSV, JSON); maps to exit code 3 at the CLI.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical non-convergence (quadrature, cutoff instability).
class accuracy_error : public std::runtime_error {
 public:
  explicit accuracy_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace cvqkd

#endif
