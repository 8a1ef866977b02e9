#pragma once

#include <stdexcept>
#include <string>

namespace minsurf {

// Failure categories surfaced by the library.  Every throw site picks the
// narrowest kind; the CLI maps any uncaught Error to a nonzero exit.
enum class ErrorKind {
  config,            // malformed or inconsistent input description
  domain_degenerate, // radii out of order, empty region, bad nesting
  resolution,        // grid too coarse for the requested certificate
  labyrinth_fit,     // band family does not fit inside the annulus
  representation,    // series cannot represent the function on the carrier
  branch_point,      // induced metric vanishes somewhere on the grid
  period,            // a period that must vanish does not
  flux_mismatch,     // flux constraints unsatisfiable or violated
  approximation,     // fit residual exceeds the requested budget
  well_definedness,  // surface data inconsistent (e.g. non-closing integrals)
  connectivity,      // graph target set unreachable
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace minsurf
