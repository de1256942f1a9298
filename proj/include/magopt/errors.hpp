#ifndef MAGOPT_ERRORS_HPP
#define MAGOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace magopt {

// Bad arguments: wrong dimensions, parameters outside their stated ranges.
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A problem evaluation produced a non-finite value.
class evaluation_error : public std::runtime_error {
public:
    explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver failed to reach its tolerance; carries the best residual seen.
class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual(best_residual) {}
    double best_residual;
};

// Requested operation is not supported for this instance (e.g. brute force with m too large).
class unsupported_error : public std::runtime_error {
public:
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed persisted data (CSV/JSON) or config text.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Not enough usable points for a statistical fit.
class insufficient_data_error : public std::runtime_error {
public:
    explicit insufficient_data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace magopt

#endif
