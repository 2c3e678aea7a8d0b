#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ocfem {

/// Bad argument to a constructor or free function (sizes, ranges, tags).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A function handed to the interpolant violates the essential boundary conditions.
class BcViolation : public std::runtime_error {
public:
    BcViolation(const std::string& what, std::size_t node)
        : std::runtime_error(what), node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Problem data that makes the feasible set empty or trivial.
class InfeasibleData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Primal-dual active set iteration did not settle. Carries the last two
/// active sets (bound-row indices) so cycling can be diagnosed.
class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, std::vector<std::size_t> previous,
                  std::vector<std::size_t> last)
        : std::runtime_error(what), previous_(std::move(previous)), last_(std::move(last)) {}

    const std::vector<std::size_t>& previous_active() const noexcept { return previous_; }
    const std::vector<std::size_t>& last_active() const noexcept { return last_; }

private:
    std::vector<std::size_t> previous_;
    std::vector<std::size_t> last_;
};

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed or inconsistent problem document.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ocfem
