#pragma once

#include <stdexcept>
#include <string>

namespace spincycloid {

// Argument outside the operation's domain (t outside [0, T], a outside (0, 1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical contract was broken, e.g. an unnormalized state handed to an
// operation that requires a pure normalized state.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Fixed-step integration drifted beyond its accuracy budget.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double drift)
        : std::runtime_error(what), drift_(drift) {}
    double drift() const noexcept { return drift_; }

private:
    double drift_;
};

// A cyclic quantity was requested for a curve that does not close.
class ClosureError : public std::runtime_error {
public:
    ClosureError(const std::string& what, double gap)
        : std::runtime_error(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

}  // namespace spincycloid
