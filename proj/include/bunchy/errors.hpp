#pragma once

#include <stdexcept>
#include <string>

namespace bunchy {

// Bad input: malformed files, violated preconditions, unmet hypotheses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive routine was asked to work beyond its configured size.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

// A proven law failed to hold on a concrete instance. Always a bug.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A randomized search for a synchronizer gave up. Not a bug, but a
// potential counterexample worth keeping.
class ConjectureFailure : public std::runtime_error {
 public:
  ConjectureFailure(const std::string& what, std::string instance)
      : std::runtime_error(what), instance_(std::move(instance)) {}
  const std::string& instance() const noexcept { return instance_; }

 private:
  std::string instance_;
};

}  // namespace bunchy
