#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace robudom {

// Raised when a construction's hypothesis does not hold for the given
// instance. hypothesis() names the failed condition so harness records can
// report it verbatim.
class HypothesisError : public std::domain_error {
 public:
  HypothesisError(std::string hypothesis, const std::string& detail)
      : std::domain_error(hypothesis + ": " + detail),
        hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

}  // namespace robudom
