#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "anttamp/domain.hpp"

namespace anttamp {

/// Estimate of the expected future task cost of leaving the environment in a
/// given state. Implementations must be const-thread-safe: planners evaluate
/// candidates concurrently.
class CostEstimator {
 public:
  virtual ~CostEstimator() = default;
  virtual std::string_view name() const = 0;
  virtual double estimate(const Domain& domain, const WorldState& state) const = 0;
};

/// Always 0: planning with it optimizes immediate plan cost only.
class ZeroEstimator final : public CostEstimator {
 public:
  std::string_view name() const override { return "zero"; }
  double estimate(const Domain&, const WorldState&) const override { return 0.0; }
};

const CostEstimator& zero_estimator();

/// Build an estimator from its CLI spelling: "zero", "oracle", or
/// "model:<path>". Throws std::invalid_argument on anything else.
std::unique_ptr<CostEstimator> make_estimator(const std::string& spec,
                                              const Domain& domain);

}  // namespace anttamp
