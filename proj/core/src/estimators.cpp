#include "anttamp/estimators.hpp"

#include <stdexcept>

#include "anttamp/gnn.hpp"
#include "anttamp/oracle.hpp"

namespace anttamp {

const CostEstimator& zero_estimator() {
  static const ZeroEstimator z;
  return z;
}

std::unique_ptr<CostEstimator> make_estimator(const std::string& spec,
                                              const Domain& domain) {
  if (spec == "zero") return std::make_unique<ZeroEstimator>();
  if (spec == "oracle") return std::make_unique<OracleEstimator>(domain);
  if (spec.rfind("model:", 0) == 0)
    return std::make_unique<LearnedEstimator>(load_model(spec.substr(6)));
  throw std::invalid_argument("unknown estimator '" + spec +
                              "' (expected zero, oracle, or model:<path>)");
}

}  // namespace anttamp
