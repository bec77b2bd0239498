#include "codingsim/memory_kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace codingsim {

namespace {

Hours elapsed(Hours t_last, Hours t_now) {
  if (!(t_now >= t_last)) {
    throw std::domain_error("time runs backwards: t_now=" + std::to_string(t_now) +
                            " < t_last=" + std::to_string(t_last));
  }
  return t_now - t_last;
}

}  // namespace

double forgetting_factor(Hours dt, double lambda) {
  if (!(dt >= 0.0)) {
    throw std::domain_error("forgetting_factor: negative elapsed time");
  }
  if (!(lambda > 0.0)) {
    throw std::domain_error("forgetting_factor: lambda must be > 0");
  }
  return std::exp(-lambda * dt);
}

double decayed_weight(double w_last, Hours t_last, Hours t_now,
                      const MemoryParams& params) {
  const double d = w_last * forgetting_factor(elapsed(t_last, t_now), params.lambda);
  return d < params.theta ? 0.0 : d;
}

double reinforce(double w_last, Hours t_last, Hours t_event,
                 const MemoryParams& params) {
  const double d = w_last * forgetting_factor(elapsed(t_last, t_event), params.lambda);
  if (d < params.theta) return params.mu;
  return params.mu + d * (1.0 - params.mu);
}

Hours trace_lifetime(const MemoryParams& params) {
  validate(params);
  return std::log(params.mu / params.theta) / params.lambda;
}

double lambda_for_lifetime(double mu, double theta, Hours lifetime) {
  if (!(lifetime > 0.0)) throw ConfigError("trace lifetime must be > 0");
  validate(MemoryParams{mu, theta, 1.0, Forgetting::Exponential});
  return std::log(mu / theta) / lifetime;
}

}  // namespace codingsim
