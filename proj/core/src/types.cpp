#include "codingsim/types.hpp"

#include <cmath>

namespace codingsim {

std::string_view to_string(Opinion o) noexcept {
  switch (o) {
    case Opinion::A:
      return "A";
    case Opinion::B:
      return "B";
    case Opinion::AB:
      break;
  }
  return "AB";
}

std::string_view to_string(Token t) noexcept {
  return t == Token::A ? "A" : "B";
}

std::optional<Opinion> parse_opinion(std::string_view text) noexcept {
  if (text == "A") return Opinion::A;
  if (text == "B") return Opinion::B;
  if (text == "AB") return Opinion::AB;
  return std::nullopt;
}

std::string_view to_string(Forgetting) noexcept { return "exponential"; }

std::optional<std::string> params_error(const MemoryParams& params) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(params.mu) || !finite(params.theta) || !finite(params.lambda)) {
    return "memory parameters must be finite";
  }
  if (!(params.mu > 0.0 && params.mu <= 1.0)) {
    return "mu must satisfy 0 < mu <= 1 (got " + std::to_string(params.mu) + ")";
  }
  if (!(params.theta > 0.0)) {
    return "theta must be > 0 (got " + std::to_string(params.theta) + ")";
  }
  if (!(params.theta < params.mu)) {
    return "theta must be < mu (got theta=" + std::to_string(params.theta) +
           ", mu=" + std::to_string(params.mu) + ")";
  }
  if (!(params.lambda > 0.0)) {
    return "lambda must be > 0 (got " + std::to_string(params.lambda) + ")";
  }
  return std::nullopt;
}

void validate(const MemoryParams& params) {
  if (auto err = params_error(params)) throw ConfigError(*err);
}

Gamma::Gamma(double value) : value_(value) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw ConfigError("gamma must satisfy 0 <= gamma < 1 (got " +
                      std::to_string(value) + ")");
  }
}

AgentIndex AgentRegistry::intern(std::string_view id) {
  std::string key(id);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto idx = static_cast<AgentIndex>(names_.size());
  names_.push_back(key);
  index_.emplace(std::move(key), idx);
  return idx;
}

std::optional<AgentIndex> AgentRegistry::find(std::string_view id) const {
  if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
  return std::nullopt;
}

const std::string& AgentRegistry::name(AgentIndex index) const {
  if (index >= names_.size()) {
    throw SimulationError("unknown agent index " + std::to_string(index));
  }
  return names_[index];
}

}  // namespace codingsim
