#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace codingsim {

// Error taxonomy. The CLI maps InputError to exit code 2 and ConfigError to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data (event logs, surveys, reports).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or an infeasible configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Violated simulation precondition (unknown agent, out-of-order event).
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Simulation time, in hours since the simulation epoch.
using Hours = double;

/// Dense agent index assigned on ingest; see AgentRegistry.
using AgentIndex = std::uint32_t;

enum class Opinion : std::uint8_t { A, B, AB };

/// A transmitted opinion. Speakers never transmit the mixed state.
enum class Token : std::uint8_t { A, B };

/// Ternary survey answer; numeric values match the on-disk encoding.
enum class Answer : std::uint8_t { Agree = 0, Disagree = 1, NotSure = 2 };

constexpr Opinion to_opinion(Token t) noexcept {
  return t == Token::A ? Opinion::A : Opinion::B;
}

constexpr Opinion to_opinion(Answer a) noexcept {
  switch (a) {
    case Answer::Agree:
      return Opinion::A;
    case Answer::Disagree:
      return Opinion::B;
    case Answer::NotSure:
      break;
  }
  return Opinion::AB;
}

constexpr Answer to_answer(Opinion o) noexcept {
  switch (o) {
    case Opinion::A:
      return Answer::Agree;
    case Opinion::B:
      return Answer::Disagree;
    case Opinion::AB:
      break;
  }
  return Answer::NotSure;
}

/// Label swap A <-> B; AB is a fixed point.
constexpr Opinion mirror(Opinion o) noexcept {
  return o == Opinion::A ? Opinion::B : o == Opinion::B ? Opinion::A : Opinion::AB;
}

constexpr Token mirror(Token t) noexcept {
  return t == Token::A ? Token::B : Token::A;
}

std::string_view to_string(Opinion o) noexcept;
std::string_view to_string(Token t) noexcept;
/// Parses "A", "B" or "AB".
std::optional<Opinion> parse_opinion(std::string_view text) noexcept;

/// One directed communication. `t` is in hours.
struct ContactEvent {
  AgentIndex sender = 0;
  AgentIndex receiver = 0;
  Hours t = 0.0;

  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

enum class Forgetting : std::uint8_t { Exponential };

std::string_view to_string(Forgetting f) noexcept;

/// Parameters of the memory kernel. Defaults are the reference constants
/// (mu = 0.3, theta = 0.2, lambda = 0.005631 per hour, exponential).
struct MemoryParams {
  double mu = 0.3;
  double theta = 0.2;
  double lambda = 0.005631;
  Forgetting forgetting = Forgetting::Exponential;

  friend bool operator==(const MemoryParams&, const MemoryParams&) = default;
};

/// Returns a description of the first violated constraint, or nullopt when
/// 0 < theta < mu <= 1 and lambda > 0.
std::optional<std::string> params_error(const MemoryParams& params);

/// Throws ConfigError when params_error reports a violation.
void validate(const MemoryParams& params);

/// Discretization threshold, 0 <= gamma < 1.
class Gamma {
 public:
  /// Throws ConfigError outside [0, 1).
  explicit Gamma(double value);

  double value() const noexcept { return value_; }

  friend bool operator==(const Gamma&, const Gamma&) = default;

 private:
  double value_;
};

/// Latent opinion state. Each channel stores its weight as of its own last
/// update; decay to any later time is computed on read.
struct OpinionVector {
  double a = 0.0;
  double b = 0.0;
  Hours t_a = 0.0;
  Hours t_b = 0.0;

  friend bool operator==(const OpinionVector&, const OpinionVector&) = default;
};

/// Maps opaque agent identifiers to dense indices in first-seen order.
class AgentRegistry {
 public:
  AgentIndex intern(std::string_view id);
  std::optional<AgentIndex> find(std::string_view id) const;
  const std::string& name(AgentIndex index) const;
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const AgentRegistry& a, const AgentRegistry& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AgentIndex> index_;
};

}  // namespace codingsim
