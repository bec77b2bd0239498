#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codingsim/data_io.hpp"
#include "codingsim/sim_engine.hpp"

namespace codingsim {

enum class Topology : std::uint8_t { Complete, ErdosRenyi, BarabasiAlbert };

/// "complete", "er" or "ba".
std::string_view to_string(Topology t) noexcept;
std::optional<Topology> parse_topology(std::string_view text) noexcept;

struct SynthSpec {
  std::size_t n_agents = 10;
  Topology topology = Topology::Complete;
  double edge_probability = 0.1;  // Erdos-Renyi p
  std::size_t attachment = 2;     // Barabasi-Albert m
  double contacts_per_day = 1.0;  // Poisson rate per directed pair
  double horizon_days = 30.0;
  std::uint64_t seed = 0;
};

/// Throws ConfigError on a degenerate spec.
void validate(const SynthSpec& spec);

/// Undirected edge set (i < j), sorted.
std::vector<std::pair<AgentIndex, AgentIndex>> generate_edges(const SynthSpec& spec);

/// Both directions of every edge carry an independent Poisson contact
/// process. Timestamps are whole seconds from 0 and agents are named u0,
/// u1, ...; only agents that take part in a contact are registered. The log
/// equals what parse_events returns for the file write_events produces.
EventLog generate_events(const SynthSpec& spec);

struct PlantConfig {
  Model model = Model::Coding;
  MemoryParams params{};
  Gamma gamma{0.25};
  std::uint64_t seed = 0;
  std::string question = "planted";
  /// Collection time of each wave, wave 1 first. Wave 1 answers are drawn
  /// uniformly; later waves record the model's exhibited opinions.
  std::vector<Hours> wave_times;
};

/// Runs the model once (run index 0, the same init stream a sweep uses) and
/// records A/B/AB as agree/disagree/not sure at each wave. A sweep at the
/// same seed, gamma and one repetition therefore reproduces it exactly.
std::vector<SurveyRecord> generate_planted_surveys(const EventLog& log,
                                                   const PlantConfig& config);

}  // namespace codingsim
