#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "codingsim/coding_model.hpp"
#include "codingsim/naming_game.hpp"
#include "codingsim/types.hpp"

namespace codingsim {

enum class Model : std::uint8_t { NamingGame, Coding };

/// "ng" or "coding".
std::string_view to_string(Model m) noexcept;
std::optional<Model> parse_model(std::string_view text) noexcept;

struct SimConfig {
  Model model = Model::Coding;
  MemoryParams params{};  // CoDiNG only
  Gamma gamma{0.25};      // CoDiNG only
  std::uint64_t seed = 0;
  std::uint32_t repetitions = 10;
  // Initialization instant. Events strictly before it are skipped.
  Hours start_time = 0.0;
  std::vector<Hours> snapshot_times;
  // Reuse the run-0 initial state for every repetition.
  bool fixed_init = false;
};

/// Throws ConfigError on repetitions == 0, unsorted snapshot times, snapshot
/// times before start_time, or invalid memory params.
void validate(const SimConfig& config);

/// Stable 64-bit digest of every field that influences a run.
std::uint64_t config_hash(const SimConfig& config);

using InitialState = std::variant<NgState, CodingState>;

struct Snapshot {
  Hours t = 0.0;
  std::vector<Opinion> opinions;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::uint32_t run_index = 0;
  Model model = Model::Coding;
  std::uint64_t config_hash = 0;
  std::size_t skipped_events = 0;
  std::vector<Snapshot> snapshots;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Replays `events` (sorted by time, stable order for ties) from `init`.
/// Each snapshot is taken after every event with t <= its time. Event draws
/// come from keyed_stream(seed, run_index, event_index, Stream::Events), so
/// the result depends only on the arguments.
Trajectory run_once(std::span<const ContactEvent> events, const InitialState& init,
                    const SimConfig& config, std::uint32_t run_index);

/// Supplies an initial state. Receives the init index: the run index, or 0
/// for every run when SimConfig::fixed_init is set.
using InitSampler = std::function<InitialState(std::uint32_t init_index)>;

/// Runs config.repetitions independent replays on up to `threads` workers
/// (0 = hardware concurrency). Output is ordered by run index and does not
/// depend on the worker count. A failing run is rethrown with its index.
std::vector<Trajectory> run_repeated(std::span<const ContactEvent> events,
                                     const InitSampler& sampler, const SimConfig& config,
                                     unsigned threads = 1);

/// Runs `n` independent jobs on up to `threads` workers; exceptions are
/// rethrown for the lowest failing index after all jobs finish.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& job);

/// CSV with header `run,agent,snapshot_time,opinion`.
void write_trajectories_csv(std::ostream& out, std::span<const Trajectory> runs,
                            const AgentRegistry& agents);

/// JSON array of runs with metadata and per-snapshot opinion maps.
void write_trajectories_json(std::ostream& out, std::span<const Trajectory> runs,
                             const AgentRegistry& agents);

}  // namespace codingsim
