#pragma once

#include <span>
#include <utility>
#include <vector>

#include "codingsim/rng.hpp"
#include "codingsim/types.hpp"

namespace codingsim {

/// Opinion of every agent, indexed by AgentIndex.
using NgState = std::vector<Opinion>;

/// Token sent by a speaker: its opinion, or a fair coin flip for AB.
/// Consumes exactly one draw from `rng` for an AB speaker and none otherwise.
Token ng_transmit(Opinion speaker, SplitMix64& rng);

struct NgOutcome {
  Opinion speaker;
  Opinion listener;

  friend bool operator==(const NgOutcome&, const NgOutcome&) = default;
};

/// Binary-agreement interaction rule. If the listener already holds the token
/// both parties collapse to it; otherwise the listener adds it (moves to AB)
/// and the speaker is unchanged. Throws std::invalid_argument when the token
/// is one the speaker cannot send.
NgOutcome ng_apply(Opinion speaker, Opinion listener, Token token);

/// Event-driven replay of the naming game: sender speaks, receiver listens.
class NamingGameRun {
 public:
  explicit NamingGameRun(NgState init);

  /// Applies one event with an externally chosen token.
  void apply(const ContactEvent& ev, Token token);

  /// Draws the token from `rng` via ng_transmit, then applies it.
  Token apply(const ContactEvent& ev, SplitMix64& rng);

  const NgState& state() const noexcept { return state_; }
  Hours time() const noexcept { return now_; }

 private:
  void check(const ContactEvent& ev) const;

  NgState state_;
  Hours now_ = 0.0;
};

/// Replays `events` from `init`, drawing AB-speaker tokens from
/// keyed_stream(seed, run_index, event_index, Stream::Events). Returns the
/// state after all events with t <= each of `snapshot_times` (sorted).
std::vector<NgState> ng_run(std::span<const ContactEvent> events, const NgState& init,
                            std::uint64_t seed, std::uint64_t run_index,
                            std::span<const Hours> snapshot_times);

/// True when every agent holds the same single opinion (A or B).
bool is_consensus(const NgState& state) noexcept;

}  // namespace codingsim
