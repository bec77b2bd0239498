#pragma once

#include <vector>

#include "codingsim/rng.hpp"
#include "codingsim/types.hpp"

namespace codingsim {

/// Discretizes a latent pair: A if |a - b| > gamma and a > b, B if
/// |a - b| > gamma and a < b, AB otherwise. Inputs are already decayed.
Opinion exhibited_opinion(double a, double b, Gamma gamma) noexcept;

/// Latent weights of both channels decayed to a common read time.
struct LatentWeights {
  double a = 0.0;
  double b = 0.0;
};

/// Reads `v` at time `t` through the decay path (theta cutoff included).
LatentWeights latent_at(const OpinionVector& v, Hours t, const MemoryParams& params);

/// Exhibited opinion of `v` read at time `t`.
Opinion exhibited_at(const OpinionVector& v, Hours t, Gamma gamma,
                     const MemoryParams& params);

/// Token sent by a speaker with latent state `speaker` at time `t`. An AB
/// speaker sends A or B with probability 1/2, consuming one draw.
Token coding_transmit(const OpinionVector& speaker, Hours t, Gamma gamma,
                      const MemoryParams& params, SplitMix64& rng);

/// Per-agent latent state, indexed by AgentIndex.
struct CodingState {
  std::vector<OpinionVector> vectors;

  friend bool operator==(const CodingState&, const CodingState&) = default;
};

/// Reinforces the receiver's channel named by `token` at ev.t. The sender and
/// the receiver's other channel are not touched.
void coding_apply_event(CodingState& state, const ContactEvent& ev, Token token,
                        const MemoryParams& params);

/// Draws the token from the sender's exhibited opinion, then applies it.
Token coding_apply_event(CodingState& state, const ContactEvent& ev, Gamma gamma,
                         const MemoryParams& params, SplitMix64& rng);

/// Exhibited opinion of every agent at `t`. Read-only.
std::vector<Opinion> coding_snapshot(const CodingState& state, Hours t, Gamma gamma,
                                     const MemoryParams& params);

}  // namespace codingsim
