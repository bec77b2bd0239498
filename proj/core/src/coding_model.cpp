#include "codingsim/coding_model.hpp"

#include <cmath>
#include <string>

#include "codingsim/memory_kernel.hpp"

namespace codingsim {

namespace {

const OpinionVector& at(const CodingState& state, AgentIndex i) {
  if (i >= state.vectors.size()) {
    throw SimulationError("event references unknown agent index " + std::to_string(i));
  }
  return state.vectors[i];
}

void require_not_before(const OpinionVector& v, Hours t) {
  if (t < v.t_a || t < v.t_b) {
    throw SimulationError("out-of-order read or update at t=" + std::to_string(t));
  }
}

}  // namespace

Opinion exhibited_opinion(double a, double b, Gamma gamma) noexcept {
  const double delta = std::fabs(a - b);
  if (delta > gamma.value() && a > b) return Opinion::A;
  if (delta > gamma.value() && a < b) return Opinion::B;
  return Opinion::AB;
}

LatentWeights latent_at(const OpinionVector& v, Hours t, const MemoryParams& params) {
  require_not_before(v, t);
  return {decayed_weight(v.a, v.t_a, t, params), decayed_weight(v.b, v.t_b, t, params)};
}

Opinion exhibited_at(const OpinionVector& v, Hours t, Gamma gamma,
                     const MemoryParams& params) {
  const auto w = latent_at(v, t, params);
  return exhibited_opinion(w.a, w.b, gamma);
}

Token coding_transmit(const OpinionVector& speaker, Hours t, Gamma gamma,
                      const MemoryParams& params, SplitMix64& rng) {
  switch (exhibited_at(speaker, t, gamma, params)) {
    case Opinion::A:
      return Token::A;
    case Opinion::B:
      return Token::B;
    case Opinion::AB:
      break;
  }
  return rng.coin() ? Token::B : Token::A;
}

void coding_apply_event(CodingState& state, const ContactEvent& ev, Token token,
                        const MemoryParams& params) {
  at(state, ev.sender);
  at(state, ev.receiver);
  auto& rx = state.vectors[ev.receiver];
  require_not_before(rx, ev.t);
  if (token == Token::A) {
    rx.a = reinforce(rx.a, rx.t_a, ev.t, params);
    rx.t_a = ev.t;
  } else {
    rx.b = reinforce(rx.b, rx.t_b, ev.t, params);
    rx.t_b = ev.t;
  }
}

Token coding_apply_event(CodingState& state, const ContactEvent& ev, Gamma gamma,
                         const MemoryParams& params, SplitMix64& rng) {
  const Token token = coding_transmit(at(state, ev.sender), ev.t, gamma, params, rng);
  coding_apply_event(state, ev, token, params);
  return token;
}

std::vector<Opinion> coding_snapshot(const CodingState& state, Hours t, Gamma gamma,
                                     const MemoryParams& params) {
  std::vector<Opinion> out;
  out.reserve(state.vectors.size());
  for (const auto& v : state.vectors) out.push_back(exhibited_at(v, t, gamma, params));
  return out;
}

}  // namespace codingsim
