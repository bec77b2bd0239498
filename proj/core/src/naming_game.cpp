#include "codingsim/naming_game.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace codingsim {

Token ng_transmit(Opinion speaker, SplitMix64& rng) {
  switch (speaker) {
    case Opinion::A:
      return Token::A;
    case Opinion::B:
      return Token::B;
    case Opinion::AB:
      break;
  }
  return rng.coin() ? Token::B : Token::A;
}

NgOutcome ng_apply(Opinion speaker, Opinion listener, Token token) {
  if (speaker != Opinion::AB && speaker != to_opinion(token)) {
    throw std::invalid_argument("speaker " + std::string(to_string(speaker)) +
                                " cannot transmit " + std::string(to_string(token)));
  }
  const Opinion said = to_opinion(token);
  if (listener == said || listener == Opinion::AB) {
    return {said, said};
  }
  return {speaker, Opinion::AB};
}

NamingGameRun::NamingGameRun(NgState init) : state_(std::move(init)) {}

void NamingGameRun::check(const ContactEvent& ev) const {
  if (ev.sender >= state_.size() || ev.receiver >= state_.size()) {
    throw SimulationError("event references unknown agent index " +
                          std::to_string(std::max(ev.sender, ev.receiver)));
  }
  if (ev.t < now_) {
    throw SimulationError("out-of-order event at t=" + std::to_string(ev.t));
  }
}

void NamingGameRun::apply(const ContactEvent& ev, Token token) {
  check(ev);
  const auto [s, l] = ng_apply(state_[ev.sender], state_[ev.receiver], token);
  state_[ev.sender] = s;
  state_[ev.receiver] = l;
  now_ = ev.t;
}

Token NamingGameRun::apply(const ContactEvent& ev, SplitMix64& rng) {
  check(ev);
  const Token token = ng_transmit(state_[ev.sender], rng);
  apply(ev, token);
  return token;
}

std::vector<NgState> ng_run(std::span<const ContactEvent> events, const NgState& init,
                            std::uint64_t seed, std::uint64_t run_index,
                            std::span<const Hours> snapshot_times) {
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
    throw SimulationError("snapshot times must be sorted");
  }
  NamingGameRun run(init);
  std::vector<NgState> out;
  out.reserve(snapshot_times.size());
  std::size_t next = 0;
  for (const Hours t : snapshot_times) {
    for (; next < events.size() && events[next].t <= t; ++next) {
      auto rng = keyed_stream(seed, run_index, next, Stream::Events);
      run.apply(events[next], rng);
    }
    out.push_back(run.state());
  }
  return out;
}

bool is_consensus(const NgState& state) noexcept {
  if (state.empty() || state.front() == Opinion::AB) return false;
  return std::all_of(state.begin(), state.end(),
                     [&](Opinion o) { return o == state.front(); });
}

}  // namespace codingsim
