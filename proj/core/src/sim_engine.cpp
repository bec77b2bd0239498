#include "codingsim/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <string>
#include <thread>

#include <json.hpp>

#include "text.hpp"

namespace codingsim {

std::string_view to_string(Model m) noexcept {
  return m == Model::NamingGame ? "ng" : "coding";
}

std::optional<Model> parse_model(std::string_view text) noexcept {
  if (text == "ng") return Model::NamingGame;
  if (text == "coding") return Model::Coding;
  return std::nullopt;
}

void validate(const SimConfig& config) {
  if (config.repetitions == 0) throw ConfigError("repetitions must be >= 1");
  if (!std::is_sorted(config.snapshot_times.begin(), config.snapshot_times.end())) {
    throw ConfigError("snapshot times must be sorted");
  }
  if (!config.snapshot_times.empty() && config.snapshot_times.front() < config.start_time) {
    throw ConfigError("snapshot time precedes the initialization time");
  }
  if (config.model == Model::Coding) validate(config.params);
}

std::uint64_t config_hash(const SimConfig& config) {
  std::string canon;
  const auto put = [&](std::string_view key, const std::string& value) {
    canon.append(key).append("=").append(value).append(";");
  };
  put("model", std::string(to_string(config.model)));
  put("mu", text::format_double(config.params.mu));
  put("theta", text::format_double(config.params.theta));
  put("lambda", text::format_double(config.params.lambda));
  put("forgetting", std::string(to_string(config.params.forgetting)));
  put("gamma", text::format_double(config.gamma.value()));
  put("seed", std::to_string(config.seed));
  put("repetitions", std::to_string(config.repetitions));
  put("start", text::format_double(config.start_time));
  std::string times;
  for (Hours t : config.snapshot_times) times += text::format_double(t) + ",";
  put("snapshots", times);
  put("fixed_init", config.fixed_init ? "1" : "0");
  return text::fnv1a64(canon);
}

namespace {

std::size_t agent_count(const InitialState& init) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, NgState>) {
          return s.size();
        } else {
          return s.vectors.size();
        }
      },
      init);
}

void check_events(std::span<const ContactEvent> events, std::size_t agents) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (i > 0 && ev.t < events[i - 1].t) {
      throw SimulationError("events not sorted by time at index " + std::to_string(i));
    }
    if (ev.sender >= agents || ev.receiver >= agents) {
      throw SimulationError("event " + std::to_string(i) +
                            " references an agent without an initial state");
    }
  }
}

}  // namespace

Trajectory run_once(std::span<const ContactEvent> events, const InitialState& init,
                    const SimConfig& config, std::uint32_t run_index) {
  validate(config);
  check_events(events, agent_count(init));

  Trajectory traj;
  traj.seed = config.seed;
  traj.run_index = run_index;
  traj.model = config.model;
  traj.config_hash = config_hash(config);
  traj.snapshots.reserve(config.snapshot_times.size());

  std::size_t next = 0;
  while (next < events.size() && events[next].t < config.start_time) ++next;
  traj.skipped_events = next;

  if (config.model == Model::NamingGame) {
    const auto* ng = std::get_if<NgState>(&init);
    if (ng == nullptr) throw ConfigError("naming game run needs a discrete initial state");
    NamingGameRun run(*ng);
    for (const Hours t : config.snapshot_times) {
      for (; next < events.size() && events[next].t <= t; ++next) {
        auto rng = keyed_stream(config.seed, run_index, next, Stream::Events);
        run.apply(events[next], rng);
      }
      traj.snapshots.push_back({t, run.state()});
    }
    return traj;
  }

  const auto* cs = std::get_if<CodingState>(&init);
  if (cs == nullptr) throw ConfigError("CoDiNG run needs a latent initial state");
  CodingState state = *cs;
  for (const Hours t : config.snapshot_times) {
    for (; next < events.size() && events[next].t <= t; ++next) {
      auto rng = keyed_stream(config.seed, run_index, next, Stream::Events);
      coding_apply_event(state, events[next], config.gamma, config.params, rng);
    }
    traj.snapshots.push_back({t, coding_snapshot(state, t, config.gamma, config.params)});
  }
  return traj;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&] {
    for (std::size_t i = cursor++; i < n; i = cursor++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<Trajectory> run_repeated(std::span<const ContactEvent> events,
                                     const InitSampler& sampler, const SimConfig& config,
                                     unsigned threads) {
  validate(config);
  std::vector<Trajectory> out(config.repetitions);
  parallel_for(config.repetitions, threads, [&](std::size_t i) {
    const auto run = static_cast<std::uint32_t>(i);
    const std::string where = "run " + std::to_string(run) + ": ";
    try {
      out[i] = run_once(events, sampler(config.fixed_init ? 0u : run), config, run);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    } catch (const std::exception& e) {
      throw SimulationError(where + e.what());
    }
  });
  return out;
}

void write_trajectories_csv(std::ostream& out, std::span<const Trajectory> runs,
                            const AgentRegistry& agents) {
  out << "run,agent,snapshot_time,opinion\n";
  for (const auto& run : runs) {
    for (const auto& snap : run.snapshots) {
      const std::string t = text::format_double(snap.t);
      for (std::size_t i = 0; i < snap.opinions.size(); ++i) {
        out << run.run_index << ',' << text::csv_field(agents.name(static_cast<AgentIndex>(i)))
            << ',' << t << ',' << to_string(snap.opinions[i]) << '\n';
      }
    }
  }
}

void write_trajectories_json(std::ostream& out, std::span<const Trajectory> runs,
                             const AgentRegistry& agents) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& run : runs) {
    nlohmann::ordered_json r;
    r["run"] = run.run_index;
    r["seed"] = run.seed;
    r["model"] = to_string(run.model);
    r["config_hash"] = text::hex64(run.config_hash);
    r["skipped_events"] = run.skipped_events;
    auto snaps = nlohmann::ordered_json::array();
    for (const auto& snap : run.snapshots) {
      nlohmann::ordered_json s;
      s["t"] = snap.t;
      nlohmann::ordered_json ops = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < snap.opinions.size(); ++i) {
        ops[agents.name(static_cast<AgentIndex>(i))] = to_string(snap.opinions[i]);
      }
      s["opinions"] = std::move(ops);
      snaps.push_back(std::move(s));
    }
    r["snapshots"] = std::move(snaps);
    doc.push_back(std::move(r));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace codingsim
