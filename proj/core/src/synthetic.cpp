#include "codingsim/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace codingsim {

std::string_view to_string(Topology t) noexcept {
  switch (t) {
    case Topology::Complete:
      return "complete";
    case Topology::ErdosRenyi:
      return "er";
    case Topology::BarabasiAlbert:
      break;
  }
  return "ba";
}

std::optional<Topology> parse_topology(std::string_view text) noexcept {
  if (text == "complete") return Topology::Complete;
  if (text == "er") return Topology::ErdosRenyi;
  if (text == "ba") return Topology::BarabasiAlbert;
  return std::nullopt;
}

void validate(const SynthSpec& spec) {
  if (spec.n_agents < 2) throw ConfigError("synthetic population needs at least 2 agents");
  if (!(spec.contacts_per_day >= 0.0) || !std::isfinite(spec.contacts_per_day)) {
    throw ConfigError("contact rate must be a finite value >= 0");
  }
  if (!(spec.horizon_days > 0.0) || !std::isfinite(spec.horizon_days)) {
    throw ConfigError("horizon must be > 0 days");
  }
  if (spec.topology == Topology::ErdosRenyi &&
      !(spec.edge_probability >= 0.0 && spec.edge_probability <= 1.0)) {
    throw ConfigError("edge probability must lie in [0, 1]");
  }
  if (spec.topology == Topology::BarabasiAlbert &&
      (spec.attachment < 1 || spec.attachment >= spec.n_agents)) {
    throw ConfigError("Barabasi-Albert attachment m must satisfy 1 <= m < n");
  }
}

std::vector<std::pair<AgentIndex, AgentIndex>> generate_edges(const SynthSpec& spec) {
  validate(spec);
  const auto n = static_cast<AgentIndex>(spec.n_agents);
  std::vector<std::pair<AgentIndex, AgentIndex>> edges;
  auto rng = keyed_stream(spec.seed, 0, 0, Stream::Topology);
  switch (spec.topology) {
    case Topology::Complete:
    case Topology::ErdosRenyi:
      for (AgentIndex i = 0; i < n; ++i) {
        for (AgentIndex j = i + 1; j < n; ++j) {
          if (spec.topology == Topology::Complete || rng.uniform() < spec.edge_probability) {
            edges.emplace_back(i, j);
          }
        }
      }
      break;
    case Topology::BarabasiAlbert: {
      const auto m = static_cast<AgentIndex>(spec.attachment);
      // Each endpoint appears once per incident edge, so uniform picks from
      // this list are degree-proportional.
      std::vector<AgentIndex> endpoints;
      for (AgentIndex i = 0; i <= m; ++i) {
        for (AgentIndex j = i + 1; j <= m; ++j) {
          edges.emplace_back(i, j);
          endpoints.push_back(i);
          endpoints.push_back(j);
        }
      }
      for (AgentIndex v = m + 1; v < n; ++v) {
        std::set<AgentIndex> targets;
        while (targets.size() < m) targets.insert(endpoints[rng.below(endpoints.size())]);
        for (AgentIndex u : targets) {
          edges.emplace_back(u, v);
          endpoints.push_back(u);
          endpoints.push_back(v);
        }
      }
      std::sort(edges.begin(), edges.end());
      break;
    }
  }
  return edges;
}

EventLog generate_events(const SynthSpec& spec) {
  const auto edges = generate_edges(spec);
  const double horizon_hours = spec.horizon_days * 24.0;
  const double rate_per_hour = spec.contacts_per_day / 24.0;

  std::vector<RawContact> rows;
  if (rate_per_hour > 0.0) {
    std::uint64_t pair = 0;
    for (const auto& [i, j] : edges) {
      for (const auto& [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
        auto rng = keyed_stream(spec.seed, pair++, 0, Stream::Contacts);
        double t = 0.0;
        while (true) {
          t += -std::log1p(-rng.uniform()) / rate_per_hour;
          if (t >= horizon_hours) break;
          rows.push_back({"u" + std::to_string(from), "u" + std::to_string(to),
                          std::floor(t * 3600.0)});
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const RawContact& a, const RawContact& b) {
    return a.seconds < b.seconds;
  });
  return build_event_log(rows);
}

std::vector<SurveyRecord> generate_planted_surveys(const EventLog& log,
                                                   const PlantConfig& config) {
  if (config.wave_times.empty()) throw ConfigError("planting needs at least one wave time");
  if (!std::is_sorted(config.wave_times.begin(), config.wave_times.end())) {
    throw ConfigError("wave times must be sorted");
  }
  const std::size_t n = log.agents.size();
  auto draw = keyed_stream(config.seed, 0, 0, Stream::Planted);
  AgentAnswers wave1(n);
  for (auto& a : wave1) a = static_cast<Answer>(draw.below(3));

  std::vector<SurveyRecord> records;
  records.reserve(n * config.wave_times.size());
  for (std::size_t i = 0; i < n; ++i) {
    records.push_back({static_cast<AgentIndex>(i), 1, config.question, *wave1[i]});
  }
  if (config.wave_times.size() == 1) return records;

  SimConfig sim;
  sim.model = config.model;
  sim.params = config.params;
  sim.gamma = config.gamma;
  sim.seed = config.seed;
  sim.repetitions = 1;
  sim.start_time = config.wave_times.front();
  sim.snapshot_times.assign(config.wave_times.begin() + 1, config.wave_times.end());

  InitialState init;
  if (config.model == Model::Coding) {
    auto rng = init_stream(config.seed, 0);
    init = initialize_coding(wave1, config.gamma, rng, sim.start_time);
  } else {
    init = initialize_ng(wave1);
  }
  const auto traj = run_once(log.events, init, sim, 0);
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const int wave = static_cast<int>(s) + 2;
    for (std::size_t i = 0; i < n; ++i) {
      records.push_back({static_cast<AgentIndex>(i), wave, config.question,
                         to_answer(traj.snapshots[s].opinions[i])});
    }
  }
  return records;
}

}  // namespace codingsim
