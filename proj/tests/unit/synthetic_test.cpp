#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "codingsim/evaluation.hpp"
#include "codingsim/synthetic.hpp"

namespace codingsim {
namespace {

TEST(SynthEdgesTest, Complete) {
  SynthSpec s;
  s.n_agents = 5;
  const auto e = generate_edges(s);
  EXPECT_EQ(e.size(), 10u);
  EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
}

TEST(SynthEdgesTest, ErdosRenyiDensity) {
  SynthSpec s;
  s.n_agents = 200;
  s.topology = Topology::ErdosRenyi;
  s.edge_probability = 0.1;
  const auto e = generate_edges(s);
  const double pairs = 200.0 * 199.0 / 2.0;
  EXPECT_NEAR(e.size() / pairs, 0.1, 0.01);
  for (const auto& [i, j] : e) EXPECT_LT(i, j);
}

TEST(SynthEdgesTest, BarabasiAlbertShape) {
  SynthSpec s;
  s.n_agents = 100;
  s.topology = Topology::BarabasiAlbert;
  s.attachment = 3;
  const auto e = generate_edges(s);
  // Complete core of m+1 nodes, then m edges per added node.
  EXPECT_EQ(e.size(), 6u + 96u * 3u);
  std::set<std::pair<AgentIndex, AgentIndex>> unique(e.begin(), e.end());
  EXPECT_EQ(unique.size(), e.size());
  for (const auto& [i, j] : e) EXPECT_LT(i, j);
}

TEST(SynthEdgesTest, InvalidSpecs) {
  SynthSpec s;
  s.n_agents = 1;
  EXPECT_THROW(generate_edges(s), ConfigError);
  s = {};
  s.topology = Topology::BarabasiAlbert;
  s.attachment = 10;
  EXPECT_THROW(generate_edges(s), ConfigError);
  s = {};
  s.topology = Topology::ErdosRenyi;
  s.edge_probability = 1.5;
  EXPECT_THROW(generate_edges(s), ConfigError);
  s = {};
  s.contacts_per_day = -1.0;
  EXPECT_THROW(generate_events(s), ConfigError);
}

TEST(SynthEventsTest, ZeroRateIsEmpty) {
  SynthSpec s;
  s.contacts_per_day = 0.0;
  const auto log = generate_events(s);
  EXPECT_TRUE(log.events.empty());
  EXPECT_EQ(log.agents.size(), 0u);
}

TEST(SynthEventsTest, PoissonCountOnPair) {
  // Two agents, one edge, two directions: expected 2 * rate * days contacts.
  SynthSpec s;
  s.n_agents = 2;
  s.contacts_per_day = 3.0;
  s.horizon_days = 50.0;
  double total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    s.seed = seed;
    total += static_cast<double>(generate_events(s).events.size());
  }
  EXPECT_NEAR(total / 100.0, 2.0 * 3.0 * 50.0, 0.05 * 300.0);
}

TEST(SynthEventsTest, DeterministicAndSorted) {
  SynthSpec s;
  s.n_agents = 12;
  s.topology = Topology::ErdosRenyi;
  s.edge_probability = 0.4;
  s.seed = 77;
  const auto a = generate_events(s);
  const auto b = generate_events(s);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.agents, b.agents);
  for (std::size_t i = 1; i < a.events.size(); ++i) EXPECT_LE(a.events[i - 1].t, a.events[i].t);
  for (double sec : a.raw_seconds) EXPECT_EQ(sec, std::floor(sec));
  s.seed = 78;
  EXPECT_NE(generate_events(s).events, a.events);
}

TEST(SynthEventsTest, WrittenFileParsesBackIdentically) {
  SynthSpec s;
  s.n_agents = 20;
  s.topology = Topology::BarabasiAlbert;
  s.seed = 5;
  const auto log = generate_events(s);
  std::ostringstream out;
  write_events(out, log);
  std::istringstream in(out.str());
  const auto back = parse_events(in);
  EXPECT_EQ(back.events, log.events);
  EXPECT_EQ(back.agents, log.agents);
  EXPECT_EQ(back.raw_seconds, log.raw_seconds);
}

TEST(SynthTopologyTest, Labels) {
  for (auto t : {Topology::Complete, Topology::ErdosRenyi, Topology::BarabasiAlbert}) {
    EXPECT_EQ(parse_topology(to_string(t)), t);
  }
  EXPECT_FALSE(parse_topology("ring"));
}

struct Planted {
  EventLog log;
  PlantConfig plant;
  std::vector<SurveyRecord> surveys;
};

Planted planted(std::uint64_t seed, double gamma) {
  Planted p;
  SynthSpec s;
  s.n_agents = 30;
  s.topology = Topology::ErdosRenyi;
  s.edge_probability = 0.3;
  s.contacts_per_day = 0.5;
  s.horizon_days = 30.0;
  s.seed = seed;
  p.log = generate_events(s);
  p.plant.gamma = Gamma(gamma);
  p.plant.seed = seed;
  p.plant.wave_times = {24.0, 240.0, 480.0, 700.0};
  p.surveys = generate_planted_surveys(p.log, p.plant);
  return p;
}

TEST(PlantedSurveysTest, Layout) {
  const auto p = planted(3, 0.25);
  const std::size_t n = p.log.agents.size();
  EXPECT_EQ(p.surveys.size(), 4 * n);
  const auto by_wave = answers_by_wave(p.surveys, "planted", n);
  EXPECT_EQ(by_wave.size(), 4u);
}

TEST(PlantedSurveysTest, SweepRecoversGeneratingGamma) {
  const auto p = planted(3, 0.3);
  SweepConfig cfg;
  cfg.gammas = {0.3};
  cfg.repetitions = 1;
  cfg.seed = 3;
  for (std::size_t w = 0; w < p.plant.wave_times.size(); ++w) {
    cfg.wave_times[static_cast<int>(w) + 1] = p.plant.wave_times[w];
  }
  const auto rep = sweep_gamma(p.log.events, p.surveys, "planted", p.log.agents.size(), cfg);
  const auto* coding = rep.find("planted", Model::Coding, 0.3, kAggregateWave);
  const auto* ng = rep.find("planted", Model::NamingGame, std::nullopt, kAggregateWave);
  ASSERT_TRUE(coding && ng);
  EXPECT_EQ(coding->mean_f1, 1.0);
  EXPECT_LT(ng->mean_f1, 1.0);
}

TEST(PlantedSurveysTest, NamingGamePlantRecoveredByBaseline) {
  auto p = planted(4, 0.3);
  p.plant.model = Model::NamingGame;
  p.surveys = generate_planted_surveys(p.log, p.plant);
  SweepConfig cfg;
  cfg.gammas = {};
  cfg.repetitions = 1;
  cfg.seed = 4;
  for (std::size_t w = 0; w < p.plant.wave_times.size(); ++w) {
    cfg.wave_times[static_cast<int>(w) + 1] = p.plant.wave_times[w];
  }
  const auto rep = sweep_gamma(p.log.events, p.surveys, "planted", p.log.agents.size(), cfg);
  EXPECT_EQ(rep.find("planted", Model::NamingGame, std::nullopt, kAggregateWave)->mean_f1, 1.0);
}

TEST(PlantedSurveysTest, Errors) {
  SynthSpec s;
  const auto log = generate_events(s);
  PlantConfig pc;
  EXPECT_THROW(generate_planted_surveys(log, pc), ConfigError);
  pc.wave_times = {5.0, 1.0};
  EXPECT_THROW(generate_planted_surveys(log, pc), ConfigError);
}

}  // namespace
}  // namespace codingsim
