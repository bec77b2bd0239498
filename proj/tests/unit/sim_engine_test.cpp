#include <gtest/gtest.h>

#include <mutex>
#include <sstream>
#include <vector>

#include "codingsim/memory_kernel.hpp"
#include "codingsim/sim_engine.hpp"
#include "oracles.hpp"

namespace codingsim {
namespace {

std::vector<ContactEvent> random_events(std::uint64_t seed, std::size_t agents, std::size_t n,
                                        double mean_gap) {
  SplitMix64 rng(seed);
  std::vector<ContactEvent> ev;
  Hours t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += rng.uniform(0.0, 2.0 * mean_gap);
    const auto s = static_cast<AgentIndex>(rng.below(agents));
    auto r = static_cast<AgentIndex>(rng.below(agents - 1));
    if (r >= s) ++r;
    ev.push_back({s, r, t});
  }
  return ev;
}

CodingState random_coding(std::uint64_t seed, std::size_t agents) {
  SplitMix64 rng(seed);
  CodingState s;
  for (std::size_t i = 0; i < agents; ++i) s.vectors.push_back({rng.uniform(), rng.uniform(), 0, 0});
  return s;
}

SimConfig coding_config(std::vector<Hours> snaps, std::uint64_t seed = 1) {
  SimConfig c;
  c.model = Model::Coding;
  c.seed = seed;
  c.snapshot_times = std::move(snaps);
  return c;
}

TEST(RunOnceTest, SameInputsSameTrajectory) {
  const auto ev = random_events(3, 12, 2000, 0.5);
  const auto init = random_coding(4, 12);
  const auto cfg = coding_config({100.0, 500.0, 1000.0});
  const auto a = run_once(ev, init, cfg, 2);
  const auto b = run_once(ev, init, cfg, 2);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, run_once(ev, init, cfg, 3));
}

TEST(RunOnceTest, NoEventsKeepsInitialOpinions) {
  CodingState init{{{0.9, 0.1, 0, 0}, {0.1, 0.9, 0, 0}, {0.5, 0.5, 0, 0}}};
  auto cfg = coding_config({0.0});
  const auto tr = run_once({}, init, cfg, 0);
  ASSERT_EQ(tr.snapshots.size(), 1u);
  EXPECT_EQ(tr.snapshots[0].opinions, (std::vector<Opinion>{Opinion::A, Opinion::B, Opinion::AB}));
  EXPECT_EQ(tr.skipped_events, 0u);
}

TEST(RunOnceTest, AgreesWithNamingGameDriver) {
  const auto ev = random_events(5, 10, 3000, 1.0);
  NgState init(10, Opinion::AB);
  init[0] = Opinion::A;
  init[1] = Opinion::B;
  SimConfig cfg;
  cfg.model = Model::NamingGame;
  cfg.seed = 17;
  cfg.snapshot_times = {50.0, 800.0, 6000.0};
  const auto tr = run_once(ev, init, cfg, 4);
  const auto direct = ng_run(ev, init, 17, 4, cfg.snapshot_times);
  ASSERT_EQ(tr.snapshots.size(), direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) EXPECT_EQ(tr.snapshots[i].opinions, direct[i]);
}

TEST(RunOnceTest, LazyDecayMatchesClosedForm) {
  // With a fixed token source every channel follows the closed form exactly.
  const auto ev = random_events(8, 6, 400, 3.0);
  const MemoryParams p{};
  CodingState state{std::vector<OpinionVector>(6)};
  std::vector<std::vector<double>> times_a(6), times_b(6);
  SplitMix64 tok(9);
  for (const auto& e : ev) {
    const Token t = tok.coin() ? Token::A : Token::B;
    coding_apply_event(state, e, t, p);
    (t == Token::A ? times_a : times_b)[e.receiver].push_back(e.t);
  }
  const Hours q = ev.back().t + 5.0;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto lw = latent_at(state.vectors[i], q, p);
    EXPECT_NEAR(lw.a, oracle::channel_closed_form(times_a[i], q, p), 1e-12);
    EXPECT_NEAR(lw.b, oracle::channel_closed_form(times_b[i], q, p), 1e-12);
  }
}

TEST(RunOnceTest, MatchesEagerReplay) {
  const auto ev = random_events(12, 8, 1500, 0.7);
  const auto init = random_coding(13, 8);
  std::vector<double> a, b;
  for (const auto& v : init.vectors) {
    a.push_back(decayed_weight(v.a, 0.0, 0.0, MemoryParams{}));
    b.push_back(decayed_weight(v.b, 0.0, 0.0, MemoryParams{}));
  }
  const std::vector<Hours> snaps{10.0, 200.0, 700.0, 1100.0};
  auto cfg = coding_config(snaps, 21);
  const auto tr = run_once(ev, init, cfg, 0);
  const auto eager = oracle::eager_coding(ev, a, b, cfg.gamma.value(), cfg.params, 21, 0, snaps);
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    EXPECT_EQ(tr.snapshots[s].opinions, eager.opinions[s]) << "snapshot " << s;
  }
}

TEST(RunOnceTest, EventsBeforeStartSkipped) {
  const std::vector<ContactEvent> ev{{0, 1, 1.0}, {0, 1, 2.0}, {0, 1, 5.0}};
  CodingState init{{{0.9, 0.1, 3.0, 3.0}, {0.0, 0.0, 3.0, 3.0}}};
  auto cfg = coding_config({6.0});
  cfg.start_time = 3.0;
  const auto tr = run_once(ev, init, cfg, 0);
  EXPECT_EQ(tr.skipped_events, 2u);
}

TEST(RunOnceTest, SnapshotIncludesEventsAtItsTime) {
  const std::vector<ContactEvent> ev{{0, 1, 5.0}};
  CodingState init{{{0.9, 0.1, 0, 0}, {0.0, 0.0, 0, 0}}};
  const auto tr = run_once(ev, init, coding_config({5.0}), 0);
  EXPECT_EQ(tr.snapshots[0].opinions[1], Opinion::A);
}

TEST(RunOnceTest, Errors) {
  CodingState init{{{0.9, 0.1, 0, 0}, {0.0, 0.0, 0, 0}}};
  const std::vector<ContactEvent> unsorted{{0, 1, 5.0}, {1, 0, 4.0}};
  EXPECT_THROW(run_once(unsorted, init, coding_config({10.0}), 0), SimulationError);
  const std::vector<ContactEvent> unknown{{0, 7, 5.0}};
  EXPECT_THROW(run_once(unknown, init, coding_config({10.0}), 0), SimulationError);
  EXPECT_THROW(run_once({}, init, coding_config({10.0, 5.0}), 0), ConfigError);
  auto cfg = coding_config({1.0});
  cfg.repetitions = 0;
  EXPECT_THROW(run_once({}, init, cfg, 0), ConfigError);
  cfg = coding_config({1.0});
  cfg.params.theta = cfg.params.mu;
  EXPECT_THROW(run_once({}, init, cfg, 0), ConfigError);
  cfg = coding_config({1.0});
  cfg.model = Model::NamingGame;
  EXPECT_THROW(run_once({}, init, cfg, 0), ConfigError);
}

TEST(RunRepeatedTest, SingleRepetitionEqualsRunOnce) {
  const auto ev = random_events(30, 9, 800, 1.0);
  auto cfg = coding_config({100.0, 700.0}, 44);
  cfg.repetitions = 1;
  const auto init = random_coding(31, 9);
  const auto runs = run_repeated(ev, [&](std::uint32_t) { return InitialState(init); }, cfg);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0], run_once(ev, init, cfg, 0));
}

TEST(RunRepeatedTest, ThreadCountDoesNotChangeResults) {
  const auto ev = random_events(32, 15, 3000, 0.3);
  auto cfg = coding_config({100.0, 500.0, 900.0}, 5);
  cfg.repetitions = 12;
  const InitSampler sampler = [](std::uint32_t k) { return InitialState(random_coding(100 + k, 15)); };
  const auto seq = run_repeated(ev, sampler, cfg, 1);
  const auto par = run_repeated(ev, sampler, cfg, 4);
  EXPECT_EQ(seq, par);
  for (std::uint32_t i = 0; i < seq.size(); ++i) EXPECT_EQ(seq[i].run_index, i);
}

TEST(RunRepeatedTest, FixedInitUsesIndexZero) {
  auto cfg = coding_config({1.0});
  cfg.repetitions = 3;
  cfg.fixed_init = true;
  std::vector<std::uint32_t> seen;
  std::mutex m;
  run_repeated({}, [&](std::uint32_t k) {
    std::lock_guard lock(m);
    seen.push_back(k);
    return InitialState(random_coding(1, 2));
  }, cfg, 2);
  for (auto k : seen) EXPECT_EQ(k, 0u);
}

TEST(RunRepeatedTest, FailureNamesRunAndKeepsType) {
  auto cfg = coding_config({1.0});
  cfg.repetitions = 4;
  try {
    run_repeated({}, [](std::uint32_t k) -> InitialState {
      if (k == 2) throw SimulationError("boom");
      return random_coding(1, 2);
    }, cfg, 3);
    FAIL() << "expected a throw";
  } catch (const SimulationError& e) {
    EXPECT_NE(std::string(e.what()).find("run 2"), std::string::npos) << e.what();
  }
}

TEST(ConfigHashTest, SensitiveToEveryField) {
  const auto base = coding_config({1.0, 2.0});
  const auto h = config_hash(base);
  EXPECT_EQ(h, config_hash(coding_config({1.0, 2.0})));
  auto c = base;
  c.seed = 2;
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.gamma = Gamma(0.3);
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.params.lambda = 0.01;
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.snapshot_times.push_back(3.0);
  EXPECT_NE(config_hash(c), h);
  c = base;
  c.fixed_init = true;
  EXPECT_NE(config_hash(c), h);
}

TEST(TrajectoryOutputTest, CsvLayout) {
  AgentRegistry reg;
  reg.intern("x");
  reg.intern("y");
  Trajectory t;
  t.snapshots = {{2.5, {Opinion::A, Opinion::AB}}};
  std::ostringstream out;
  write_trajectories_csv(out, std::span(&t, 1), reg);
  EXPECT_EQ(out.str(), "run,agent,snapshot_time,opinion\n0,x,2.5,A\n0,y,2.5,AB\n");
}

TEST(TrajectoryOutputTest, JsonIsParseable) {
  AgentRegistry reg;
  reg.intern("x");
  Trajectory t;
  t.seed = 9;
  t.snapshots = {{1.0, {Opinion::B}}};
  std::ostringstream out;
  write_trajectories_json(out, std::span(&t, 1), reg);
  EXPECT_NE(out.str().find("\"x\""), std::string::npos);
  EXPECT_NE(out.str().find("\"B\""), std::string::npos);
}

TEST(ModelTest, Labels) {
  EXPECT_EQ(parse_model("ng"), Model::NamingGame);
  EXPECT_EQ(parse_model(to_string(Model::Coding)), Model::Coding);
  EXPECT_FALSE(parse_model("NG"));
}

}  // namespace
}  // namespace codingsim
