#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "codingsim/data_io.hpp"
#include "codingsim/evaluation.hpp"
#include "codingsim/memory_kernel.hpp"
#include "codingsim/sim_engine.hpp"
#include "codingsim/synthetic.hpp"

#ifndef CODINGSIM_VERSION
#define CODINGSIM_VERSION "0.0.0"
#endif

namespace codingsim::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr std::string_view kManifestName = "manifest.json";
constexpr std::string_view kDefaultOutDir = "codingsim-out";
constexpr std::string_view kOutDirEnv = "CODINGSIM_OUT_DIR";

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_numbers(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : ",") + num(x);
  return s;
}

std::optional<double> whole_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string digest(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  const auto res = std::to_chars(buf, buf + 16, h, 16);
  std::string hex(buf, res.ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

class Progress {
 public:
  explicit Progress(std::ostream& out) : out_(out) {}

  void emit(const ojson& j) {
    out_ << j.dump() << '\n';
    out_.flush();
  }

 private:
  std::ostream& out_;
};

// ---------------------------------------------------------------------------
// Option sets

struct ParamOpts {
  double mu = MemoryParams{}.mu;
  double theta = MemoryParams{}.theta;
  double lambda = MemoryParams{}.lambda;
  std::uint64_t seed = 0;

  MemoryParams params() const {
    MemoryParams p{mu, theta, lambda, Forgetting::Exponential};
    validate(p);
    return p;
  }

  void add(CLI::App* app) {
    app->add_option("--mu", mu, "Peak trace weight")->capture_default_str();
    app->add_option("--theta", theta, "Forgetting threshold")->capture_default_str();
    app->add_option("--lambda", lambda, "Decay rate per hour")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
  }

  void canonical(std::vector<std::string>& argv) const {
    argv.insert(argv.end(), {"--mu", num(mu), "--theta", num(theta), "--lambda", num(lambda),
                             "--seed", std::to_string(seed)});
  }
};

struct DataOpts {
  std::string events;
  std::string surveys;
  std::string mapping;
  std::string time_format = "epoch";
  std::vector<std::string> questions;
  std::vector<std::string> waves;

  void add(CLI::App* app) {
    app->add_option("--events", events, "Contact event CSV (sender,receiver,timestamp)")
        ->required();
    app->add_option("--surveys", surveys, "Survey CSV (agent,wave,question,raw_answer)")
        ->required();
    app->add_option("--mapping", mapping, "Answer mapping JSON");
    app->add_option("--time-format", time_format, "Event timestamp format")
        ->check(CLI::IsMember({"epoch", "iso8601"}))
        ->capture_default_str();
    app->add_option("--question", questions, "Survey question code (repeatable)");
    app->add_option("--waves", waves,
                    "Collection time of waves 1,2,...: hours since the first event or ISO-8601")
        ->delimiter(',')
        ->required();
  }
};

struct RunOpts {
  std::uint32_t reps = 10;
  unsigned threads = 1;
  bool fixed_init = false;
  std::string format = "csv";

  void add(CLI::App* app) {
    app->add_option("--reps", reps, "Repetitions per configuration")->capture_default_str();
    app->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    app->add_flag("--fixed-init", fixed_init, "Reuse one initial state for every repetition");
    app->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
  }

  bool csv() const { return format != "json"; }
  bool json() const { return format != "csv"; }
};

// Loaded event log plus mapped surveys over one shared agent registry.
struct Dataset {
  EventLog log;
  AgentRegistry agents;
  std::vector<SurveyRecord> surveys;
  std::vector<Hours> wave_times;
  ojson inputs = ojson::array();
  std::vector<std::string> argv;  // canonical data flags
};

ojson input_entry(std::string_view role, const fs::path& path) {
  const auto bytes = read_bytes(path);
  return ojson{{"role", role}, {"path", path.string()}, {"bytes", bytes.size()},
               {"fnv1a64", digest(bytes)}};
}

std::vector<Hours> resolve_waves(const std::vector<std::string>& raw, const EventLog& log) {
  std::vector<Hours> out;
  for (const auto& item : raw) {
    if (auto h = whole_double(item)) {
      out.push_back(*h);
    } else if (auto s = parse_iso8601(item)) {
      out.push_back(log.to_hours(*s));
    } else {
      throw ConfigError("bad wave time '" + item + "' (hours or ISO-8601 expected)");
    }
  }
  if (out.empty()) throw ConfigError("at least one wave time is required");
  if (!std::is_sorted(out.begin(), out.end())) {
    throw ConfigError("wave times must not decrease with the wave number");
  }
  return out;
}

Dataset load_dataset(const DataOpts& opts, Progress& progress, std::ostream& err) {
  Dataset d;
  const auto format = parse_timestamp_format(opts.time_format);
  const fs::path events = fs::absolute(opts.events);
  const fs::path surveys = fs::absolute(opts.surveys);
  d.log = read_events_file(events, *format);
  for (const auto& w : d.log.warnings) {
    err << "warning: " << w << '\n';
    progress.emit({{"event", "warning"}, {"message", w}});
  }
  d.agents = d.log.agents;
  AnswerMapping mapping = AnswerMapping::defaults();
  std::optional<fs::path> mapping_path;
  if (!opts.mapping.empty()) {
    mapping_path = fs::absolute(opts.mapping);
    mapping = AnswerMapping::load(*mapping_path);
  }
  const auto rows = read_survey_file(surveys);
  d.surveys = transform_answers(rows, mapping, d.agents);
  d.wave_times = resolve_waves(opts.waves, d.log);

  d.inputs.push_back(input_entry("events", events));
  d.inputs.push_back(input_entry("surveys", surveys));
  d.argv = {"--events", events.string(), "--time-format", opts.time_format, "--surveys",
            surveys.string()};
  if (mapping_path) {
    d.inputs.push_back(input_entry("mapping", *mapping_path));
    d.argv.insert(d.argv.end(), {"--mapping", mapping_path->string()});
  }
  d.argv.insert(d.argv.end(), {"--waves", join_numbers(d.wave_times)});
  return d;
}

std::vector<std::string> pick_questions(const DataOpts& opts, const Dataset& d) {
  const auto present = question_codes(d.surveys);
  if (opts.questions.empty()) return present;
  for (const auto& q : opts.questions) {
    if (!std::binary_search(present.begin(), present.end(), q)) {
      throw ConfigError("question '" + q + "' does not occur in the surveys");
    }
  }
  return opts.questions;
}

ojson params_json(const MemoryParams& p) {
  return ojson{{"mu", p.mu},
               {"theta", p.theta},
               {"lambda", p.lambda},
               {"forgetting", to_string(p.forgetting)},
               {"trace_lifetime_hours", trace_lifetime(p)}};
}

ojson init_bands_json() {
  return ojson{{"low", kLowWeight}, {"high", kHighWeight}};
}

// What a command produced: files to write plus the manifest body.
struct Result {
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> argv;
  ojson config = ojson::object();
  ojson constants = ojson::object();
  ojson inputs = ojson::array();
  std::string summary;
};

// ---------------------------------------------------------------------------
// Commands

struct SimulateCmd {
  DataOpts data;
  ParamOpts params;
  RunOpts run;
  std::string model = "coding";
  double gamma = 0.25;

  void add(CLI::App* app) {
    app->add_option("--model", model, "Model to run")
        ->check(CLI::IsMember({"ng", "coding"}))
        ->capture_default_str();
    app->add_option("--gamma", gamma, "Discretization threshold")->capture_default_str();
    data.add(app);
    params.add(app);
    run.add(app);
  }

  Result execute(Progress& progress, std::ostream& err) const {
    const MemoryParams p = params.params();
    const Gamma g(gamma);
    Dataset d = load_dataset(data, progress, err);
    const auto questions = pick_questions(data, d);
    if (questions.size() != 1) {
      throw ConfigError("simulate needs exactly one --question (the surveys contain " +
                        std::to_string(questions.size()) + ")");
    }
    const std::string& question = questions.front();
    auto answers = answers_by_wave(d.surveys, question, d.agents.size());
    const auto w1 = answers.find(1);
    if (w1 == answers.end()) {
      throw ConfigError("question '" + question + "' has no wave-1 answers");
    }
    const AgentAnswers wave1 = w1->second;

    SimConfig sim;
    sim.model = *parse_model(model);
    sim.params = p;
    sim.gamma = g;
    sim.seed = params.seed;
    sim.repetitions = run.reps;
    sim.start_time = d.wave_times.front();
    sim.fixed_init = run.fixed_init;
    if (d.wave_times.size() > 1) {
      sim.snapshot_times.assign(d.wave_times.begin() + 1, d.wave_times.end());
    } else {
      sim.snapshot_times = {sim.start_time};
    }
    validate(sim);

    InitSampler sampler;
    if (sim.model == Model::Coding) {
      sampler = [&](std::uint32_t k) -> InitialState {
        auto rng = init_stream(sim.seed, k);
        return initialize_coding(wave1, g, rng, sim.start_time);
      };
    } else {
      sampler = [&](std::uint32_t) -> InitialState { return initialize_ng(wave1); };
    }
    const auto runs = run_repeated(d.log.events, sampler, sim, run.threads);
    progress.emit({{"event", "runs_done"}, {"model", model}, {"runs", runs.size()}});

    Result r;
    if (run.csv()) {
      std::ostringstream s;
      write_trajectories_csv(s, runs, d.agents);
      r.files.emplace_back("trajectories.csv", s.str());
    }
    if (run.json()) {
      std::ostringstream s;
      write_trajectories_json(s, runs, d.agents);
      r.files.emplace_back("trajectories.json", s.str());
    }

    r.argv = {"simulate", "--model", model, "--gamma", num(gamma), "--question", question};
    r.argv.insert(r.argv.end(), d.argv.begin(), d.argv.end());
    params.canonical(r.argv);
    r.argv.insert(r.argv.end(), {"--reps", std::to_string(run.reps), "--threads",
                                 std::to_string(run.threads), "--format", run.format});
    if (run.fixed_init) r.argv.push_back("--fixed-init");

    r.config = {{"model", model},
                {"question", question},
                {"gamma", gamma},
                {"start_time_hours", sim.start_time},
                {"snapshot_times_hours", sim.snapshot_times},
                {"fixed_init", run.fixed_init},
                {"config_hash", std::to_string(config_hash(sim))},
                {"agents", d.agents.size()},
                {"events", d.log.events.size()}};
    r.constants = params_json(p);
    r.constants["repetitions"] = run.reps;
    r.constants["seed"] = params.seed;
    r.constants["init_bands"] = init_bands_json();
    r.inputs = d.inputs;
    r.summary = "simulate: " + std::to_string(runs.size()) + " run(s) of " + model + " on " +
                std::to_string(d.log.events.size()) + " events, " +
                std::to_string(d.agents.size()) + " agents";
    return r;
  }
};

struct SweepCmd {
  DataOpts data;
  ParamOpts params;
  RunOpts run;
  std::vector<double> gamma_grid = default_gamma_grid();
  bool no_baseline = false;

  void add(CLI::App* app) {
    app->add_option("--gamma-grid", gamma_grid, "Gamma values to evaluate")
        ->delimiter(',')
        ->capture_default_str();
    app->add_flag("--no-baseline", no_baseline, "Skip the naming-game baseline");
    data.add(app);
    params.add(app);
    run.add(app);
  }

  Result execute(Progress& progress, std::ostream& err) const {
    SweepConfig cfg;
    cfg.params = params.params();
    if (gamma_grid.empty() && no_baseline) throw ConfigError("nothing to sweep");
    for (double g : gamma_grid) (void)Gamma(g);
    cfg.gammas = gamma_grid;
    cfg.seed = params.seed;
    cfg.repetitions = run.reps;
    cfg.fixed_init = run.fixed_init;
    cfg.include_baseline = !no_baseline;
    cfg.threads = run.threads;

    Dataset d = load_dataset(data, progress, err);
    for (std::size_t i = 0; i < d.wave_times.size(); ++i) {
      cfg.wave_times[static_cast<int>(i) + 1] = d.wave_times[i];
    }
    const auto questions = pick_questions(data, d);
    if (questions.empty()) throw ConfigError("the surveys contain no questions");

    const std::size_t cells = questions.size() * (cfg.gammas.size() + (no_baseline ? 0 : 1));
    std::size_t done = 0;
    EvaluationReport report;
    for (const auto& q : questions) {
      report.merge(sweep_gamma(d.log.events, d.surveys, q, d.agents.size(), cfg,
                               [&](Model m, std::optional<double> g) {
                                 ++done;
                                 progress.emit({{"event", "cell"},
                                                {"question", q},
                                                {"model", to_string(m)},
                                                {"gamma", g ? ojson(*g) : ojson(nullptr)},
                                                {"done", done},
                                                {"total", cells}});
                               }));
    }

    Result r;
    if (run.csv()) {
      std::ostringstream s;
      write_report_csv(s, report);
      r.files.emplace_back("report.csv", s.str());
    }
    if (run.json()) {
      std::ostringstream s;
      write_report_json(s, report);
      r.files.emplace_back("report.json", s.str());
    }
    {
      std::ostringstream s;
      write_best_gamma_csv(s, report);
      r.files.emplace_back("best_gamma.csv", s.str());
    }

    r.argv = {"sweep"};
    for (const auto& q : questions) r.argv.insert(r.argv.end(), {"--question", q});
    r.argv.insert(r.argv.end(), d.argv.begin(), d.argv.end());
    if (!gamma_grid.empty()) r.argv.insert(r.argv.end(), {"--gamma-grid", join_numbers(gamma_grid)});
    params.canonical(r.argv);
    r.argv.insert(r.argv.end(), {"--reps", std::to_string(run.reps), "--threads",
                                 std::to_string(run.threads), "--format", run.format});
    if (run.fixed_init) r.argv.push_back("--fixed-init");
    if (no_baseline) r.argv.push_back("--no-baseline");

    ojson waves = ojson::object();
    for (const auto& [w, t] : cfg.wave_times) waves[std::to_string(w)] = t;
    r.config = {{"questions", questions},
                {"wave_times_hours", waves},
                {"include_baseline", !no_baseline},
                {"fixed_init", run.fixed_init},
                {"agents", d.agents.size()},
                {"events", d.log.events.size()},
                {"report_rows", report.rows.size()}};
    r.constants = params_json(cfg.params);
    r.constants["gamma_grid"] = gamma_grid;
    r.constants["repetitions"] = run.reps;
    r.constants["seed"] = params.seed;
    r.constants["averaging"] = {{"headline", "macro"},
                                {"also", {"micro", "weighted"}},
                                {"std", "sample"},
                                {"aggregate", "mean of per-wave means"}};
    r.constants["init_bands"] = init_bands_json();
    r.inputs = d.inputs;

    std::ostringstream s;
    s << "sweep: " << questions.size() << " question(s) x " << gamma_grid.size()
      << " gamma value(s) x " << run.reps << " repetition(s)";
    for (const auto& q : questions) {
      if (auto g = best_gamma(report, q)) {
        const auto* row = report.find(q, Model::Coding, *g, kAggregateWave);
        const auto* base = report.find(q, Model::NamingGame, std::nullopt, kAggregateWave);
        s << "\n  " << q << ": best gamma " << num(*g) << ", macro F1 " << num(row->mean_f1);
        if (base) s << " (naming game " << num(base->mean_f1) << ")";
      }
    }
    r.summary = s.str();
    return r;
  }
};

struct SynthCmd {
  std::size_t agents = 10;
  std::string topology = "complete";
  double p = 0.1;
  std::size_t m = 2;
  double rate = 1.0;
  double days = 30.0;
  ParamOpts params;
  std::string model = "coding";
  double gamma = 0.25;
  std::string question = "planted";
  std::vector<double> waves;

  void add(CLI::App* app) {
    app->add_option("--agents", agents, "Number of agents")->capture_default_str();
    app->add_option("--topology", topology, "Contact graph")
        ->check(CLI::IsMember({"complete", "er", "ba"}))
        ->capture_default_str();
    app->add_option("--p", p, "Erdos-Renyi edge probability")->capture_default_str();
    app->add_option("--m", m, "Barabasi-Albert attachment count")->capture_default_str();
    app->add_option("--rate", rate, "Contacts per directed pair per day")->capture_default_str();
    app->add_option("--days", days, "Horizon in days")->capture_default_str();
    app->add_option("--model", model, "Model that plants the survey answers")
        ->check(CLI::IsMember({"ng", "coding"}))
        ->capture_default_str();
    app->add_option("--gamma", gamma, "Gamma used for planting")->capture_default_str();
    app->add_option("--question", question, "Question code for planted answers")
        ->capture_default_str();
    app->add_option("--waves", waves,
                    "Wave times in hours since the first event (default: 4 evenly spaced)")
        ->delimiter(',');
    params.add(app);
  }

  Result execute(Progress& progress, std::ostream&) const {
    SynthSpec spec;
    spec.n_agents = agents;
    spec.topology = *parse_topology(topology);
    spec.edge_probability = p;
    spec.attachment = m;
    spec.contacts_per_day = rate;
    spec.horizon_days = days;
    spec.seed = params.seed;
    validate(spec);

    PlantConfig plant;
    plant.model = *parse_model(model);
    plant.params = params.params();
    plant.gamma = Gamma(gamma);
    plant.seed = params.seed;
    plant.question = question;
    plant.wave_times = waves;
    if (plant.wave_times.empty()) {
      const double h = days * 24.0;
      plant.wave_times = {0.0, h / 3.0, 2.0 * h / 3.0, h};
    }

    const EventLog log = generate_events(spec);
    progress.emit({{"event", "events_generated"}, {"events", log.events.size()},
                   {"agents", log.agents.size()}});
    const auto surveys = generate_planted_surveys(log, plant);

    Result r;
    {
      std::ostringstream s;
      write_events(s, log);
      r.files.emplace_back("events.csv", s.str());
    }
    {
      std::ostringstream s;
      write_surveys(s, surveys, log.agents);
      r.files.emplace_back("surveys.csv", s.str());
    }
    r.argv = {"synth",        "--agents",   std::to_string(agents), "--topology", topology,
              "--p",          num(p),       "--m",                  std::to_string(m),
              "--rate",       num(rate),    "--days",               num(days),
              "--model",      model,        "--gamma",              num(gamma),
              "--question",   question,     "--waves",              join_numbers(plant.wave_times)};
    params.canonical(r.argv);
    r.config = {{"agents", agents},
                {"topology", topology},
                {"edge_probability", p},
                {"attachment", m},
                {"contacts_per_day", rate},
                {"horizon_days", days},
                {"model", model},
                {"gamma", gamma},
                {"question", question},
                {"wave_times_hours", plant.wave_times},
                {"events", log.events.size()},
                {"active_agents", log.agents.size()}};
    r.constants = params_json(plant.params);
    r.constants["seed"] = params.seed;
    r.constants["init_bands"] = init_bands_json();
    r.summary = "synth: " + std::to_string(log.events.size()) + " events among " +
                std::to_string(log.agents.size()) + " agents; sweep with --waves " +
                join_numbers(plant.wave_times) + " --seed " + std::to_string(params.seed) +
                " --reps 1 to recover the planted answers";
    return r;
  }
};

void finish(const Result& r, std::string_view command, const fs::path& out_dir,
            Progress& progress, std::ostream& err) {
  fs::create_directories(out_dir);
  ojson outputs = ojson::array();
  for (const auto& [name, content] : r.files) {
    write_atomic(out_dir / name, content);
    outputs.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a64", digest(content)}});
    progress.emit({{"event", "wrote"}, {"file", (out_dir / name).string()}});
  }
  ojson manifest;
  manifest["tool"] = "codingsim";
  manifest["version"] = CODINGSIM_VERSION;
  manifest["command"] = command;
  manifest["argv"] = r.argv;
  manifest["config"] = r.config;
  manifest["constants"] = r.constants;
  manifest["inputs"] = r.inputs;
  manifest["outputs"] = std::move(outputs);
  write_atomic(out_dir / kManifestName, manifest.dump(2) + "\n");
  progress.emit({{"event", "wrote"}, {"file", (out_dir / kManifestName).string()}});
  err << r.summary << '\n' << "outputs in " << out_dir.string() << '\n';
}

std::vector<std::string> replay_args(const fs::path& manifest_path) {
  ojson m;
  try {
    m = ojson::parse(read_bytes(manifest_path));
  } catch (const ojson::exception& e) {
    throw InputError("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!m.is_object() || m.value("tool", "") != "codingsim" || !m.contains("argv")) {
    throw InputError("not a codingsim manifest: " + manifest_path.string());
  }
  std::vector<std::string> argv;
  try {
    argv = m.at("argv").get<std::vector<std::string>>();
    for (const auto& in : m.value("inputs", ojson::array())) {
      const fs::path path = in.at("path").get<std::string>();
      const auto bytes = read_bytes(path);
      if (digest(bytes) != in.at("fnv1a64").get<std::string>()) {
        throw InputError("input changed since the manifest was written: " + path.string());
      }
    }
  } catch (const ojson::exception& e) {
    throw InputError("malformed manifest: " + std::string(e.what()));
  }
  if (argv.empty() || argv.front() == "replay") throw InputError("manifest has no command");
  return argv;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-driven opinion dynamics: CoDiNG and naming-game simulation, gamma sweeps "
               "and synthetic fixtures.",
               "codingsim"};
  app.set_version_flag("--version", CODINGSIM_VERSION);
  app.set_config("--config", "", "TOML/INI file with option values (flags take precedence)");
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  std::string out_dir(kDefaultOutDir);
  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")
        ->envname(std::string(kOutDirEnv))
        ->capture_default_str();
  };

  SimulateCmd simulate;
  auto* sim_app = app.add_subcommand("simulate", "Run a model from survey-seeded initial states");
  simulate.add(sim_app);
  add_out(sim_app);

  SweepCmd sweep;
  auto* sweep_app =
      app.add_subcommand("sweep", "Score CoDiNG over a gamma grid plus the naming-game baseline");
  sweep.add(sweep_app);
  add_out(sweep_app);

  SynthCmd synth;
  auto* synth_app = app.add_subcommand("synth", "Generate contact events and planted surveys");
  synth.add(synth_app);
  add_out(synth_app);

  std::string manifest;
  auto* replay_app = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_app->add_option("--manifest", manifest, "manifest.json to replay")->required();
  add_out(replay_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Progress progress(out);
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "replay") {
      auto replayed = replay_args(fs::absolute(manifest));
      progress.emit({{"event", "replay"}, {"manifest", fs::absolute(manifest).string()}});
      replayed.insert(replayed.end(), {"--out", out_dir});
      return run(replayed, out, err);
    }
    progress.emit({{"event", "start"}, {"command", command}});
    Result r;
    if (command == "simulate") r = simulate.execute(progress, err);
    if (command == "sweep") r = sweep.execute(progress, err);
    if (command == "synth") r = synth.execute(progress, err);
    finish(r, command, out_dir, progress, err);
    progress.emit({{"event", "done"}, {"exit_code", kExitOk}});
    return kExitOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    progress.emit({{"event", "error"}, {"exit_code", kExitInput}, {"message", e.what()}});
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << '\n';
    progress.emit({{"event", "error"}, {"exit_code", kExitInput}, {"message", e.what()}});
    return kExitInput;
  } catch (const std::exception& e) {
    // ConfigError, and simulation preconditions the configuration could not satisfy.
    err << "configuration error: " << e.what() << '\n';
    progress.emit({{"event", "error"}, {"exit_code", kExitConfig}, {"message", e.what()}});
    return kExitConfig;
  }
}

}  // namespace codingsim::cli
