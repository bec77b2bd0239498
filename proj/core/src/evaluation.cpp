#include "codingsim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "text.hpp"

namespace codingsim {

// ---------------------------------------------------------------------------
// Confusion matrix and F1

void ConfusionMatrix::add(Answer truth, Answer predicted) noexcept {
  ++cells_[static_cast<int>(truth)][static_cast<int>(predicted)];
}

std::uint64_t ConfusionMatrix::count(Answer truth, Answer predicted) const noexcept {
  return cells_[static_cast<int>(truth)][static_cast<int>(predicted)];
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : cells_) n += std::accumulate(row.begin(), row.end(), std::uint64_t{0});
  return n;
}

double ConfusionMatrix::accuracy() const {
  const auto n = total();
  if (n == 0) throw InputError("accuracy of an empty confusion matrix");
  std::uint64_t hit = 0;
  for (int c = 0; c < 3; ++c) hit += cells_[c][c];
  return static_cast<double>(hit) / static_cast<double>(n);
}

double ConfusionMatrix::f1(Averaging averaging) const {
  const auto n = total();
  if (n == 0) throw InputError("F1 of an empty confusion matrix");
  std::uint64_t tp_all = 0, fp_all = 0, fn_all = 0;
  double macro_sum = 0.0, weighted_sum = 0.0;
  int present = 0;
  std::uint64_t support_sum = 0;
  for (int c = 0; c < 3; ++c) {
    const std::uint64_t tp = cells_[c][c];
    std::uint64_t support = 0, predicted = 0;
    for (int k = 0; k < 3; ++k) {
      support += cells_[c][k];
      predicted += cells_[k][c];
    }
    const std::uint64_t fp = predicted - tp;
    const std::uint64_t fn = support - tp;
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
    if (support == 0 && predicted == 0) continue;
    const double f = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    macro_sum += f;
    ++present;
    weighted_sum += f * static_cast<double>(support);
    support_sum += support;
  }
  switch (averaging) {
    case Averaging::Macro:
      return macro_sum / present;
    case Averaging::Weighted:
      return weighted_sum / static_cast<double>(support_sum);
    case Averaging::Micro:
      break;
  }
  return 2.0 * static_cast<double>(tp_all) / static_cast<double>(2 * tp_all + fp_all + fn_all);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) noexcept {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) cells_[r][c] += other.cells_[r][c];
  }
  return *this;
}

ConfusionMatrix confusion(std::span<const std::optional<Answer>> predicted,
                          std::span<const std::optional<Answer>> truth) {
  if (predicted.size() != truth.size()) {
    throw InputError("prediction and truth cover different populations");
  }
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] && truth[i]) m.add(*truth[i], *predicted[i]);
  }
  return m;
}

double f1_score(std::span<const std::optional<Answer>> predicted,
                std::span<const std::optional<Answer>> truth, Averaging averaging) {
  const auto m = confusion(predicted, truth);
  if (m.total() == 0) throw InputError("no agent is both predicted and surveyed");
  return m.f1(averaging);
}

// ---------------------------------------------------------------------------
// Report

namespace {

// Numeric waves sort first, in numeric order; named summaries after.
auto wave_key(std::string_view wave) {
  const auto n = text::parse_int(wave);
  return std::make_tuple(n ? 0 : 1, n.value_or(0), std::string(wave));
}

auto row_key(const ReportRow& r) {
  return std::make_tuple(r.question, static_cast<int>(r.model), r.gamma.has_value(),
                         r.gamma.value_or(0.0), wave_key(r.wave));
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

Stats stats(std::span<const double> xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

double mean(std::span<const double> xs) { return stats(xs).mean; }

}  // namespace

const ReportRow* EvaluationReport::find(std::string_view question, Model model,
                                        std::optional<double> gamma,
                                        std::string_view wave) const {
  for (const auto& r : rows) {
    if (r.question == question && r.model == model && r.gamma == gamma && r.wave == wave) {
      return &r;
    }
  }
  return nullptr;
}

void EvaluationReport::sort() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return row_key(a) < row_key(b); });
}

void EvaluationReport::merge(const EvaluationReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  sort();
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::vector<ReportRow> score_runs(std::span<const Trajectory> runs, std::span<const int> waves,
                                  const std::map<int, AgentAnswers>& truth,
                                  const AgentAnswers& scored, std::string_view question,
                                  Model model, std::optional<double> gamma) {
  struct PerWave {
    std::vector<double> macro, micro, weighted;
  };
  std::map<int, PerWave> per_wave;
  std::vector<double> agg_macro, agg_micro, agg_weighted;
  std::vector<double> pool_macro, pool_micro, pool_weighted;

  for (const auto& run : runs) {
    if (run.snapshots.size() != waves.size()) {
      throw SimulationError("run " + std::to_string(run.run_index) +
                            " has an unexpected number of snapshots");
    }
    ConfusionMatrix pooled;
    double sum_macro = 0.0, sum_micro = 0.0, sum_weighted = 0.0;
    int counted = 0;
    for (std::size_t s = 0; s < waves.size(); ++s) {
      const auto it = truth.find(waves[s]);
      if (it == truth.end()) continue;
      const auto& answers = it->second;
      AgentAnswers predicted(scored.size());
      AgentAnswers wave_truth(scored.size());
      for (std::size_t i = 0; i < scored.size(); ++i) {
        if (!scored[i] || i >= answers.size() || !answers[i]) continue;
        predicted[i] = to_answer(run.snapshots[s].opinions.at(i));
        wave_truth[i] = answers[i];
      }
      const auto m = confusion(predicted, wave_truth);
      if (m.total() == 0) continue;
      auto& pw = per_wave[waves[s]];
      pw.macro.push_back(m.f1(Averaging::Macro));
      pw.micro.push_back(m.f1(Averaging::Micro));
      pw.weighted.push_back(m.f1(Averaging::Weighted));
      sum_macro += pw.macro.back();
      sum_micro += pw.micro.back();
      sum_weighted += pw.weighted.back();
      ++counted;
      pooled += m;
    }
    if (counted == 0) continue;
    agg_macro.push_back(sum_macro / counted);
    agg_micro.push_back(sum_micro / counted);
    agg_weighted.push_back(sum_weighted / counted);
    pool_macro.push_back(pooled.f1(Averaging::Macro));
    pool_micro.push_back(pooled.f1(Averaging::Micro));
    pool_weighted.push_back(pooled.f1(Averaging::Weighted));
  }

  std::vector<ReportRow> rows;
  const auto emit = [&](std::string wave, const std::vector<double>& macro,
                        const std::vector<double>& micro, const std::vector<double>& weighted) {
    const auto st = stats(macro);
    rows.push_back({std::string(question), model, gamma, std::move(wave), st.mean, st.std,
                    static_cast<std::uint32_t>(macro.size()), mean(micro), mean(weighted)});
  };
  for (const auto& [wave, pw] : per_wave) {
    emit(std::to_string(wave), pw.macro, pw.micro, pw.weighted);
  }
  if (!agg_macro.empty()) {
    emit(std::string(kAggregateWave), agg_macro, agg_micro, agg_weighted);
    emit(std::string(kPooledWave), pool_macro, pool_micro, pool_weighted);
  }
  return rows;
}

EvaluationReport sweep_gamma(std::span<const ContactEvent> events,
                             std::span<const SurveyRecord> surveys, std::string_view question,
                             std::size_t n_agents, const SweepConfig& config,
                             const SweepProgress& progress) {
  validate(config.params);
  if (config.repetitions == 0) throw ConfigError("repetitions must be >= 1");
  const auto answers = answers_by_wave(surveys, question, n_agents);
  const auto w1 = answers.find(1);
  if (w1 == answers.end()) {
    throw ConfigError("question '" + std::string(question) + "' has no wave-1 answers");
  }
  const auto t1 = config.wave_times.find(1);
  if (t1 == config.wave_times.end()) throw ConfigError("no collection time for wave 1");

  std::vector<int> waves;
  std::vector<Hours> times;
  for (const auto& [wave, _] : answers) {
    if (wave == 1) continue;
    const auto t = config.wave_times.find(wave);
    if (t == config.wave_times.end()) {
      throw ConfigError("no collection time for wave " + std::to_string(wave));
    }
    if (t->second < t1->second || (!times.empty() && t->second < times.back())) {
      throw ConfigError("wave collection times must not decrease with the wave number");
    }
    waves.push_back(wave);
    times.push_back(t->second);
  }

  const AgentAnswers& wave1 = w1->second;
  EvaluationReport report;
  const auto run_model = [&](Model model, std::optional<double> gamma_value) {
    SimConfig sim;
    sim.model = model;
    sim.params = config.params;
    sim.gamma = Gamma(gamma_value.value_or(0.0));
    sim.seed = config.seed;
    sim.repetitions = config.repetitions;
    sim.start_time = t1->second;
    sim.snapshot_times = times;
    sim.fixed_init = config.fixed_init;
    InitSampler sampler;
    if (model == Model::Coding) {
      sampler = [&, gamma = sim.gamma](std::uint32_t init_index) -> InitialState {
        auto rng = init_stream(config.seed, init_index);
        return initialize_coding(wave1, gamma, rng, t1->second);
      };
    } else {
      sampler = [&](std::uint32_t) -> InitialState { return initialize_ng(wave1); };
    }
    const auto runs = run_repeated(events, sampler, sim, config.threads);
    auto rows = score_runs(runs, waves, answers, wave1, question, model, gamma_value);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    if (progress) progress(model, gamma_value);
  };

  for (double g : config.gammas) run_model(Model::Coding, g);
  if (config.include_baseline) run_model(Model::NamingGame, std::nullopt);
  report.sort();
  return report;
}

namespace {

template <typename Pred>
std::optional<double> argmax_gamma(const EvaluationReport& report, Pred&& match) {
  std::optional<double> best;
  double best_f1 = -1.0;
  for (const auto& r : report.rows) {
    if (r.model != Model::Coding || !r.gamma || !match(r)) continue;
    if (r.mean_f1 > best_f1 || (r.mean_f1 == best_f1 && *r.gamma < *best)) {
      best = r.gamma;
      best_f1 = r.mean_f1;
    }
  }
  return best;
}

}  // namespace

std::optional<double> best_gamma(const EvaluationReport& report, std::string_view question) {
  return argmax_gamma(report, [&](const ReportRow& r) {
    return r.question == question && r.wave == kAggregateWave;
  });
}

std::map<int, double> best_gamma_per_wave(const EvaluationReport& report,
                                          std::string_view question) {
  std::map<int, double> out;
  for (const auto& r : report.rows) {
    if (r.question != question || r.model != Model::Coding) continue;
    const auto n = text::parse_int(r.wave);
    if (!n || out.contains(static_cast<int>(*n))) continue;
    const auto wave = r.wave;
    if (auto g = argmax_gamma(report, [&](const ReportRow& x) {
          return x.question == question && x.wave == wave;
        })) {
      out.emplace(static_cast<int>(*n), *g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::string_view kReportHeader =
    "question,gamma,wave,model,mean_f1,std,n_runs,mean_micro_f1,mean_weighted_f1";

double need_double(const std::string& s, std::size_t line) {
  if (auto v = text::parse_double(s)) return *v;
  throw InputError("report line " + std::to_string(line) + ": bad number '" + s + "'");
}

}  // namespace

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << text::csv_field(r.question) << ','
        << (r.gamma ? text::format_double(*r.gamma) : std::string()) << ','
        << text::csv_field(r.wave) << ',' << to_string(r.model) << ','
        << text::format_double(r.mean_f1) << ',' << text::format_double(r.std_f1) << ','
        << r.n_runs << ',' << text::format_double(r.mean_micro_f1) << ','
        << text::format_double(r.mean_weighted_f1) << '\n';
  }
}

EvaluationReport read_report_csv(std::istream& in) {
  EvaluationReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (line != kReportHeader) throw InputError("report: unexpected header");
      continue;
    }
    if (text::trim(line).empty()) continue;
    const auto f = text::split_csv(line);
    if (f.size() != 9) {
      throw InputError("report line " + std::to_string(lineno) + ": expected 9 fields");
    }
    ReportRow r;
    r.question = f[0];
    if (!f[1].empty()) r.gamma = need_double(f[1], lineno);
    r.wave = f[2];
    const auto model = parse_model(f[3]);
    if (!model) throw InputError("report line " + std::to_string(lineno) + ": bad model");
    r.model = *model;
    r.mean_f1 = need_double(f[4], lineno);
    r.std_f1 = need_double(f[5], lineno);
    const auto n = text::parse_int(f[6]);
    if (!n || *n < 0) throw InputError("report line " + std::to_string(lineno) + ": bad n_runs");
    r.n_runs = static_cast<std::uint32_t>(*n);
    r.mean_micro_f1 = need_double(f[7], lineno);
    r.mean_weighted_f1 = need_double(f[8], lineno);
    report.rows.push_back(std::move(r));
  }
  if (lineno == 0) throw InputError("report: empty input");
  return report;
}

void write_report_json(std::ostream& out, const EvaluationReport& report) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["question"] = r.question;
    j["gamma"] = r.gamma ? nlohmann::ordered_json(*r.gamma) : nlohmann::ordered_json(nullptr);
    j["wave"] = r.wave;
    j["model"] = to_string(r.model);
    j["mean_f1"] = r.mean_f1;
    j["std"] = r.std_f1;
    j["n_runs"] = r.n_runs;
    j["mean_micro_f1"] = r.mean_micro_f1;
    j["mean_weighted_f1"] = r.mean_weighted_f1;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["columns"] = text::split(kReportHeader, ',');
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

EvaluationReport read_report_json(std::istream& in) {
  EvaluationReport report;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& j : doc.at("rows")) {
      ReportRow r;
      r.question = j.at("question").get<std::string>();
      if (!j.at("gamma").is_null()) r.gamma = j.at("gamma").get<double>();
      r.wave = j.at("wave").get<std::string>();
      const auto model = parse_model(j.at("model").get<std::string>());
      if (!model) throw InputError("report: bad model");
      r.model = *model;
      r.mean_f1 = j.at("mean_f1").get<double>();
      r.std_f1 = j.at("std").get<double>();
      r.n_runs = j.at("n_runs").get<std::uint32_t>();
      r.mean_micro_f1 = j.at("mean_micro_f1").get<double>();
      r.mean_weighted_f1 = j.at("mean_weighted_f1").get<double>();
      report.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return report;
}

void write_best_gamma_csv(std::ostream& out, const EvaluationReport& report) {
  out << "question,scope,wave,best_gamma,mean_f1,baseline_f1\n";
  std::vector<std::string> questions;
  for (const auto& r : report.rows) {
    if (std::find(questions.begin(), questions.end(), r.question) == questions.end()) {
      questions.push_back(r.question);
    }
  }
  const auto line = [&](const std::string& q, std::string_view scope, const std::string& wave,
                        double g) {
    const auto* row = report.find(q, Model::Coding, g, wave);
    const auto* base = report.find(q, Model::NamingGame, std::nullopt, wave);
    out << text::csv_field(q) << ',' << scope << ',' << text::csv_field(wave) << ','
        << text::format_double(g) << ',' << (row ? text::format_double(row->mean_f1) : "")
        << ',' << (base ? text::format_double(base->mean_f1) : "") << '\n';
  };
  for (const auto& q : questions) {
    if (auto g = best_gamma(report, q)) line(q, "aggregate", std::string(kAggregateWave), *g);
    for (const auto& [wave, g] : best_gamma_per_wave(report, q)) {
      line(q, "per_wave", std::to_string(wave), g);
    }
  }
}

}  // namespace codingsim
