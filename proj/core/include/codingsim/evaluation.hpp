#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codingsim/data_io.hpp"
#include "codingsim/sim_engine.hpp"
#include "codingsim/types.hpp"

namespace codingsim {

enum class Averaging : std::uint8_t { Macro, Micro, Weighted };

/// 3x3 confusion matrix over the ternary classes, rows = truth.
class ConfusionMatrix {
 public:
  void add(Answer truth, Answer predicted) noexcept;
  std::uint64_t count(Answer truth, Answer predicted) const noexcept;
  std::uint64_t total() const noexcept;
  double accuracy() const;

  /// Macro averages per-class F1 over classes that occur in the truth or in
  /// the predictions; weighted uses true-class support as weights; micro is
  /// pooled over classes. Throws InputError on an empty matrix.
  double f1(Averaging averaging) const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;

 private:
  std::array<std::array<std::uint64_t, 3>, 3> cells_{};
};

/// Confusion over agents present in both `predicted` and `truth`.
ConfusionMatrix confusion(std::span<const std::optional<Answer>> predicted,
                          std::span<const std::optional<Answer>> truth);

/// Multi-class F1 restricted to agents present in both. Throws InputError
/// when the intersection is empty or the spans differ in length.
double f1_score(std::span<const std::optional<Answer>> predicted,
                std::span<const std::optional<Answer>> truth,
                Averaging averaging = Averaging::Macro);

/// Row labels for wave-independent summaries.
inline constexpr std::string_view kAggregateWave = "aggregate";  // mean of per-wave scores
inline constexpr std::string_view kPooledWave = "pooled";        // one matrix over all waves

struct ReportRow {
  std::string question;
  Model model = Model::Coding;
  std::optional<double> gamma;  // unset for the naming-game baseline
  std::string wave;             // wave number, kAggregateWave or kPooledWave
  double mean_f1 = 0.0;         // macro
  double std_f1 = 0.0;          // sample standard deviation over runs
  std::uint32_t n_runs = 0;
  double mean_micro_f1 = 0.0;
  double mean_weighted_f1 = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct EvaluationReport {
  std::vector<ReportRow> rows;

  const ReportRow* find(std::string_view question, Model model, std::optional<double> gamma,
                        std::string_view wave) const;
  /// Sorts rows by (question, model, gamma, wave) with numeric waves first.
  void sort();
  void merge(const EvaluationReport& other);

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// gamma = 0.1, 0.2, ..., 0.9.
std::vector<double> default_gamma_grid();

struct SweepConfig {
  MemoryParams params{};
  std::vector<double> gammas = default_gamma_grid();
  std::uint64_t seed = 0;
  std::uint32_t repetitions = 10;
  /// Collection time of each survey wave. Wave 1 is the initialization time;
  /// every other answered wave is scored at its time.
  std::map<int, Hours> wave_times;
  bool fixed_init = false;
  bool include_baseline = true;
  unsigned threads = 1;
};

/// Called after each finished sweep cell; gamma is unset for the baseline.
using SweepProgress = std::function<void(Model, std::optional<double> gamma)>;

/// Scores CoDiNG at every gamma, plus the naming-game baseline, against the
/// answers to `question` in waves >= 2. Only agents with a wave-1 answer are
/// scored. Throws ConfigError for missing wave times or wave-1 answers.
EvaluationReport sweep_gamma(std::span<const ContactEvent> events,
                             std::span<const SurveyRecord> surveys, std::string_view question,
                             std::size_t n_agents, const SweepConfig& config,
                             const SweepProgress& progress = {});

/// Scores finished runs against per-wave truth. `waves[i]` names the wave of
/// snapshot i. Rows carry `question`, `model` and `gamma` as given.
std::vector<ReportRow> score_runs(std::span<const Trajectory> runs, std::span<const int> waves,
                                  const std::map<int, AgentAnswers>& truth,
                                  const AgentAnswers& scored, std::string_view question,
                                  Model model, std::optional<double> gamma);

/// Gamma with the highest aggregate CoDiNG F1 for `question`; ties go to the
/// smaller gamma.
std::optional<double> best_gamma(const EvaluationReport& report, std::string_view question);

/// Best gamma for each scored wave, same tie rule.
std::map<int, double> best_gamma_per_wave(const EvaluationReport& report,
                                          std::string_view question);

/// CSV columns:
/// question,gamma,wave,model,mean_f1,std,n_runs,mean_micro_f1,mean_weighted_f1
void write_report_csv(std::ostream& out, const EvaluationReport& report);
EvaluationReport read_report_csv(std::istream& in);

void write_report_json(std::ostream& out, const EvaluationReport& report);
EvaluationReport read_report_json(std::istream& in);

/// Best-gamma table: question,scope,wave,best_gamma,mean_f1,baseline_f1.
void write_best_gamma_csv(std::ostream& out, const EvaluationReport& report);

}  // namespace codingsim
