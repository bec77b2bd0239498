#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codingsim/coding_model.hpp"
#include "codingsim/naming_game.hpp"
#include "codingsim/rng.hpp"
#include "codingsim/types.hpp"

namespace codingsim {

// ---------------------------------------------------------------------------
// Contact events

enum class TimestampFormat : std::uint8_t { EpochSeconds, Iso8601 };

std::string_view to_string(TimestampFormat f) noexcept;
/// "epoch" or "iso8601".
std::optional<TimestampFormat> parse_timestamp_format(std::string_view text) noexcept;

/// Seconds since the Unix epoch for "YYYY-MM-DD[T| ]hh:mm[:ss[.fff]][Z|+hh:mm]"
/// or a bare date. Returns nullopt on anything else.
std::optional<double> parse_iso8601(std::string_view text);

struct RawContact {
  std::string sender;
  std::string receiver;
  double seconds = 0.0;
};

/// A parsed event stream. Event times are hours since the earliest event;
/// `raw_seconds[i]` keeps the original timestamp of `events[i]`.
struct EventLog {
  AgentRegistry agents;
  std::vector<ContactEvent> events;
  std::vector<double> raw_seconds;
  double origin_seconds = 0.0;
  std::size_t dropped_self_loops = 0;
  std::vector<std::string> warnings;

  /// Converts an absolute timestamp (seconds) to simulation hours.
  Hours to_hours(double seconds) const noexcept {
    return (seconds - origin_seconds) / 3600.0;
  }
};

/// Drops self-loops (with a warning), sorts stably by time and interns agents
/// in order of first appearance in the sorted stream. Agents already in
/// `agents` keep their indices.
EventLog build_event_log(std::span<const RawContact> rows, AgentRegistry agents = {});

/// Reads `sender,receiver,timestamp` rows. A header line is optional and
/// lines starting with '#' are ignored. Throws InputError (with the line
/// number) on an empty file, a wrong field count or a bad timestamp.
EventLog parse_events(std::istream& in,
                      TimestampFormat format = TimestampFormat::EpochSeconds);
EventLog read_events_file(const std::filesystem::path& path,
                          TimestampFormat format = TimestampFormat::EpochSeconds);

/// Writes the log back as epoch-second CSV with a header.
void write_events(std::ostream& out, const EventLog& log);

// ---------------------------------------------------------------------------
// Surveys

struct RawSurveyRow {
  std::string agent;
  int wave = 0;
  std::string question;
  std::string raw;
  std::size_t line = 0;
};

/// Reads `agent,wave,question,raw_answer` rows (header optional).
std::vector<RawSurveyRow> parse_survey_rows(std::istream& in);
std::vector<RawSurveyRow> read_survey_file(const std::filesystem::path& path);

struct SurveyRecord {
  AgentIndex agent = 0;
  int wave = 0;
  std::string question;
  Answer answer = Answer::NotSure;

  friend bool operator==(const SurveyRecord&, const SurveyRecord&) = default;
};

/// How one question's raw answers map onto the ternary scale.
struct AnswerRule {
  enum class Kind : std::uint8_t { Ternary, Categorical, Likert };

  Kind kind = Kind::Ternary;
  std::map<std::string, Answer> categories;  // lower-cased keys
  int points = 7;
  int agree_max = 3;
  int disagree_min = 5;

  std::optional<Answer> map(std::string_view raw) const;

  /// Digits 0, 1, 2 taken as already ternary.
  static AnswerRule ternary();
  /// yes/no/not sure style words plus the ternary digits.
  static AnswerRule yes_no();
  /// 1..agree_max -> agree, disagree_min..points -> disagree, between -> not sure.
  static AnswerRule likert(int points = 7, int agree_max = 3, int disagree_min = 5);
};

/// Per-question answer rules with an optional fallback rule.
class AnswerMapping {
 public:
  /// Fallback rule yes_no(), no per-question overrides.
  static AnswerMapping defaults();

  /// JSON config:
  ///   {"default": {"scale": "ternary"},
  ///    "questions": {"jobguar": {"scale": "likert", "points": 7,
  ///                              "agree_max": 3, "disagree_min": 5},
  ///                  "fswelfare": {"scale": "categorical",
  ///                                "values": {"increase": 0, "decrease": 1,
  ///                                           "kept the same": 2}}}}
  /// Throws ConfigError on malformed configs.
  static AnswerMapping from_json(std::string_view json_text);
  static AnswerMapping load(const std::filesystem::path& path);

  void set_rule(std::string question, AnswerRule rule);
  void set_default(std::optional<AnswerRule> rule);

  /// Rule for `question`, the fallback, or nullptr.
  const AnswerRule* rule_for(std::string_view question) const;

  /// Throws InputError when the question has no rule or `raw` is unmapped.
  Answer map(std::string_view question, std::string_view raw) const;

 private:
  std::map<std::string, AnswerRule, std::less<>> rules_;
  std::optional<AnswerRule> default_;
};

/// Maps raw rows to ternary records, interning survey agents into `agents`.
/// Throws InputError on an unmapped answer or a duplicate
/// (agent, wave, question).
std::vector<SurveyRecord> transform_answers(std::span<const RawSurveyRow> rows,
                                            const AnswerMapping& mapping,
                                            AgentRegistry& agents);

/// Writes records as `agent,wave,question,raw_answer` with ternary digits.
void write_surveys(std::ostream& out, std::span<const SurveyRecord> records,
                   const AgentRegistry& agents);

/// Answers of one question indexed by agent, nullopt where missing.
using AgentAnswers = std::vector<std::optional<Answer>>;

/// wave -> answers of `question` for every agent in [0, n_agents).
std::map<int, AgentAnswers> answers_by_wave(std::span<const SurveyRecord> records,
                                            std::string_view question,
                                            std::size_t n_agents);

/// Sorted distinct question codes.
std::vector<std::string> question_codes(std::span<const SurveyRecord> records);

// ---------------------------------------------------------------------------
// Survey-seeded initialization

/// Sampling bands: a definite answer draws its own channel from
/// [kHighWeight, 1] and the opposite one from [0, kLowWeight]; "not sure"
/// draws both from the open band (kLowWeight, kHighWeight).
inline constexpr double kLowWeight = 0.33;
inline constexpr double kHighWeight = 0.66;

/// Exact probability that one draw from the bands for `answer` exhibits
/// that answer under `gamma`.
double band_acceptance_probability(Answer answer, Gamma gamma);

/// Draws each answered agent's latent vector from its band, resampling until
/// the exhibited opinion under `gamma` matches the answer. Agents without an
/// answer start at (0, 0). All channels are stamped with `t0`. Throws
/// ConfigError when the bands cannot produce a consistent draw.
CodingState initialize_coding(std::span<const std::optional<Answer>> wave1, Gamma gamma,
                              SplitMix64& rng, Hours t0 = 0.0);

/// Agree -> A, disagree -> B, not sure or missing -> AB.
NgState initialize_ng(std::span<const std::optional<Answer>> wave1);

/// Stream used for the initial state of run `init_index`.
inline SplitMix64 init_stream(std::uint64_t seed, std::uint64_t init_index) noexcept {
  return keyed_stream(seed, init_index, 0, Stream::Init);
}

}  // namespace codingsim
