#include "codingsim/data_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "text.hpp"

namespace codingsim {

// ---------------------------------------------------------------------------
// Timestamps

std::string_view to_string(TimestampFormat f) noexcept {
  return f == TimestampFormat::EpochSeconds ? "epoch" : "iso8601";
}

std::optional<TimestampFormat> parse_timestamp_format(std::string_view text) noexcept {
  if (text == "epoch") return TimestampFormat::EpochSeconds;
  if (text == "iso8601" || text == "iso") return TimestampFormat::Iso8601;
  return std::nullopt;
}

namespace {

bool take_digits(std::string_view& s, std::size_t n, int& out) {
  if (s.size() < n) return false;
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  s.remove_prefix(n);
  return true;
}

bool take_char(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

}  // namespace

std::optional<double> parse_iso8601(std::string_view s) {
  s = text::trim(s);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!take_digits(s, 4, y) || !take_char(s, '-') || !take_digits(s, 2, mo) ||
      !take_char(s, '-') || !take_digits(s, 2, d)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  double frac = 0.0;
  double offset = 0.0;
  if (!s.empty()) {
    if (!take_char(s, 'T') && !take_char(s, ' ')) return std::nullopt;
    if (!take_digits(s, 2, h) || !take_char(s, ':') || !take_digits(s, 2, mi)) {
      return std::nullopt;
    }
    if (take_char(s, ':')) {
      if (!take_digits(s, 2, sec)) return std::nullopt;
      if (take_char(s, '.')) {
        std::size_t n = 0;
        while (n < s.size() && s[n] >= '0' && s[n] <= '9') ++n;
        if (n == 0) return std::nullopt;
        frac = *text::parse_double("0." + std::string(s.substr(0, n)));
        s.remove_prefix(n);
      }
    }
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
    if (take_char(s, 'Z')) {
    } else if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      const double sign = s.front() == '-' ? -1.0 : 1.0;
      s.remove_prefix(1);
      int oh = 0, om = 0;
      if (!take_digits(s, 2, oh)) return std::nullopt;
      take_char(s, ':');
      if (!s.empty() && !take_digits(s, 2, om)) return std::nullopt;
      offset = sign * (oh * 3600.0 + om * 60.0);
    }
    if (!s.empty()) return std::nullopt;
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec + frac - offset;
}

// ---------------------------------------------------------------------------
// Events

EventLog build_event_log(std::span<const RawContact> rows, AgentRegistry agents) {
  EventLog log;
  log.agents = std::move(agents);
  std::vector<const RawContact*> kept;
  kept.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.sender == row.receiver) {
      ++log.dropped_self_loops;
      continue;
    }
    kept.push_back(&row);
  }
  if (log.dropped_self_loops > 0) {
    log.warnings.push_back("dropped " + std::to_string(log.dropped_self_loops) +
                           " self-loop row(s)");
  }
  // Interning after the sort makes indices independent of the file's row
  // order, so a written log parses back to the same indices.
  std::stable_sort(kept.begin(), kept.end(), [](const RawContact* a, const RawContact* b) {
    return a->seconds < b->seconds;
  });
  log.origin_seconds = kept.empty() ? 0.0 : kept.front()->seconds;
  log.events.reserve(kept.size());
  log.raw_seconds.reserve(kept.size());
  for (const auto* k : kept) {
    const AgentIndex s = log.agents.intern(k->sender);
    const AgentIndex r = log.agents.intern(k->receiver);
    log.events.push_back({s, r, log.to_hours(k->seconds)});
    log.raw_seconds.push_back(k->seconds);
  }
  return log;
}

namespace {

bool is_comment_or_blank(std::string_view line) {
  line = text::trim(line);
  return line.empty() || line.front() == '#';
}

std::string at_line(std::size_t n) { return "line " + std::to_string(n) + ": "; }

}  // namespace

EventLog parse_events(std::istream& in, TimestampFormat format) {
  std::vector<RawContact> rows;
  std::vector<std::string> self_loop_lines;
  std::string line;
  std::size_t lineno = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;
    auto fields = text::split_csv(line);
    const bool header = first_record;
    first_record = false;
    if (fields.size() != 3) {
      throw InputError(at_line(lineno) + "expected 3 fields (sender,receiver,timestamp), got " +
                       std::to_string(fields.size()));
    }
    const auto ts = text::trim(fields[2]);
    const auto seconds = format == TimestampFormat::EpochSeconds ? text::parse_double(ts)
                                                                  : parse_iso8601(ts);
    if (!seconds || !std::isfinite(*seconds)) {
      if (header) continue;
      throw InputError(at_line(lineno) + "unparseable timestamp '" + std::string(ts) + "'");
    }
    RawContact row{std::string(text::trim(fields[0])), std::string(text::trim(fields[1])),
                   *seconds};
    if (row.sender.empty() || row.receiver.empty()) {
      throw InputError(at_line(lineno) + "empty agent id");
    }
    if (row.sender == row.receiver) self_loop_lines.push_back(std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("event file contains no events");
  auto log = build_event_log(rows);
  if (!self_loop_lines.empty()) {
    std::string where;
    for (const auto& l : self_loop_lines) where += (where.empty() ? "" : ",") + l;
    log.warnings.back() += " at line(s) " + where;
  }
  return log;
}

EventLog read_events_file(const std::filesystem::path& path, TimestampFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open event file " + path.string());
  try {
    return parse_events(in, format);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_events(std::ostream& out, const EventLog& log) {
  out << "sender,receiver,timestamp\n";
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    out << text::csv_field(log.agents.name(ev.sender)) << ','
        << text::csv_field(log.agents.name(ev.receiver)) << ','
        << text::format_double(log.raw_seconds[i]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Surveys

std::vector<RawSurveyRow> parse_survey_rows(std::istream& in) {
  std::vector<RawSurveyRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;
    auto fields = text::split_csv(line);
    const bool header = first_record;
    first_record = false;
    if (fields.size() != 4) {
      throw InputError(at_line(lineno) +
                       "expected 4 fields (agent,wave,question,raw_answer), got " +
                       std::to_string(fields.size()));
    }
    const auto wave = text::parse_int(fields[1]);
    if (!wave) {
      if (header) continue;
      throw InputError(at_line(lineno) + "bad wave '" + fields[1] + "'");
    }
    if (*wave < 1) throw InputError(at_line(lineno) + "wave numbers start at 1");
    rows.push_back({std::string(text::trim(fields[0])), static_cast<int>(*wave),
                    std::string(text::trim(fields[2])), std::string(text::trim(fields[3])),
                    lineno});
  }
  if (rows.empty()) throw InputError("survey file contains no records");
  return rows;
}

std::vector<RawSurveyRow> read_survey_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open survey file " + path.string());
  try {
    return parse_survey_rows(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::optional<Answer> AnswerRule::map(std::string_view raw) const {
  const std::string key = text::lower(text::trim(raw));
  switch (kind) {
    case Kind::Ternary: {
      if (key == "0") return Answer::Agree;
      if (key == "1") return Answer::Disagree;
      if (key == "2") return Answer::NotSure;
      return std::nullopt;
    }
    case Kind::Categorical: {
      if (auto it = categories.find(key); it != categories.end()) return it->second;
      return std::nullopt;
    }
    case Kind::Likert: {
      const auto v = text::parse_int(key);
      if (!v || *v < 1 || *v > points) return std::nullopt;
      if (*v <= agree_max) return Answer::Agree;
      if (*v >= disagree_min) return Answer::Disagree;
      return Answer::NotSure;
    }
  }
  return std::nullopt;
}

AnswerRule AnswerRule::ternary() { return AnswerRule{}; }

AnswerRule AnswerRule::yes_no() {
  AnswerRule r;
  r.kind = Kind::Categorical;
  r.categories = {
      {"0", Answer::Agree},          {"1", Answer::Disagree},
      {"2", Answer::NotSure},        {"yes", Answer::Agree},
      {"agree", Answer::Agree},      {"no", Answer::Disagree},
      {"disagree", Answer::Disagree}, {"not sure", Answer::NotSure},
      {"unsure", Answer::NotSure},   {"don't know", Answer::NotSure},
      {"dont know", Answer::NotSure},
  };
  return r;
}

AnswerRule AnswerRule::likert(int points, int agree_max, int disagree_min) {
  if (!(points >= 2 && agree_max >= 1 && agree_max < disagree_min &&
        disagree_min <= points)) {
    throw ConfigError("likert rule needs 1 <= agree_max < disagree_min <= points");
  }
  AnswerRule r;
  r.kind = Kind::Likert;
  r.points = points;
  r.agree_max = agree_max;
  r.disagree_min = disagree_min;
  return r;
}

AnswerMapping AnswerMapping::defaults() {
  AnswerMapping m;
  m.default_ = AnswerRule::yes_no();
  return m;
}

namespace {

Answer answer_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) {
    const auto n = v.get<int>();
    if (n >= 0 && n <= 2) return static_cast<Answer>(n);
  } else if (v.is_string()) {
    const auto s = text::lower(v.get<std::string>());
    if (s == "agree") return Answer::Agree;
    if (s == "disagree") return Answer::Disagree;
    if (s == "not_sure" || s == "not sure") return Answer::NotSure;
  }
  throw ConfigError("answer mapping value must be 0, 1, 2, agree, disagree or not_sure");
}

AnswerRule rule_from_json(const nlohmann::json& j) {
  const auto scale = j.value("scale", std::string("ternary"));
  if (scale == "ternary") return AnswerRule::ternary();
  if (scale == "yes_no") return AnswerRule::yes_no();
  if (scale == "likert") {
    return AnswerRule::likert(j.value("points", 7), j.value("agree_max", 3),
                              j.value("disagree_min", 5));
  }
  if (scale == "categorical") {
    AnswerRule r;
    r.kind = AnswerRule::Kind::Categorical;
    if (!j.contains("values") || !j["values"].is_object()) {
      throw ConfigError("categorical scale needs a 'values' object");
    }
    for (const auto& [raw, v] : j["values"].items()) {
      r.categories[text::lower(text::trim(raw))] = answer_from_json(v);
    }
    return r;
  }
  throw ConfigError("unknown answer scale '" + scale + "'");
}

}  // namespace

AnswerMapping AnswerMapping::from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("answer mapping is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("answer mapping must be a JSON object");
  AnswerMapping m;
  try {
    if (doc.contains("default")) {
      if (!doc["default"].is_null()) m.default_ = rule_from_json(doc["default"]);
    } else {
      m.default_ = AnswerRule::yes_no();
    }
    if (doc.contains("questions")) {
      for (const auto& [q, rule] : doc["questions"].items()) {
        m.rules_.emplace(q, rule_from_json(rule));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed answer mapping: ") + e.what());
  }
  return m;
}

AnswerMapping AnswerMapping::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open answer mapping " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void AnswerMapping::set_rule(std::string question, AnswerRule rule) {
  rules_.insert_or_assign(std::move(question), std::move(rule));
}

void AnswerMapping::set_default(std::optional<AnswerRule> rule) { default_ = std::move(rule); }

const AnswerRule* AnswerMapping::rule_for(std::string_view question) const {
  if (auto it = rules_.find(question); it != rules_.end()) return &it->second;
  return default_ ? &*default_ : nullptr;
}

Answer AnswerMapping::map(std::string_view question, std::string_view raw) const {
  const auto* rule = rule_for(question);
  if (rule == nullptr) {
    throw InputError("no answer mapping for question '" + std::string(question) + "'");
  }
  if (auto a = rule->map(raw)) return *a;
  throw InputError("unmapped answer '" + std::string(raw) + "' for question '" +
                   std::string(question) + "'");
}

std::vector<SurveyRecord> transform_answers(std::span<const RawSurveyRow> rows,
                                            const AnswerMapping& mapping,
                                            AgentRegistry& agents) {
  std::vector<SurveyRecord> out;
  out.reserve(rows.size());
  std::set<std::tuple<AgentIndex, int, std::string>> seen;
  for (const auto& row : rows) {
    Answer answer;
    try {
      answer = mapping.map(row.question, row.raw);
    } catch (const InputError& e) {
      throw InputError(at_line(row.line) + e.what());
    }
    const AgentIndex agent = agents.intern(row.agent);
    if (!seen.emplace(agent, row.wave, row.question).second) {
      throw InputError(at_line(row.line) + "duplicate answer for agent '" + row.agent +
                       "', wave " + std::to_string(row.wave) + ", question '" +
                       row.question + "'");
    }
    out.push_back({agent, row.wave, row.question, answer});
  }
  return out;
}

void write_surveys(std::ostream& out, std::span<const SurveyRecord> records,
                   const AgentRegistry& agents) {
  out << "agent,wave,question,raw_answer\n";
  for (const auto& r : records) {
    out << text::csv_field(agents.name(r.agent)) << ',' << r.wave << ','
        << text::csv_field(r.question) << ',' << static_cast<int>(r.answer) << '\n';
  }
}

std::map<int, AgentAnswers> answers_by_wave(std::span<const SurveyRecord> records,
                                            std::string_view question,
                                            std::size_t n_agents) {
  std::map<int, AgentAnswers> out;
  for (const auto& r : records) {
    if (r.question != question) continue;
    if (r.agent >= n_agents) {
      throw InputError("survey agent index " + std::to_string(r.agent) +
                       " outside the simulated population");
    }
    auto& wave = out[r.wave];
    if (wave.empty()) wave.resize(n_agents);
    wave[r.agent] = r.answer;
  }
  return out;
}

std::vector<std::string> question_codes(std::span<const SurveyRecord> records) {
  std::set<std::string> codes;
  for (const auto& r : records) codes.insert(r.question);
  return {codes.begin(), codes.end()};
}

// ---------------------------------------------------------------------------
// Initialization

namespace {

// Integral over [lo, hi] of clamp(x - shift, 0, width): piecewise linear with
// kinks at shift and shift + width, so the trapezoid rule is exact per piece.
double clamp_ramp_integral(double lo, double hi, double shift, double width) {
  std::vector<double> knots{lo, hi};
  for (double k : {shift, shift + width}) {
    if (k > lo && k < hi) knots.push_back(k);
  }
  std::sort(knots.begin(), knots.end());
  const auto g = [&](double x) { return std::clamp(x - shift, 0.0, width); };
  double area = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    area += 0.5 * (g(knots[i - 1]) + g(knots[i])) * (knots[i] - knots[i - 1]);
  }
  return area;
}

constexpr int kMinTries = 1000;
constexpr double kMaxTries = 1e8;

}  // namespace

double band_acceptance_probability(Answer answer, Gamma gamma) {
  const double g = gamma.value();
  if (answer == Answer::NotSure) {
    // |X - Y| <= g for X, Y ~ U(low, high).
    const double w = kHighWeight - kLowWeight;
    if (g >= w) return 1.0;
    const double r = 1.0 - g / w;
    return 1.0 - r * r;
  }
  // X - Y > g for X ~ U[high, 1], Y ~ U[0, low]; Y < X - g has measure
  // clamp(X - g, 0, low). The disagree case is the mirror image.
  const double wx = 1.0 - kHighWeight;
  return clamp_ramp_integral(kHighWeight, 1.0, g, kLowWeight) / (wx * kLowWeight);
}

CodingState initialize_coding(std::span<const std::optional<Answer>> wave1, Gamma gamma,
                              SplitMix64& rng, Hours t0) {
  int budget[3] = {0, 0, 0};
  for (Answer a : {Answer::Agree, Answer::Disagree, Answer::NotSure}) {
    const double p = band_acceptance_probability(a, gamma);
    const double needed = p > 0.0 ? 64.0 / p : kMaxTries + 1;
    if (needed > kMaxTries) {
      budget[static_cast<int>(a)] = -1;
    } else {
      budget[static_cast<int>(a)] = std::max(kMinTries, static_cast<int>(std::ceil(needed)));
    }
  }

  CodingState state;
  state.vectors.resize(wave1.size(), OpinionVector{0.0, 0.0, t0, t0});
  for (std::size_t i = 0; i < wave1.size(); ++i) {
    if (!wave1[i]) continue;
    const Answer answer = *wave1[i];
    const int tries = budget[static_cast<int>(answer)];
    if (tries < 0) {
      throw ConfigError("cannot initialize answer " + std::to_string(static_cast<int>(answer)) +
                        " consistently at gamma=" + text::format_double(gamma.value()) +
                        " (acceptance probability " +
                        text::format_double(band_acceptance_probability(answer, gamma)) + ")");
    }
    const Opinion want = to_opinion(answer);
    auto& v = state.vectors[i];
    bool ok = false;
    for (int k = 0; k < tries && !ok; ++k) {
      double high = 0.0, low = 0.0;
      switch (answer) {
        case Answer::Agree:
        case Answer::Disagree:
          high = rng.uniform(kHighWeight, 1.0);
          low = rng.uniform(0.0, kLowWeight);
          v.a = answer == Answer::Agree ? high : low;
          v.b = answer == Answer::Agree ? low : high;
          break;
        case Answer::NotSure:
          v.a = rng.uniform(kLowWeight, kHighWeight);
          v.b = rng.uniform(kLowWeight, kHighWeight);
          if (v.a == kLowWeight || v.b == kLowWeight) continue;
          break;
      }
      ok = exhibited_opinion(v.a, v.b, gamma) == want;
    }
    if (!ok) {
      throw ConfigError("initialization resampling exhausted for agent index " +
                        std::to_string(i));
    }
  }
  return state;
}

NgState initialize_ng(std::span<const std::optional<Answer>> wave1) {
  NgState state(wave1.size(), Opinion::AB);
  for (std::size_t i = 0; i < wave1.size(); ++i) {
    if (wave1[i]) state[i] = to_opinion(*wave1[i]);
  }
  return state;
}

}  // namespace codingsim
