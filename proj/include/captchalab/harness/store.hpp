#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "captchalab/captcha/captcha.hpp"
#include "captchalab/error.hpp"

namespace captchalab::harness {

class NotFoundError : public RequestError {
 public:
  using RequestError::RequestError;
};

class ConflictError : public RequestError {
 public:
  using RequestError::RequestError;
};

enum class Role { Human, Machine };

std::string_view role_name(Role r);
// Throws RequestError for anything other than "human" or "machine".
Role parse_role(std::string_view s);

enum class TrialStatus { Open, Closed };

struct Trial {
  std::string trial_id;
  captcha::CaptchaSpec spec;
  std::string truth;
  std::string created_at;
  TrialStatus status = TrialStatus::Open;
};

struct TrialAnswer {
  std::string trial_id;
  std::string client_id;
  Role role = Role::Human;
  std::string text;
  int rate = 0;
};

// Answers per role needed before a trial closes.
struct Quorum {
  int humans = 1;
  int machines = 1;
};

// Positions i < min(|truth|, |submitted|) where the upper-cased characters
// agree. No alignment: a dropped character shifts everything after it.
int score_answer(std::string_view truth, std::string_view submitted);

// Exact rational so percentages round the same way everywhere.
struct Ratio {
  long long num = 0;
  long long den = 0;

  double value() const noexcept { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
  // Percentage in hundredths, rounded half up (89.583...% -> 8958).
  long long percent_hundredths() const noexcept;
  std::string percent_string() const;  // "89.58"
};

struct TrialRow {
  std::string trial_id;
  std::string truth;
  std::optional<int> machine_rate;
  std::optional<int> human_rate;
  // Role whose answer scored higher, or "indistinguishable" on a tie.
  std::string verdict;
};

struct Report {
  int n_trials = 0;
  Ratio machine_char;
  Ratio human_char;
  Ratio machine_full;
  Ratio human_full;
  std::vector<TrialRow> per_trial;
};

nlohmann::json to_json(const Report& r);
// "machine_char=89.58 human_char=83.75 machine_full=65.00 human_full=53.33"
std::string summary_line(const Report& r);

// Trials and answers backed by an append-only JSON Lines event log. Every
// mutation takes the writer lock and is appended (and flushed) before it
// becomes visible, so the log order is the linearisation order.
class TrialStore {
 public:
  // In-memory only.
  explicit TrialStore(Quorum quorum = {});
  // Replays `path` if it exists, then appends new events to it.
  explicit TrialStore(const std::filesystem::path& path, Quorum quorum = {});

  TrialStore(const TrialStore&) = delete;
  TrialStore& operator=(const TrialStore&) = delete;

  // Trial i gets seed base_seed + i and text drawn from that seed; other
  // fields come from `base`. Throws InputError for count < 1.
  std::vector<Trial> create_trials(int count, std::uint64_t base_seed,
                                   const captcha::CaptchaSpec& base = {});

  // Scores against the stored truth and closes the trial once the quorum is
  // met. Throws NotFoundError / ConflictError.
  TrialAnswer record_answer(const std::string& trial_id, const std::string& client_id, Role role,
                            const std::string& text);

  // Metrics over closed trials. Throws EmptyReportError when none are closed.
  Report aggregate_report() const;

  // Open trials with no answer from `role` yet, in creation order.
  std::vector<std::string> open_trials(Role role) const;

  std::optional<Trial> find(const std::string& trial_id) const;
  std::vector<TrialAnswer> answers(const std::string& trial_id) const;
  std::size_t trial_count() const;

  // Client-facing view: truth, seed, text and rates only once closed.
  nlohmann::json trial_detail(const std::string& trial_id) const;

  // Regenerates the trial's image from its stored spec.
  imgcore::RasterImage trial_image(const std::string& trial_id) const;

 private:
  struct Entry {
    Trial trial;
    std::vector<TrialAnswer> answers;
  };

  void replay(const std::filesystem::path& path);
  void append(const nlohmann::json& event);
  void apply_trial(Trial t);
  void apply_answer(TrialAnswer a);
  void update_status(Entry& e) const;
  std::string next_id();
  Entry& entry(const std::string& trial_id);
  const Entry& entry(const std::string& trial_id) const;

  Quorum quorum_;
  mutable std::shared_mutex mu_;
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
  std::uint64_t id_counter_ = 0;
  std::optional<std::ofstream> log_;
};

nlohmann::json trial_event(const Trial& t);
nlohmann::json answer_event(const TrialAnswer& a);

}  // namespace captchalab::harness
