#include "captchalab/harness/store.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <sstream>

namespace captchalab::harness {

namespace {

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

char upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

}  // namespace

std::string_view role_name(Role r) { return r == Role::Human ? "human" : "machine"; }

Role parse_role(std::string_view s) {
  if (s == "human") return Role::Human;
  if (s == "machine") return Role::Machine;
  throw RequestError("role must be 'human' or 'machine', got '" + std::string(s) + "'");
}

int score_answer(std::string_view truth, std::string_view submitted) {
  const std::size_t n = std::min(truth.size(), submitted.size());
  int rate = 0;
  for (std::size_t i = 0; i < n; ++i) rate += upper(truth[i]) == upper(submitted[i]) ? 1 : 0;
  return rate;
}

long long Ratio::percent_hundredths() const noexcept {
  if (den == 0) return 0;
  // floor(num * 10000 / den + 1/2) in integers.
  return (2 * num * 10000 + den) / (2 * den);
}

std::string Ratio::percent_string() const {
  const long long h = percent_hundredths();
  std::ostringstream os;
  os << h / 100 << '.' << std::setw(2) << std::setfill('0') << h % 100;
  return os.str();
}

nlohmann::json to_json(const Report& r) {
  auto pct = [](const Ratio& q) { return static_cast<double>(q.percent_hundredths()) / 100.0; };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.per_trial) {
    rows.push_back({{"trial_id", row.trial_id},
                    {"truth", row.truth},
                    {"machine_rate", row.machine_rate ? nlohmann::json(*row.machine_rate) : nlohmann::json()},
                    {"human_rate", row.human_rate ? nlohmann::json(*row.human_rate) : nlohmann::json()},
                    {"verdict", row.verdict}});
  }
  return {{"n_trials", r.n_trials},
          {"machine_char_rate", pct(r.machine_char)},
          {"human_char_rate", pct(r.human_char)},
          {"machine_full_rate", pct(r.machine_full)},
          {"human_full_rate", pct(r.human_full)},
          {"per_trial", std::move(rows)}};
}

std::string summary_line(const Report& r) {
  return "machine_char=" + r.machine_char.percent_string() +
         " human_char=" + r.human_char.percent_string() +
         " machine_full=" + r.machine_full.percent_string() +
         " human_full=" + r.human_full.percent_string();
}

nlohmann::json trial_event(const Trial& t) {
  nlohmann::json j = captcha::to_json(t.spec);
  j["ev"] = "trial";
  j["trial_id"] = t.trial_id;
  j["created_at"] = t.created_at;
  j["truth"] = t.truth;
  return j;
}

nlohmann::json answer_event(const TrialAnswer& a) {
  return {{"ev", "answer"},          {"trial_id", a.trial_id}, {"client_id", a.client_id},
          {"role", role_name(a.role)}, {"text", a.text},         {"rate", a.rate}};
}

TrialStore::TrialStore(Quorum quorum) : quorum_(quorum) {}

TrialStore::TrialStore(const std::filesystem::path& path, Quorum quorum) : quorum_(quorum) {
  if (std::filesystem::exists(path)) replay(path);
  log_.emplace(path, std::ios::app);
  if (!*log_) throw PersistenceError("cannot open event log " + path.string());
}

void TrialStore::replay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read event log " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json ev;
    try {
      ev = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw LoadError("malformed event at line " + std::to_string(line_no) + " (" + where + "): " + e.what());
    }
    try {
      const std::string kind = ev.at("ev").get<std::string>();
      if (kind == "trial") {
        Trial t;
        t.trial_id = ev.at("trial_id").get<std::string>();
        t.created_at = ev.value("created_at", "");
        t.truth = ev.at("truth").get<std::string>();
        t.spec = captcha::spec_from_json(ev);
        if (index_.count(t.trial_id)) throw LoadError("duplicate trial id " + t.trial_id);
        apply_trial(std::move(t));
      } else if (kind == "answer") {
        TrialAnswer a;
        a.trial_id = ev.at("trial_id").get<std::string>();
        a.client_id = ev.at("client_id").get<std::string>();
        a.role = parse_role(ev.at("role").get<std::string>());
        a.text = ev.at("text").get<std::string>();
        a.rate = ev.at("rate").get<int>();
        const Entry& e = entry(a.trial_id);
        if (score_answer(e.trial.truth, a.text) != a.rate) {
          throw LoadError("stored rate disagrees with score of '" + a.text + "'");
        }
        apply_answer(std::move(a));
      } else {
        throw LoadError("unknown event kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw LoadError("bad event at line " + std::to_string(line_no) + " (" + where + "): " + e.what());
    } catch (const Error& e) {
      throw LoadError("bad event at line " + std::to_string(line_no) + " (" + where + "): " + e.what());
    }
  }
}

void TrialStore::append(const nlohmann::json& event) {
  if (!log_) return;
  *log_ << event.dump() << '\n';
  log_->flush();
  if (!*log_) throw PersistenceError("event log write failed");
}

void TrialStore::apply_trial(Trial t) {
  index_.emplace(t.trial_id, entries_.size());
  ++id_counter_;
  entries_.push_back({std::move(t), {}});
}

void TrialStore::apply_answer(TrialAnswer a) {
  Entry& e = entry(a.trial_id);
  if (e.trial.status == TrialStatus::Closed) throw ConflictError("trial " + a.trial_id + " is closed");
  for (const auto& prev : e.answers) {
    if (prev.client_id == a.client_id) {
      throw ConflictError("client " + a.client_id + " already answered " + a.trial_id);
    }
  }
  e.answers.push_back(std::move(a));
  update_status(e);
}

void TrialStore::update_status(Entry& e) const {
  int humans = 0, machines = 0;
  for (const auto& a : e.answers) (a.role == Role::Human ? humans : machines) += 1;
  if (humans >= quorum_.humans && machines >= quorum_.machines) e.trial.status = TrialStatus::Closed;
}

std::string TrialStore::next_id() {
  for (std::uint64_t n = id_counter_ + 1;; ++n) {
    std::ostringstream os;
    os << 'T' << std::setw(6) << std::setfill('0') << n;
    if (!index_.count(os.str())) {
      id_counter_ = n - 1;  // apply_trial advances it to n
      return os.str();
    }
  }
}

TrialStore::Entry& TrialStore::entry(const std::string& trial_id) {
  auto it = index_.find(trial_id);
  if (it == index_.end()) throw NotFoundError("unknown trial " + trial_id);
  return entries_[it->second];
}

const TrialStore::Entry& TrialStore::entry(const std::string& trial_id) const {
  return const_cast<TrialStore*>(this)->entry(trial_id);
}

std::vector<Trial> TrialStore::create_trials(int count, std::uint64_t base_seed,
                                             const captcha::CaptchaSpec& base) {
  if (count < 1) throw InputError("trial count must be >= 1");
  std::vector<Trial> made;
  made.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Trial t;
    t.spec = captcha::spec_for_seed(base_seed + static_cast<std::uint64_t>(i), base);
    captcha::validate(t.spec);
    t.truth = t.spec.text;
    made.push_back(std::move(t));
  }
  std::unique_lock lock(mu_);
  const std::string stamp = now_iso8601();
  for (auto& t : made) {
    t.trial_id = next_id();
    t.created_at = stamp;
    append(trial_event(t));
    apply_trial(t);
  }
  return made;
}

TrialAnswer TrialStore::record_answer(const std::string& trial_id, const std::string& client_id,
                                      Role role, const std::string& text) {
  if (client_id.empty()) throw RequestError("client_id must not be empty");
  std::unique_lock lock(mu_);
  Entry& e = entry(trial_id);
  if (e.trial.status == TrialStatus::Closed) throw ConflictError("trial " + trial_id + " is closed");
  for (const auto& prev : e.answers) {
    if (prev.client_id == client_id) {
      throw ConflictError("client " + client_id + " already answered " + trial_id);
    }
  }
  TrialAnswer a{trial_id, client_id, role, text, score_answer(e.trial.truth, text)};
  append(answer_event(a));
  apply_answer(a);
  return a;
}

Report TrialStore::aggregate_report() const {
  std::shared_lock lock(mu_);
  Report r;
  long long m_count = 0, h_count = 0;
  for (const Entry& e : entries_) {
    if (e.trial.status != TrialStatus::Closed) continue;
    ++r.n_trials;
    TrialRow row{e.trial.trial_id, e.trial.truth, std::nullopt, std::nullopt, ""};
    const auto len = static_cast<long long>(e.trial.truth.size());
    for (const TrialAnswer& a : e.answers) {
      const bool full = a.rate == len;
      if (a.role == Role::Machine) {
        r.machine_char.num += a.rate;
        r.machine_char.den += len;
        r.machine_full.num += full ? 1 : 0;
        ++m_count;
        if (!row.machine_rate) row.machine_rate = a.rate;
      } else {
        r.human_char.num += a.rate;
        r.human_char.den += len;
        r.human_full.num += full ? 1 : 0;
        ++h_count;
        if (!row.human_rate) row.human_rate = a.rate;
      }
    }
    const int m = row.machine_rate.value_or(-1);
    const int h = row.human_rate.value_or(-1);
    row.verdict = h > m ? "human" : (m > h ? "machine" : "indistinguishable");
    r.per_trial.push_back(std::move(row));
  }
  if (r.n_trials == 0) throw EmptyReportError("no closed trials");
  r.machine_full.den = m_count;
  r.human_full.den = h_count;
  return r;
}

std::vector<std::string> TrialStore::open_trials(Role role) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const Entry& e : entries_) {
    if (e.trial.status != TrialStatus::Open) continue;
    const bool answered = std::any_of(e.answers.begin(), e.answers.end(),
                                      [&](const TrialAnswer& a) { return a.role == role; });
    if (!answered) ids.push_back(e.trial.trial_id);
  }
  return ids;
}

std::optional<Trial> TrialStore::find(const std::string& trial_id) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(trial_id);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].trial;
}

std::vector<TrialAnswer> TrialStore::answers(const std::string& trial_id) const {
  std::shared_lock lock(mu_);
  return entry(trial_id).answers;
}

std::size_t TrialStore::trial_count() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

nlohmann::json TrialStore::trial_detail(const std::string& trial_id) const {
  std::shared_lock lock(mu_);
  const Entry& e = entry(trial_id);
  const bool closed = e.trial.status == TrialStatus::Closed;
  nlohmann::json j = {{"trial_id", e.trial.trial_id},
                      {"created_at", e.trial.created_at},
                      {"status", closed ? "closed" : "open"},
                      {"width", e.trial.spec.width},
                      {"height", e.trial.spec.height},
                      {"length", e.trial.truth.size()}};
  nlohmann::json roles = nlohmann::json::array();
  for (const auto& a : e.answers) roles.push_back(role_name(a.role));
  j["answered_roles"] = std::move(roles);
  if (closed) {
    j["truth"] = e.trial.truth;
    j["spec"] = captcha::to_json(e.trial.spec);
    nlohmann::json answers = nlohmann::json::array();
    for (const auto& a : e.answers) {
      answers.push_back({{"client_id", a.client_id},
                         {"role", role_name(a.role)},
                         {"text", a.text},
                         {"rate", a.rate}});
    }
    j["answers"] = std::move(answers);
  }
  return j;
}

imgcore::RasterImage TrialStore::trial_image(const std::string& trial_id) const {
  captcha::CaptchaSpec spec;
  {
    std::shared_lock lock(mu_);
    spec = entry(trial_id).trial.spec;
  }
  return captcha::generate(spec).image;
}

}  // namespace captchalab::harness
