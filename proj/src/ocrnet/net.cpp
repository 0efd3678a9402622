#include "captchalab/ocrnet/net.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "captchalab/error.hpp"
#include "captchalab/imgcore/rng.hpp"

namespace captchalab::ocrnet {

namespace {

constexpr std::string_view kMagic = "OCRNET1";

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Pass {
  std::array<double, kHidden> hidden{};
  Activations out{};
};

Pass run(const NetModel& m, const imgcore::FeatureVector& x) {
  Pass p;
  std::array<double, kHidden> z{};
  for (int h = 0; h < kHidden; ++h) z[static_cast<std::size_t>(h)] = m.bias_h[static_cast<std::size_t>(h)];
  for (int i = 0; i < kInputs; ++i) {
    if (x[static_cast<std::size_t>(i)] == 0) continue;
    const double* row = &m.weights_ih[static_cast<std::size_t>(i * kHidden)];
    for (int h = 0; h < kHidden; ++h) z[static_cast<std::size_t>(h)] += row[h];
  }
  for (int h = 0; h < kHidden; ++h) p.hidden[static_cast<std::size_t>(h)] = sigmoid(z[static_cast<std::size_t>(h)]);

  Activations zo{};
  for (int k = 0; k < kOutputs; ++k) zo[static_cast<std::size_t>(k)] = m.bias_o[static_cast<std::size_t>(k)];
  for (int h = 0; h < kHidden; ++h) {
    const double a = p.hidden[static_cast<std::size_t>(h)];
    const double* row = &m.weights_ho[static_cast<std::size_t>(h * kOutputs)];
    for (int k = 0; k < kOutputs; ++k) zo[static_cast<std::size_t>(k)] += a * row[k];
  }
  for (int k = 0; k < kOutputs; ++k) p.out[static_cast<std::size_t>(k)] = sigmoid(zo[static_cast<std::size_t>(k)]);
  return p;
}

double target(const Example& ex, int k) { return k == ex.label ? 1.0 : 0.0; }

// Output and hidden deltas of the per-example loss.
struct Deltas {
  Activations out{};
  std::array<double, kHidden> hidden{};
};

Deltas backprop(const NetModel& m, const Pass& p, const Example& ex) {
  Deltas d;
  for (int k = 0; k < kOutputs; ++k) {
    const double o = p.out[static_cast<std::size_t>(k)];
    d.out[static_cast<std::size_t>(k)] = (o - target(ex, k)) * o * (1.0 - o);
  }
  for (int h = 0; h < kHidden; ++h) {
    double s = 0.0;
    const double* row = &m.weights_ho[static_cast<std::size_t>(h * kOutputs)];
    for (int k = 0; k < kOutputs; ++k) s += row[k] * d.out[static_cast<std::size_t>(k)];
    const double a = p.hidden[static_cast<std::size_t>(h)];
    d.hidden[static_cast<std::size_t>(h)] = s * a * (1.0 - a);
  }
  return d;
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw ModelError("cannot format weight");
  out.append(buf, end);
}

}  // namespace

std::size_t NetModel::parameter_count() const noexcept {
  return weights_ih.size() + bias_h.size() + weights_ho.size() + bias_o.size();
}

double& NetModel::parameter(std::size_t i) {
  for (auto* v : {&weights_ih, &bias_h, &weights_ho, &bias_o}) {
    if (i < v->size()) return (*v)[i];
    i -= v->size();
  }
  throw std::out_of_range("parameter index out of range");
}

double NetModel::parameter(std::size_t i) const {
  return const_cast<NetModel&>(*this).parameter(i);
}

NetModel init_model(const TrainConfig& cfg) {
  imgcore::Rng rng(cfg.seed);
  NetModel m;
  const double span = cfg.init_high - cfg.init_low;
  for (auto* v : {&m.weights_ih, &m.bias_h, &m.weights_ho, &m.bias_o}) {
    for (double& w : *v) w = cfg.init_low + span * rng.next_float();
  }
  return m;
}

Activations forward(const NetModel& model, const imgcore::FeatureVector& x) {
  return run(model, x).out;
}

Classification classify_activations(const Activations& out) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (out[k] > out[best]) best = k;
  }
  return {static_cast<char>('A' + best), out[best]};
}

Classification classify(const NetModel& model, const imgcore::FeatureVector& x) {
  return classify_activations(forward(model, x));
}

std::vector<Example> training_set(const glyphs::GlyphAtlas& atlas) {
  std::vector<Example> set;
  set.reserve(104);
  for (char c = 'A'; c <= 'Z'; ++c) {
    for (int font = 0; font < glyphs::kFontCount; ++font) {
      for (char cc : {c, static_cast<char>(c - 'A' + 'a')}) {
        const auto& g = atlas.at(cc, font);
        set.push_back({imgcore::resize10(imgcore::segment_from_mask(g.bitmap)), c - 'A'});
      }
    }
  }
  return set;
}

double example_loss(const NetModel& model, const Example& ex) {
  const auto out = forward(model, ex.features);
  double s = 0.0;
  for (int k = 0; k < kOutputs; ++k) {
    const double e = out[static_cast<std::size_t>(k)] - target(ex, k);
    s += e * e;
  }
  return 0.5 * s;
}

std::vector<double> gradient(const NetModel& model, const Example& ex) {
  const Pass p = run(model, ex.features);
  const Deltas d = backprop(model, p, ex);
  std::vector<double> g;
  g.reserve(model.parameter_count());
  for (int i = 0; i < kInputs; ++i) {
    const double x = ex.features[static_cast<std::size_t>(i)];
    for (int h = 0; h < kHidden; ++h) g.push_back(x * d.hidden[static_cast<std::size_t>(h)]);
  }
  g.insert(g.end(), d.hidden.begin(), d.hidden.end());
  for (int h = 0; h < kHidden; ++h) {
    for (int k = 0; k < kOutputs; ++k) {
      g.push_back(p.hidden[static_cast<std::size_t>(h)] * d.out[static_cast<std::size_t>(k)]);
    }
  }
  g.insert(g.end(), d.out.begin(), d.out.end());
  return g;
}

NetModel train(const glyphs::GlyphAtlas& atlas, const TrainConfig& cfg, TrainStats* stats) {
  if (atlas.size() != 104) throw TrainingError("atlas must hold all 104 glyphs");
  return train(training_set(atlas), cfg, stats);
}

NetModel train(const std::vector<Example>& set, const TrainConfig& cfg, TrainStats* stats) {
  if (!(cfg.learning_rate > 0.0)) throw TrainingError("learning_rate must be positive");
  if (cfg.max_epochs < 1) throw TrainingError("max_epochs must be >= 1");
  if (set.empty()) throw TrainingError("empty training set");

  NetModel m = init_model(cfg);
  const double lr = cfg.learning_rate;
  if (stats) *stats = {};
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double sq = 0.0;
    for (const Example& ex : set) {
      const Pass p = run(m, ex.features);
      for (int k = 0; k < kOutputs; ++k) {
        const double e = p.out[static_cast<std::size_t>(k)] - target(ex, k);
        sq += e * e;
      }
      const Deltas d = backprop(m, p, ex);
      for (int h = 0; h < kHidden; ++h) {
        double* row = &m.weights_ho[static_cast<std::size_t>(h * kOutputs)];
        const double a = p.hidden[static_cast<std::size_t>(h)];
        for (int k = 0; k < kOutputs; ++k) row[k] -= lr * a * d.out[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < kOutputs; ++k) m.bias_o[static_cast<std::size_t>(k)] -= lr * d.out[static_cast<std::size_t>(k)];
      for (int i = 0; i < kInputs; ++i) {
        if (ex.features[static_cast<std::size_t>(i)] == 0) continue;
        double* row = &m.weights_ih[static_cast<std::size_t>(i * kHidden)];
        for (int h = 0; h < kHidden; ++h) row[h] -= lr * d.hidden[static_cast<std::size_t>(h)];
      }
      for (int h = 0; h < kHidden; ++h) m.bias_h[static_cast<std::size_t>(h)] -= lr * d.hidden[static_cast<std::size_t>(h)];
    }
    const double mse = sq / (static_cast<double>(set.size()) * kOutputs);
    if (stats) {
      stats->epochs = epoch;
      stats->epoch_mse.push_back(mse);
    }
    if (mse < cfg.target_mse) break;
  }
  return m;
}

std::string save_model(const NetModel& m) {
  std::string out;
  out.reserve(m.parameter_count() * 24);
  out += kMagic;
  out += '\n';
  out += std::to_string(kInputs) + " " + std::to_string(kHidden) + " " + std::to_string(kOutputs) + "\n";
  auto matrix = [&](const std::vector<double>& v, int cols) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      append_number(out, v[i]);
      out += (i + 1) % static_cast<std::size_t>(cols) == 0 ? '\n' : ' ';
    }
  };
  matrix(m.weights_ih, kHidden);
  matrix(m.bias_h, kHidden);
  matrix(m.weights_ho, kOutputs);
  matrix(m.bias_o, kOutputs);
  return out;
}

NetModel load_model(std::string_view text) {
  auto nl = text.find('\n');
  std::string_view magic = text.substr(0, nl);
  if (!magic.empty() && magic.back() == '\r') magic.remove_suffix(1);
  if (magic != kMagic) throw ModelError("bad model magic (expected OCRNET1)");
  text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

  const char* p = text.data();
  const char* end = text.data() + text.size();
  auto skip_ws = [&] {
    while (p < end && (*p == ' ' || *p == '\n' || *p == '\r' || *p == '\t')) ++p;
  };
  auto next_double = [&](const char* what) {
    skip_ws();
    double v = 0.0;
    auto [q, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{} || q == p) throw ModelError(std::string("malformed model: bad ") + what);
    p = q;
    return v;
  };

  const double in = next_double("topology");
  const double hid = next_double("topology");
  const double outn = next_double("topology");
  if (in != kInputs || hid != kHidden || outn != kOutputs) {
    throw ModelError("topology mismatch: expected 100 64 26");
  }
  NetModel m;
  for (std::size_t i = 0; i < m.parameter_count(); ++i) {
    const double v = next_double("weight");
    if (!std::isfinite(v)) throw ModelError("non-finite weight");
    m.parameter(i) = v;
  }
  skip_ws();
  if (p != end) throw ModelError("trailing data after weights");
  return m;
}

}  // namespace captchalab::ocrnet
