#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "captchalab/glyphs/atlas.hpp"
#include "captchalab/imgcore/segment.hpp"

namespace captchalab::ocrnet {

inline constexpr int kInputs = static_cast<int>(imgcore::kFeatureSize);
inline constexpr int kHidden = 64;
inline constexpr int kOutputs = 26;

using Activations = std::array<double, kOutputs>;

// 100-64-26 feedforward net, logistic sigmoid on both layers. Matrices are
// row-major with the source layer as the row: weights_ih[i * kHidden + h].
// Output k stands for the letter 'A' + k.
struct NetModel {
  std::vector<double> weights_ih = std::vector<double>(kInputs * kHidden, 0.0);
  std::vector<double> bias_h = std::vector<double>(kHidden, 0.0);
  std::vector<double> weights_ho = std::vector<double>(kHidden * kOutputs, 0.0);
  std::vector<double> bias_o = std::vector<double>(kOutputs, 0.0);

  // Every parameter in serialisation order; used by training and the
  // gradient check so both walk the same flat layout.
  std::size_t parameter_count() const noexcept;
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;

  friend bool operator==(const NetModel&, const NetModel&) = default;
};

struct TrainConfig {
  double learning_rate = 0.5;
  int max_epochs = 2000;
  double target_mse = 0.001;
  double init_low = -0.5;
  double init_high = 0.5;
  std::uint64_t seed = 1;
};

struct Example {
  imgcore::FeatureVector features{};
  int label = 0;  // 0..25
};

struct TrainStats {
  int epochs = 0;
  std::vector<double> epoch_mse;  // one entry per epoch run
};

// Parameters drawn in serialisation order as init_low + (init_high - init_low)
// * next_float() from Rng(cfg.seed).
NetModel init_model(const TrainConfig& cfg);

Activations forward(const NetModel& model, const imgcore::FeatureVector& x);

struct Classification {
  char letter = 'A';
  double confidence = 0.0;
};

// Argmax over activations, lowest index on ties.
Classification classify_activations(const Activations& out);
Classification classify(const NetModel& model, const imgcore::FeatureVector& x);

// The 104 atlas glyphs cropped to their ink and resampled, labelled with the
// upper-cased letter, in order A/0, a/0, A/1, a/1, ..., z/1.
std::vector<Example> training_set(const glyphs::GlyphAtlas& atlas);

// Per-example loss 0.5 * sum_k (o_k - t_k)^2 against a one-hot target.
double example_loss(const NetModel& model, const Example& ex);

// d(example_loss)/d(parameter), laid out like NetModel::parameter().
std::vector<double> gradient(const NetModel& model, const Example& ex);

// Online SGD over the training set in fixed order. The epoch MSE is the mean
// of (o - t)^2 over every output of every example, measured before each
// example's update; training stops once it falls below target_mse.
NetModel train(const glyphs::GlyphAtlas& atlas, const TrainConfig& cfg,
               TrainStats* stats = nullptr);
NetModel train(const std::vector<Example>& set, const TrainConfig& cfg,
               TrainStats* stats = nullptr);

// OCRNET1 text format.
std::string save_model(const NetModel& model);
NetModel load_model(std::string_view text);

}  // namespace captchalab::ocrnet
