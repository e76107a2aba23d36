#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "liet/errors.hpp"
#include "liet/featurize.hpp"
#include "liet/rng.hpp"

// Cost-regression utility: a small value head over hashed text features,
// trained with mini-batch gradient descent on the squared-error objective
// E[(c_gt - f(obs, action))^2] with decoupled weight decay.
namespace liet::utility {

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

struct ExplorationSample {
  std::string obs_text;
  std::string action_text;
  long cost = 1;
  int episode_id = 0;
};

struct ExploratoryDataset {
  std::vector<ExplorationSample> samples;
  std::set<int> train_episodes;
  std::set<int> holdout_episodes;
  uint64_t split_seed = 0;
  double train_fraction = 0.8;

  std::vector<const ExplorationSample*> split(bool train) const {
    std::vector<const ExplorationSample*> out;
    const auto& eps = train ? train_episodes : holdout_episodes;
    for (const auto& s : samples)
      if (eps.count(s.episode_id)) out.push_back(&s);
    return out;
  }
};

// Assign whole episodes to train/holdout, deterministically from the seed.
// The train side rounds up, so a single episode lands wholly in train.
inline void assign_split(ExploratoryDataset& ds, uint64_t seed, double train_fraction = 0.8) {
  ds.split_seed = seed;
  ds.train_fraction = train_fraction;
  ds.train_episodes.clear();
  ds.holdout_episodes.clear();
  std::set<int> episode_set;
  for (const auto& s : ds.samples) episode_set.insert(s.episode_id);
  std::vector<int> episodes(episode_set.begin(), episode_set.end());
  Rng rng(derive_seed(seed, 0x5917));
  for (size_t i = episodes.size(); i > 1; --i)
    std::swap(episodes[i - 1], episodes[rng.below(i)]);
  size_t n_train = static_cast<size_t>(std::ceil(train_fraction * double(episodes.size())));
  n_train = std::min(n_train, episodes.size());
  for (size_t i = 0; i < episodes.size(); ++i)
    (i < n_train ? ds.train_episodes : ds.holdout_episodes).insert(episodes[i]);
}

inline constexpr int kDatasetSchemaVersion = 1;

inline void save_dataset(const ExploratoryDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file '" + path + "'");
  nlohmann::ordered_json header;
  header["type"] = "liet_dataset";
  header["schema_version"] = kDatasetSchemaVersion;
  header["split_seed"] = ds.split_seed;
  header["train_fraction"] = ds.train_fraction;
  out << header.dump() << "\n";
  for (const auto& s : ds.samples) {
    nlohmann::ordered_json j;
    j["obs_text"] = s.obs_text;
    j["action_text"] = s.action_text;
    j["cost"] = s.cost;
    j["episode_id"] = s.episode_id;
    out << j.dump() << "\n";
  }
}

inline ExploratoryDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file '" + path + "'");
  ExploratoryDataset ds;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    if (!saw_header) {
      if (j.value("type", "") != "liet_dataset" ||
          j.value("schema_version", -1) != kDatasetSchemaVersion)
        throw SchemaVersionMismatch("unexpected dataset header in '" + path + "'");
      ds.split_seed = j.at("split_seed").get<uint64_t>();
      ds.train_fraction = j.at("train_fraction").get<double>();
      saw_header = true;
      continue;
    }
    ExplorationSample s;
    s.obs_text = j.at("obs_text").get<std::string>();
    s.action_text = j.at("action_text").get<std::string>();
    s.cost = j.at("cost").get<long>();
    s.episode_id = j.at("episode_id").get<int>();
    if (s.cost < 1 || s.obs_text.empty() || s.action_text.empty())
      throw ConfigError("invalid sample in dataset '" + path + "'");
    ds.samples.push_back(std::move(s));
  }
  if (!saw_header) throw SchemaVersionMismatch("dataset '" + path + "' has no header");
  assign_split(ds, ds.split_seed, ds.train_fraction);
  return ds;
}

// ---------------------------------------------------------------------------
// Value head
// ---------------------------------------------------------------------------

inline constexpr int kHiddenWidth = 32;

// Parameters of the D -> 32 -> 32 -> 1 network, tanh hidden activations.
struct ValueHead {
  int input_dim = 0;
  std::vector<double> w1;  // kHiddenWidth x input_dim, row-major
  std::vector<double> b1;  // kHiddenWidth
  std::vector<double> w2;  // kHiddenWidth x kHiddenWidth
  std::vector<double> b2;  // kHiddenWidth
  std::vector<double> w3;  // kHiddenWidth
  double b3 = 0.0;

  size_t param_count() const {
    return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + 1;
  }

  static ValueHead init(int input_dim, uint64_t seed) {
    ValueHead h;
    h.input_dim = input_dim;
    Rng rng(derive_seed(seed, 0x11ead));
    // Inputs are L2-normalized whole vectors, so the first layer uses a unit
    // range; the deeper layers use a fan-based range.
    auto fill = [&](std::vector<double>& v, size_t n, double a) {
      v.resize(n);
      for (auto& x : v) x = rng.real(-a, a);
    };
    fill(h.w1, size_t(kHiddenWidth) * input_dim, 1.0);
    fill(h.b1, kHiddenWidth, 0.1);
    double a2 = std::sqrt(6.0 / (kHiddenWidth + kHiddenWidth));
    fill(h.w2, size_t(kHiddenWidth) * kHiddenWidth, a2);
    fill(h.b2, kHiddenWidth, 0.1);
    // Zero output layer: the initial prediction is exactly the target mean.
    h.w3.assign(kHiddenWidth, 0.0);
    h.b3 = 0.0;
    return h;
  }
};

struct ForwardTrace {
  std::vector<double> h1, h2;  // post-activation
  double y = 0.0;
};

inline ForwardTrace forward(const ValueHead& m, const std::vector<double>& x) {
  ForwardTrace t;
  t.h1.resize(kHiddenWidth);
  t.h2.resize(kHiddenWidth);
  for (int i = 0; i < kHiddenWidth; ++i) {
    double acc = m.b1[i];
    const double* row = &m.w1[size_t(i) * m.input_dim];
    for (int j = 0; j < m.input_dim; ++j) acc += row[j] * x[j];
    t.h1[i] = std::tanh(acc);
  }
  for (int i = 0; i < kHiddenWidth; ++i) {
    double acc = m.b2[i];
    const double* row = &m.w2[size_t(i) * kHiddenWidth];
    for (int j = 0; j < kHiddenWidth; ++j) acc += row[j] * t.h1[j];
    t.h2[i] = std::tanh(acc);
  }
  double y = m.b3;
  for (int i = 0; i < kHiddenWidth; ++i) y += m.w3[i] * t.h2[i];
  t.y = y;
  return t;
}

// Gradient accumulator with the same shapes as ValueHead.
struct Gradients {
  std::vector<double> w1, b1, w2, b2, w3;
  double b3 = 0.0;

  static Gradients zeros(const ValueHead& m) {
    Gradients g;
    g.w1.assign(m.w1.size(), 0.0);
    g.b1.assign(m.b1.size(), 0.0);
    g.w2.assign(m.w2.size(), 0.0);
    g.b2.assign(m.b2.size(), 0.0);
    g.w3.assign(m.w3.size(), 0.0);
    g.b3 = 0.0;
    return g;
  }
};

// Accumulate d(dy_scale * y)/d(theta) for one sample into `g`.
inline void backward(const ValueHead& m, const std::vector<double>& x, const ForwardTrace& t,
                     double dy, Gradients& g) {
  std::vector<double> dh2(kHiddenWidth), dh1(kHiddenWidth, 0.0);
  for (int i = 0; i < kHiddenWidth; ++i) {
    g.w3[i] += dy * t.h2[i];
    dh2[i] = dy * m.w3[i] * (1.0 - t.h2[i] * t.h2[i]);  // through tanh
  }
  g.b3 += dy;
  for (int i = 0; i < kHiddenWidth; ++i) {
    g.b2[i] += dh2[i];
    double* grow = &g.w2[size_t(i) * kHiddenWidth];
    const double* row = &m.w2[size_t(i) * kHiddenWidth];
    for (int j = 0; j < kHiddenWidth; ++j) {
      grow[j] += dh2[i] * t.h1[j];
      dh1[j] += dh2[i] * row[j];
    }
  }
  for (int i = 0; i < kHiddenWidth; ++i) {
    double d = dh1[i] * (1.0 - t.h1[i] * t.h1[i]);
    g.b1[i] += d;
    double* grow = &g.w1[size_t(i) * m.input_dim];
    for (int j = 0; j < m.input_dim; ++j) grow[j] += d * x[j];
  }
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct TrainMeta {
  int epochs = 0;
  std::vector<double> train_mse_per_epoch;
  double final_train_mse = 0.0;
  double holdout_mse = 0.0;
  int train_samples = 0;
  int holdout_samples = 0;
};

struct UtilityModel {
  FeaturizerSpec featurizer;
  ValueHead head;
  // Targets are standardized with train-split statistics; the head predicts
  // in z-space and the output is un-standardized.
  double target_mean = 0.0;
  double target_std = 1.0;
  TrainMeta meta;
};

struct TrainConfig {
  int batch_size = 64;
  double weight_decay = 0.1;
  int epochs = 200;
  double learning_rate = 0.06;
  uint64_t seed = 0;
  int feature_dim = 2048;

  void validate() const {
    if (batch_size <= 0 || epochs < 1 || learning_rate <= 0.0 || weight_decay < 0.0 ||
        feature_dim <= 0)
      throw ConfigError("train config values must be positive (epochs >= 1)");
  }
};

// Raw-space prediction for a featurized input, before the >= 1 clamp.
inline double predict_raw(const UtilityModel& m, const std::vector<double>& features) {
  return m.target_mean + m.target_std * forward(m.head, features).y;
}

// Predicted cost for a (observation, action) text pair. Clamped below at 1:
// no action is free.
inline double predict_cost(const UtilityModel& m, const std::string& obs_text,
                           const std::string& action_text) {
  auto fv = featurize(m.featurizer, obs_text, action_text);
  return std::max(1.0, predict_raw(m, fv.values));
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace detail {

inline double mse_over(const UtilityModel& m, const std::vector<std::vector<double>>& feats,
                       const std::vector<double>& labels) {
  if (feats.empty()) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < feats.size(); ++i) {
    double d = labels[i] - predict_raw(m, feats[i]);
    acc += d * d;
  }
  return acc / double(feats.size());
}

// Canonical sample order: input permutation must never affect training.
inline bool sample_less(const ExplorationSample& a, const ExplorationSample& b) {
  return std::tie(a.episode_id, a.obs_text, a.action_text, a.cost) <
         std::tie(b.episode_id, b.obs_text, b.action_text, b.cost);
}

}  // namespace detail

inline UtilityModel train_utility(const ExploratoryDataset& dataset, const TrainConfig& config) {
  config.validate();
  auto train_ptrs = dataset.split(true);
  if (train_ptrs.empty()) throw EmptyDataset("train split is empty");
  auto holdout_ptrs = dataset.split(false);

  std::vector<ExplorationSample> train;
  train.reserve(train_ptrs.size());
  for (const auto* p : train_ptrs) train.push_back(*p);
  std::sort(train.begin(), train.end(), detail::sample_less);

  UtilityModel model;
  model.featurizer.dim = config.feature_dim;
  model.head = ValueHead::init(config.feature_dim, config.seed);

  std::vector<std::vector<double>> feats;
  std::vector<double> labels;
  feats.reserve(train.size());
  for (const auto& s : train) {
    feats.push_back(featurize(model.featurizer, s.obs_text, s.action_text).values);
    labels.push_back(double(s.cost));
  }

  double mean = 0.0;
  for (double c : labels) mean += c;
  mean /= double(labels.size());
  double var = 0.0;
  for (double c : labels) var += (c - mean) * (c - mean);
  var /= double(labels.size());
  model.target_mean = mean;
  model.target_std = var > 1e-12 ? std::sqrt(var) : 1.0;

  Rng shuffle_rng(derive_seed(config.seed, 0x5a5a));
  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  // Minimize the squared error on raw costs with Adam plus decoupled weight
  // decay. The head output feeds the fixed affine f = mean + std * y, so the
  // chain rule carries a factor of std.
  ValueHead& h = model.head;
  Gradients m1 = Gradients::zeros(h);
  Gradients m2 = Gradients::zeros(h);
  const double beta1 = 0.9, beta2 = 0.999, eps_adam = 1e-8;
  long batches_per_epoch = long((order.size() + config.batch_size - 1) / config.batch_size);
  long total_steps = batches_per_epoch * config.epochs;
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      size_t end = std::min(order.size(), start + config.batch_size);
      Gradients g = Gradients::zeros(h);
      double inv_b = 1.0 / double(end - start);
      for (size_t k = start; k < end; ++k) {
        size_t idx = order[k];
        auto trace = forward(h, feats[idx]);
        double err = model.target_mean + model.target_std * trace.y - labels[idx];
        if (!std::isfinite(err)) throw NonFiniteLoss("loss diverged; lower the learning rate");
        backward(h, feats[idx], trace, 2.0 * err * model.target_std * inv_b, g);
      }
      // Global-norm gradient clip; squared-error spikes on long walks would
      // otherwise destabilize the small-batch updates.
      {
        double norm2 = g.b3 * g.b3;
        for (const auto* vec : {&g.w1, &g.b1, &g.w2, &g.b2, &g.w3})
          for (double x : *vec) norm2 += x * x;
        const double max_norm = 1.0;
        if (norm2 > max_norm * max_norm) {
          double scale = max_norm / std::sqrt(norm2);
          for (auto* vec : {&g.w1, &g.b1, &g.w2, &g.b2, &g.w3})
            for (double& x : *vec) x *= scale;
          g.b3 *= scale;
        }
      }
      ++step;
      double bc1 = 1.0 - std::pow(beta1, double(step));
      double bc2 = 1.0 - std::pow(beta2, double(step));
      // Cosine decay from the configured rate to zero over the whole run.
      double progress = double(step - 1) / double(std::max<long>(1, total_steps));
      double lr = config.learning_rate * 0.5 * (1.0 + std::cos(progress * 3.14159265358979323846));
      double decay = 1.0 - lr * config.weight_decay;
      auto apply = [&](std::vector<double>& w, const std::vector<double>& gw,
                       std::vector<double>& mw, std::vector<double>& vw) {
        for (size_t i = 0; i < w.size(); ++i) {
          mw[i] = beta1 * mw[i] + (1.0 - beta1) * gw[i];
          vw[i] = beta2 * vw[i] + (1.0 - beta2) * gw[i] * gw[i];
          double update = (mw[i] / bc1) / (std::sqrt(vw[i] / bc2) + eps_adam);
          w[i] = w[i] * decay - lr * update;
        }
      };
      apply(h.w1, g.w1, m1.w1, m2.w1);
      apply(h.b1, g.b1, m1.b1, m2.b1);
      apply(h.w2, g.w2, m1.w2, m2.w2);
      apply(h.b2, g.b2, m1.b2, m2.b2);
      apply(h.w3, g.w3, m1.w3, m2.w3);
      m1.b3 = beta1 * m1.b3 + (1.0 - beta1) * g.b3;
      m2.b3 = beta2 * m2.b3 + (1.0 - beta2) * g.b3 * g.b3;
      h.b3 = h.b3 * decay - lr * (m1.b3 / bc1) / (std::sqrt(m2.b3 / bc2) + eps_adam);
    }
    double train_mse = detail::mse_over(model, feats, labels);
    if (!std::isfinite(train_mse)) throw NonFiniteLoss("loss diverged; lower the learning rate");
    model.meta.train_mse_per_epoch.push_back(train_mse);
  }

  model.meta.epochs = config.epochs;
  model.meta.final_train_mse = model.meta.train_mse_per_epoch.back();
  model.meta.train_samples = int(train.size());
  model.meta.holdout_samples = int(holdout_ptrs.size());
  if (!holdout_ptrs.empty()) {
    std::vector<std::vector<double>> hf;
    std::vector<double> hl;
    for (const auto* s : holdout_ptrs) {
      hf.push_back(featurize(model.featurizer, s->obs_text, s->action_text).values);
      hl.push_back(double(s->cost));
    }
    model.meta.holdout_mse = detail::mse_over(model, hf, hl);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EvalReport {
  double mse = 0.0;
  double mae = 0.0;
  std::optional<double> rank_correlation;  // mean per-state Spearman rho
  int states_ranked = 0;                   // groups that contributed to rho
};

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  size_t n = v.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = (double(i) + double(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

// Tie-corrected Spearman rho: Pearson correlation of average ranks.
// Undefined (nullopt) when either side is constant.
inline std::optional<double> spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  double ma = 0, mb = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= double(ra.size());
  mb /= double(rb.size());
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return std::nullopt;
  return cov / std::sqrt(va * vb);
}

}  // namespace detail

// MSE/MAE over the holdout split plus the mean per-state Spearman rho, where
// a state is a group of samples sharing the same observation text (the
// ranking over one state's candidates is what the planner consumes).
// Groups with constant labels are skipped; if the predictor is constant on a
// group with varying labels, that group contributes rho = 0.
template <typename Predictor>
EvalReport evaluate_with_predictor(Predictor&& predict, const ExploratoryDataset& dataset) {
  auto holdout = dataset.split(false);
  if (holdout.empty()) throw EmptyDataset("holdout split is empty");

  EvalReport rep;
  std::map<std::string, std::vector<std::pair<double, double>>> groups;  // obs -> (pred, label)
  for (const auto* s : holdout) {
    double pred = predict(*s);
    double err = double(s->cost) - pred;
    rep.mse += err * err;
    rep.mae += std::abs(err);
    // Rank what the planner consumes: costs rendered as rounded integers.
    groups[s->obs_text].emplace_back(std::round(pred), double(s->cost));
  }
  rep.mse /= double(holdout.size());
  rep.mae /= double(holdout.size());

  double rho_sum = 0.0;
  int rho_n = 0;
  for (const auto& [obs, pairs] : groups) {
    if (pairs.size() < 2) continue;
    std::vector<double> preds, labels;
    for (const auto& [p, l] : pairs) {
      preds.push_back(p);
      labels.push_back(l);
    }
    bool labels_vary = false;
    for (double l : labels) labels_vary |= l != labels.front();
    if (!labels_vary) continue;
    auto rho = detail::spearman(preds, labels);
    rho_sum += rho.value_or(0.0);  // constant predictions rank nothing
    ++rho_n;
  }
  if (rho_n > 0) {
    rep.rank_correlation = rho_sum / double(rho_n);
    rep.states_ranked = rho_n;
  }
  return rep;
}

inline EvalReport evaluate_utility(const UtilityModel& model, const ExploratoryDataset& dataset) {
  return evaluate_with_predictor(
      [&](const ExplorationSample& s) { return predict_cost(model, s.obs_text, s.action_text); },
      dataset);
}

// ---------------------------------------------------------------------------
// Model file
// ---------------------------------------------------------------------------

inline constexpr int kModelSchemaVersion = 1;

inline void save_model(const UtilityModel& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["type"] = "liet_utility_model";
  j["schema_version"] = kModelSchemaVersion;
  j["featurizer"] = {{"hash_seed", m.featurizer.hash_seed},
                     {"dim", m.featurizer.dim},
                     {"ngram_orders", m.featurizer.ngram_orders}};
  j["target_mean"] = m.target_mean;
  j["target_std"] = m.target_std;
  j["head"] = {{"input_dim", m.head.input_dim}, {"w1", m.head.w1}, {"b1", m.head.b1},
               {"w2", m.head.w2},               {"b2", m.head.b2}, {"w3", m.head.w3},
               {"b3", m.head.b3}};
  j["meta"] = {{"epochs", m.meta.epochs},
               {"train_mse_per_epoch", m.meta.train_mse_per_epoch},
               {"final_train_mse", m.meta.final_train_mse},
               {"holdout_mse", m.meta.holdout_mse},
               {"train_samples", m.meta.train_samples},
               {"holdout_samples", m.meta.holdout_samples}};
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model file '" + path + "'");
  out << j.dump() << "\n";
}

inline UtilityModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("type", "") != "liet_utility_model" ||
      j.value("schema_version", -1) != kModelSchemaVersion)
    throw SchemaVersionMismatch("unexpected model file header in '" + path + "'");
  UtilityModel m;
  m.featurizer.hash_seed = j.at("featurizer").at("hash_seed").get<uint64_t>();
  m.featurizer.dim = j.at("featurizer").at("dim").get<int>();
  m.featurizer.ngram_orders = j.at("featurizer").at("ngram_orders").get<std::vector<int>>();
  m.target_mean = j.at("target_mean").get<double>();
  m.target_std = j.at("target_std").get<double>();
  const auto& h = j.at("head");
  m.head.input_dim = h.at("input_dim").get<int>();
  m.head.w1 = h.at("w1").get<std::vector<double>>();
  m.head.b1 = h.at("b1").get<std::vector<double>>();
  m.head.w2 = h.at("w2").get<std::vector<double>>();
  m.head.b2 = h.at("b2").get<std::vector<double>>();
  m.head.w3 = h.at("w3").get<std::vector<double>>();
  m.head.b3 = h.at("b3").get<double>();
  const auto& meta = j.at("meta");
  m.meta.epochs = meta.at("epochs").get<int>();
  m.meta.train_mse_per_epoch = meta.at("train_mse_per_epoch").get<std::vector<double>>();
  m.meta.final_train_mse = meta.at("final_train_mse").get<double>();
  m.meta.holdout_mse = meta.at("holdout_mse").get<double>();
  m.meta.train_samples = meta.at("train_samples").get<int>();
  m.meta.holdout_samples = meta.at("holdout_samples").get<int>();
  if (m.head.input_dim != m.featurizer.dim || m.head.w1.size() != size_t(kHiddenWidth) * m.head.input_dim)
    throw ConfigError("model file '" + path + "' has inconsistent layer shapes");
  return m;
}

}  // namespace liet::utility
