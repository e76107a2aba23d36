#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "liet/explore.hpp"
#include "liet/utility.hpp"
#include "test_support.hpp"

using namespace liet;
using namespace liet::utility;

namespace {

// Every parameter of a value head, for finite-difference sweeps.
std::vector<double*> parameter_pointers(ValueHead& h) {
  std::vector<double*> out;
  for (auto& x : h.w1) out.push_back(&x);
  for (auto& x : h.b1) out.push_back(&x);
  for (auto& x : h.w2) out.push_back(&x);
  for (auto& x : h.b2) out.push_back(&x);
  for (auto& x : h.w3) out.push_back(&x);
  out.push_back(&h.b3);
  return out;
}

double batch_mse(const ValueHead& h, const std::vector<std::vector<double>>& xs,
                 const std::vector<double>& ys) {
  double acc = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double d = forward(h, xs[i]).y - ys[i];
    acc += d * d;
  }
  return acc / double(xs.size());
}

Gradients analytic_batch_gradient(const ValueHead& h, const std::vector<std::vector<double>>& xs,
                                  const std::vector<double>& ys) {
  Gradients g = Gradients::zeros(h);
  double inv_n = 1.0 / double(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    auto t = forward(h, xs[i]);
    backward(h, xs[i], t, 2.0 * (t.y - ys[i]) * inv_n, g);
  }
  return g;
}

std::vector<double> flatten(const Gradients& g) {
  std::vector<double> out;
  for (double x : g.w1) out.push_back(x);
  for (double x : g.b1) out.push_back(x);
  for (double x : g.w2) out.push_back(x);
  for (double x : g.b2) out.push_back(x);
  for (double x : g.w3) out.push_back(x);
  out.push_back(g.b3);
  return out;
}

// One random small instance. Compares the analytic gradient against central
// finite differences: vector-norm relative error, plus a per-component check
// floored at unit scale (the difference quotient of an O(10^2) loss carries
// ~1e-9 of cancellation noise, so raw ratios are meaningless for near-zero
// components).
struct GradCheckResult {
  double norm_rel_error = 0.0;
  double worst_component = 0.0;  // |a - n| / max(1, |a| + |n|)
};

GradCheckResult gradcheck(uint64_t seed) {
  const int dim = 16, n_samples = 8;
  Rng rng(seed);
  ValueHead h = ValueHead::init(dim, seed);
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < n_samples; ++i) {
    std::vector<double> x(dim);
    double norm2 = 0;
    for (auto& v : x) {
      v = rng.real(-1, 1);
      norm2 += v * v;
    }
    for (auto& v : x) v /= std::sqrt(norm2);
    xs.push_back(x);
    ys.push_back(1.0 + rng.real() * 9.0);
  }
  auto analytic = flatten(analytic_batch_gradient(h, xs, ys));
  auto params = parameter_pointers(h);
  GradCheckResult res;
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  const double eps = 1e-5;
  for (size_t p = 0; p < params.size(); ++p) {
    double orig = *params[p];
    *params[p] = orig + eps;
    double up = batch_mse(h, xs, ys);
    *params[p] = orig - eps;
    double down = batch_mse(h, xs, ys);
    *params[p] = orig;
    double numeric = (up - down) / (2 * eps);
    diff2 += (analytic[p] - numeric) * (analytic[p] - numeric);
    a2 += analytic[p] * analytic[p];
    n2 += numeric * numeric;
    double comp = std::abs(analytic[p] - numeric) /
                  std::max(1.0, std::abs(analytic[p]) + std::abs(numeric));
    res.worst_component = std::max(res.worst_component, comp);
  }
  res.norm_rel_error = std::sqrt(diff2) / std::max(1e-12, std::sqrt(a2) + std::sqrt(n2));
  return res;
}

ExploratoryDataset tiny_dataset() {
  // Two-episode synthetic dataset with varied texts.
  ExploratoryDataset ds;
  const char* actions[] = {"[grasp] <apple> (31)", "[walktowards] <office> (4)",
                           "[putin] <plate> (12) in <dishwasher> (5)", "[noop]",
                           "[walktowards] <kitchen> (2)"};
  for (int e = 0; e < 2; ++e) {
    for (int i = 0; i < 24; ++i) {
      ExplorationSample s;
      s.obs_text = "I am Alice. I am in <room> (" + std::to_string(e) + ") at cell (" +
                   std::to_string(i % 6) + ", " + std::to_string(i / 6) + "). My hands are empty.";
      s.action_text = actions[i % 5];
      s.cost = 1 + (i * 7 + e * 3) % 9;
      s.episode_id = e;
      ds.samples.push_back(s);
    }
  }
  assign_split(ds, 4);
  return ds;
}

}  // namespace

TEST_CASE("featurize is deterministic and L2-normalized") {
  FeaturizerSpec spec;
  auto a = featurize(spec, "I am in the kitchen", "[grasp] <apple> (31)");
  auto b = featurize(spec, "I am in the kitchen", "[grasp] <apple> (31)");
  CHECK(a.values == b.values);
  double norm2 = 0;
  for (double x : a.values) norm2 += x * x;
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("featurize distinguishes actions at a fixed observation") {
  FeaturizerSpec spec;
  auto a = featurize(spec, "I am in the kitchen", "[grasp] <apple> (31)");
  auto b = featurize(spec, "I am in the kitchen", "[grasp] <plate> (12)");
  CHECK(a.values != b.values);
}

TEST_CASE("featurize rejects empty inputs") {
  FeaturizerSpec spec;
  CHECK_THROWS(featurize(spec, "", "[noop]"));
  CHECK_THROWS(featurize(spec, "obs", ""));
}

TEST_CASE("analytic gradients match central finite differences") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto res = gradcheck(seed);
    CHECK(res.norm_rel_error < 1e-4);
    CHECK(res.worst_component < 1e-4);
  }
}

TEST_CASE("trainer learns a constant target to near-zero MSE") {
  ExploratoryDataset ds;
  for (int i = 0; i < 64; ++i) {
    ExplorationSample s;
    s.obs_text = "obs variant " + std::to_string(i % 8);
    s.action_text = "action variant " + std::to_string(i % 4);
    s.cost = 3;
    s.episode_id = i % 4;
    ds.samples.push_back(s);
  }
  assign_split(ds, 1);
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 16;
  cfg.feature_dim = 256;
  cfg.seed = 2;
  auto model = train_utility(ds, cfg);
  CHECK(model.meta.final_train_mse < 1e-3);
}

TEST_CASE("per-epoch train MSE does not regress from epoch 1 to the last") {
  auto suite = tasks::suite_by_id("wash_dishes");
  auto ds = collect_exploratory_dataset(suite, 2, 5);
  TrainConfig cfg;
  cfg.epochs = 40;
  auto model = train_utility(ds, cfg);
  REQUIRE(model.meta.train_mse_per_epoch.size() == 40);
  CHECK(model.meta.train_mse_per_epoch.back() <= model.meta.train_mse_per_epoch.front());
}

TEST_CASE("training is bit-deterministic for a fixed dataset and seed") {
  auto ds = tiny_dataset();
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.feature_dim = 128;
  auto m1 = train_utility(ds, cfg);
  auto m2 = train_utility(ds, cfg);
  CHECK(m1.head.w1 == m2.head.w1);
  CHECK(m1.head.w2 == m2.head.w2);
  CHECK(m1.head.w3 == m2.head.w3);
  CHECK(m1.head.b3 == m2.head.b3);
}

TEST_CASE("sample order never affects training results") {
  auto ds = tiny_dataset();
  auto shuffled = ds;
  std::reverse(shuffled.samples.begin(), shuffled.samples.end());
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.feature_dim = 128;
  auto m1 = train_utility(ds, cfg);
  auto m2 = train_utility(shuffled, cfg);
  CHECK(std::abs(m1.meta.holdout_mse - m2.meta.holdout_mse) < 1e-9);
  CHECK(m1.head.w1 == m2.head.w1);
}

TEST_CASE("predict_cost is pure and clamped at one") {
  auto ds = tiny_dataset();
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.feature_dim = 128;
  auto model = train_utility(ds, cfg);
  double p1 = predict_cost(model, "some observation", "[noop]");
  double p2 = predict_cost(model, "some observation", "[noop]");
  CHECK(p1 == p2);
  CHECK(p1 >= 1.0);
  // A model forced far negative still clamps.
  model.target_mean = -100.0;
  CHECK(predict_cost(model, "some observation", "[noop]") == 1.0);
}

TEST_CASE("a tiny memorizable set is predicted within 0.5 of each label") {
  ExploratoryDataset ds;
  const char* rooms[] = {"kitchen", "office", "bedroom", "livingroom", "bathroom"};
  for (int i = 0; i < 10; ++i) {
    ExplorationSample s;
    s.obs_text = std::string("I am in the ") + rooms[i % 5] + " at cell (" + std::to_string(i) +
                 ", " + std::to_string(2 * i) + ").";
    s.action_text = "[walktowards] <target" + std::to_string(i) + "> (" + std::to_string(100 + i) + ")";
    s.cost = 1 + i % 7;
    s.episode_id = 0;
    ds.samples.push_back(s);
  }
  assign_split(ds, 1);  // one episode: all train
  REQUIRE(ds.holdout_episodes.empty());
  TrainConfig cfg;
  cfg.epochs = 800;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 10;
  cfg.weight_decay = 0.01;
  cfg.feature_dim = 512;
  auto model = train_utility(ds, cfg);
  for (const auto& s : ds.samples) {
    double pred = predict_cost(model, s.obs_text, s.action_text);
    CHECK(std::abs(pred - double(s.cost)) < 0.5);
  }
}

TEST_CASE("train rejects an empty train split") {
  ExploratoryDataset ds;
  CHECK_THROWS_AS(train_utility(ds, TrainConfig{}), EmptyDataset);
}

TEST_CASE("evaluate: a ground-truth oracle scores MSE 0 and rho 1") {
  auto suite = tasks::suite_by_id("setup_dinner_table");
  auto ds = collect_exploratory_dataset(suite, 5, 9);
  auto rep = evaluate_with_predictor([](const ExplorationSample& s) { return double(s.cost); }, ds);
  CHECK(rep.mse == doctest::Approx(0.0));
  REQUIRE(rep.rank_correlation.has_value());
  CHECK(*rep.rank_correlation == doctest::Approx(1.0));
  CHECK(rep.states_ranked > 0);
}

TEST_CASE("evaluate: a constant predictor cannot beat the label variance") {
  auto suite = tasks::suite_by_id("setup_dinner_table");
  auto ds = collect_exploratory_dataset(suite, 5, 9);
  auto holdout = ds.split(false);
  REQUIRE(!holdout.empty());
  double mean = 0;
  for (auto* s : holdout) mean += double(s->cost);
  mean /= double(holdout.size());
  double var = 0;
  for (auto* s : holdout) var += (double(s->cost) - mean) * (double(s->cost) - mean);
  var /= double(holdout.size());
  auto rep = evaluate_with_predictor([&](const ExplorationSample&) { return mean; }, ds);
  CHECK(rep.mse >= var - 1e-9);
}

TEST_CASE("evaluate: mean predictor on labels {2,4} scores MSE 1") {
  ExploratoryDataset ds;
  for (int i = 0; i < 2; ++i) {
    ExplorationSample s;
    s.obs_text = "state";
    s.action_text = i == 0 ? "[noop]" : "[grasp] <apple> (31)";
    s.cost = i == 0 ? 2 : 4;
    s.episode_id = 1;
    ds.samples.push_back(s);
  }
  ds.train_episodes = {0};
  ds.holdout_episodes = {1};
  auto rep = evaluate_with_predictor([](const ExplorationSample&) { return 3.0; }, ds);
  CHECK(rep.mse == doctest::Approx(1.0));
  // Constant predictions on a varying-label state group contribute rho 0.
  REQUIRE(rep.rank_correlation.has_value());
  CHECK(*rep.rank_correlation == doctest::Approx(0.0));
}

TEST_CASE("evaluate: degenerate holdout with identical labels reports MSE only") {
  ExploratoryDataset ds;
  for (int i = 0; i < 4; ++i) {
    ExplorationSample s;
    s.obs_text = "state";
    s.action_text = "[action" + std::to_string(i) + "]";
    s.cost = 5;
    s.episode_id = 1;
    ds.samples.push_back(s);
  }
  ds.train_episodes = {0};
  ds.holdout_episodes = {1};
  auto rep = evaluate_with_predictor([](const ExplorationSample&) { return 5.0; }, ds);
  CHECK(!rep.rank_correlation.has_value());
  CHECK(rep.mse == doctest::Approx(0.0));
}

TEST_CASE("collector: episode counts, split hygiene, and label fidelity") {
  auto suite = tasks::suite_by_id("cwah");
  auto ds = collect_exploratory_dataset(suite, 2, 13);
  std::set<int> episodes;
  for (const auto& s : ds.samples) episodes.insert(s.episode_id);
  CHECK(episodes.size() == 10);

  for (int e : ds.train_episodes) CHECK(!ds.holdout_episodes.count(e));
  CHECK(ds.train_episodes.size() + ds.holdout_episodes.size() == 10);
  CHECK(ds.train_episodes.size() == 8);

  for (const auto& s : ds.samples) {
    CHECK(s.cost >= 1);
    CHECK(!s.obs_text.empty());
    CHECK(!s.action_text.empty());
  }
}

TEST_CASE("collector: one episode lands wholly in train") {
  auto suite = tasks::suite_by_id("wash_dishes");
  auto ds = collect_exploratory_dataset(suite, 1, 3);
  CHECK(ds.train_episodes.size() == 1);
  CHECK(ds.holdout_episodes.empty());
}

TEST_CASE("collector: identical seeds reproduce identical datasets") {
  auto suite = tasks::suite_by_id("wash_dishes");
  auto ds1 = collect_exploratory_dataset(suite, 2, 21);
  auto ds2 = collect_exploratory_dataset(suite, 2, 21);
  REQUIRE(ds1.samples.size() == ds2.samples.size());
  for (size_t i = 0; i < ds1.samples.size(); ++i) {
    CHECK(ds1.samples[i].obs_text == ds2.samples[i].obs_text);
    CHECK(ds1.samples[i].action_text == ds2.samples[i].action_text);
    CHECK(ds1.samples[i].cost == ds2.samples[i].cost);
  }
}

TEST_CASE("dataset files round-trip") {
  auto suite = tasks::suite_by_id("wash_dishes");
  auto ds = collect_exploratory_dataset(suite, 2, 17);
  auto path = std::filesystem::temp_directory_path() / "liet_test_dataset.jsonl";
  save_dataset(ds, path.string());
  auto loaded = load_dataset(path.string());
  REQUIRE(loaded.samples.size() == ds.samples.size());
  CHECK(loaded.train_episodes == ds.train_episodes);
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(loaded.samples[i].obs_text == ds.samples[i].obs_text);
    CHECK(loaded.samples[i].cost == ds.samples[i].cost);
  }
  std::filesystem::remove(path);
}

TEST_CASE("model files round-trip bit-exactly") {
  auto ds = tiny_dataset();
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.feature_dim = 128;
  auto model = train_utility(ds, cfg);
  auto path = std::filesystem::temp_directory_path() / "liet_test_model.json";
  save_model(model, path.string());
  auto loaded = load_model(path.string());
  CHECK(loaded.head.w1 == model.head.w1);
  CHECK(loaded.head.b3 == model.head.b3);
  CHECK(loaded.target_mean == model.target_mean);
  CHECK(loaded.featurizer.hash_seed == model.featurizer.hash_seed);
  CHECK(predict_cost(loaded, "obs text", "[noop]") == predict_cost(model, "obs text", "[noop]"));
  std::filesystem::remove(path);
}
