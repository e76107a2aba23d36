#pragma once

#include <cctype>
#include <cstdint>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "liet/errors.hpp"

// Feature hashing for (observation, action) text pairs: unigrams and bigrams
// of the lowercased token stream, signed hashing into a fixed number of
// buckets, L2-normalized. Deterministic for a fixed hash seed.
namespace liet::utility {

struct FeaturizerSpec {
  uint64_t hash_seed = 0x9d2be4a15ca3f007ull;
  int dim = 2048;
  std::vector<int> ngram_orders = {1, 2};

  friend bool operator==(const FeaturizerSpec&, const FeaturizerSpec&) = default;
};

struct FeatureVector {
  std::vector<double> values;  // dense, size = spec.dim
};

namespace detail {

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

inline uint64_t hash_bytes(std::string_view s, uint64_t seed) {
  uint64_t h = seed ^ 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  // final mix (splitmix64 tail)
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

}  // namespace detail

namespace detail {

inline void hash_grams_into(const FeaturizerSpec& spec, const std::vector<std::string>& tokens,
                            std::vector<double>& acc) {
  for (int order : spec.ngram_orders) {
    if (order < 1 || tokens.size() < static_cast<size_t>(order)) continue;
    for (size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (int k = 1; k < order; ++k) {
        gram.push_back('\x1f');
        gram += tokens[i + k];
      }
      uint64_t h = hash_bytes(gram, spec.hash_seed);
      size_t bucket = static_cast<size_t>(h % static_cast<uint64_t>(spec.dim));
      double sign = (h >> 63) ? 1.0 : -1.0;
      acc[bucket] += sign;
    }
  }
}

}  // namespace detail

// Hash the token stream of `obs_text` + "[SEP]" + `action_text`. Hashing is
// section-balanced (vowpal-style namespace weighting): every observation
// line and the action text contribute equal mass, so the short action part
// is not swamped by long object listings. The result is L2-normalized.
inline FeatureVector featurize(const FeaturizerSpec& spec, const std::string& obs_text,
                               const std::string& action_text) {
  if (obs_text.empty() || action_text.empty())
    throw Error("featurize: texts must be nonempty");

  std::vector<std::vector<std::string>> sections;
  size_t start = 0;
  while (start <= obs_text.size()) {
    size_t end = obs_text.find('\n', start);
    if (end == std::string::npos) end = obs_text.size();
    auto tokens = detail::tokenize(std::string_view(obs_text).substr(start, end - start));
    if (!tokens.empty()) sections.push_back(std::move(tokens));
    start = end + 1;
  }
  if (sections.empty()) sections.push_back({});
  sections.back().push_back("[sep]");
  auto action_tokens = detail::tokenize(action_text);
  sections.push_back(std::move(action_tokens));

  FeatureVector v;
  v.values.assign(spec.dim, 0.0);
  std::vector<double> section_acc(spec.dim, 0.0);
  for (const auto& tokens : sections) {
    std::fill(section_acc.begin(), section_acc.end(), 0.0);
    detail::hash_grams_into(spec, tokens, section_acc);
    double norm2 = 0.0;
    for (double x : section_acc) norm2 += x * x;
    if (norm2 <= 0.0) continue;
    double inv = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < spec.dim; ++i) v.values[i] += section_acc[i] * inv;
  }
  double norm2 = 0.0;
  for (double x : v.values) norm2 += x * x;
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v.values) x *= inv;
  }
  return v;
}

}  // namespace liet::utility
