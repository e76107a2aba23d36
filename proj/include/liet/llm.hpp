#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "liet/errors.hpp"
#include "liet/templates.hpp"

namespace liet::llm {

// ---------------------------------------------------------------------------
// Template rendering
// ---------------------------------------------------------------------------

// Replace every $NAME$ placeholder in a single pass. Substitution is literal:
// placeholder-looking text inside binding values survives verbatim.
inline std::string render_template(const PromptTemplate& tmpl,
                                   const std::map<std::string, std::string>& bindings,
                                   bool strict = true) {
  if (strict) {
    for (const auto& [key, value] : bindings)
      if (!tmpl.required.count(key))
        throw UnknownBinding("binding '" + key + "' is not a placeholder of template '" +
                             tmpl.id + "'");
  }
  std::string out;
  out.reserve(tmpl.body.size() + 256);
  const std::string& body = tmpl.body;
  size_t i = 0;
  std::set<std::string> bound;
  while (i < body.size()) {
    if (body[i] != '$') {
      out.push_back(body[i++]);
      continue;
    }
    size_t j = i + 1;
    while (j < body.size() && (std::isupper(static_cast<unsigned char>(body[j])) || body[j] == '_'))
      ++j;
    if (j < body.size() && body[j] == '$' && j > i + 1) {
      std::string name = body.substr(i + 1, j - i - 1);
      auto it = bindings.find(name);
      if (it == bindings.end()) throw UnboundPlaceholder(name);
      out += it->second;
      bound.insert(name);
      i = j + 1;
    } else {
      out.push_back(body[i++]);
    }
  }
  for (const auto& name : tmpl.required)
    if (!bound.count(name)) throw UnboundPlaceholder(name);
  return out;
}

// ---------------------------------------------------------------------------
// Requests and backend specs
// ---------------------------------------------------------------------------

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.7;
  double top_p = 1.0;
  int max_tokens = 256;
  std::optional<uint64_t> seed_hint;

  void validate() const {
    if (temperature < 0.0 || max_tokens < 1 || top_p <= 0.0)
      throw ConfigError("completion request out of range");
  }
};

struct BackendSpec {
  enum class Kind { Scripted, Http };
  Kind kind = Kind::Scripted;
  std::string ruleset = "default";  // scripted
  // http
  std::string endpoint;   // e.g. http://127.0.0.1:8089/v1/chat/completions
  std::string model;
  std::string auth_env;   // name of the environment variable holding the key
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_base_ms = 100;
  int backoff_ceiling_ms = 5000;
};

struct CompletionResult {
  std::string text;
  int retries = 0;
  long latency_ms = 0;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
  virtual bool deterministic() const { return false; }
  virtual std::string kind() const = 0;
};

// ---------------------------------------------------------------------------
// Scripted backend: a deterministic rule engine over the rendered prompts,
// mirroring the qualitative behavior of an LLM planner (progress, costs,
// labor splits) so the whole loop runs offline.
// ---------------------------------------------------------------------------

namespace scripted {

struct PredicateStatus {
  std::string relation;  // "ON" / "IN"
  std::string object_class;
  std::string target_name;
  int target_id = -1;
  int satisfied = 0;
  int count = 0;
};

struct Candidate {
  std::string text;          // rendered action text, without the cost suffix
  std::string full_line;     // as it appeared in the prompt
  std::string verb;          // walktowards / grasp / ...
  std::string object_name;   // first <name>
  int object_id = -1;        // first (id)
  std::string target_name;   // second <name>
  int target_id = -1;        // second (id)
  std::optional<long> cost;  // parsed est. cost annotation
};

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

inline std::optional<long> parse_long(const std::string& s, size_t pos, size_t* end = nullptr) {
  size_t i = pos;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  size_t digits = i;
  long value = 0;
  while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) {
    value = value * 10 + (s[digits] - '0');
    ++digits;
  }
  if (digits == i) return std::nullopt;
  if (end) *end = digits;
  return value;
}

// First "<name> (id)" reference at or after `pos`.
inline bool next_ref(const std::string& s, size_t pos, std::string* name, int* id, size_t* after) {
  size_t lt = s.find('<', pos);
  while (lt != std::string::npos) {
    size_t gt = s.find('>', lt);
    if (gt == std::string::npos) return false;
    size_t paren = s.find('(', gt);
    if (paren != std::string::npos) {
      size_t end = 0;
      auto id_val = parse_long(s, paren + 1, &end);
      if (id_val && end < s.size() && s[end] == ')') {
        *name = s.substr(lt + 1, gt - lt - 1);
        *id = static_cast<int>(*id_val);
        *after = end + 1;
        return true;
      }
    }
    lt = s.find('<', lt + 1);
  }
  return false;
}

inline std::string section_line(const std::vector<std::string>& lines, const std::string& prefix) {
  for (const auto& line : lines)
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  return "";
}

// "k/m of REL(class, <target> (id))" entries from the progress line.
inline std::vector<PredicateStatus> parse_progress(const std::string& line) {
  std::vector<PredicateStatus> out;
  size_t pos = 0;
  while (pos < line.size()) {
    size_t slash = line.find('/', pos);
    if (slash == std::string::npos) break;
    size_t k_start = slash;
    while (k_start > 0 && std::isdigit(static_cast<unsigned char>(line[k_start - 1]))) --k_start;
    if (k_start == slash) { pos = slash + 1; continue; }
    PredicateStatus p;
    p.satisfied = static_cast<int>(*parse_long(line, k_start));
    size_t end = 0;
    auto count = parse_long(line, slash + 1, &end);
    if (!count) { pos = slash + 1; continue; }
    p.count = static_cast<int>(*count);
    size_t rel_pos = line.find(" of ", end);
    if (rel_pos == std::string::npos) break;
    size_t paren = line.find('(', rel_pos);
    if (paren == std::string::npos) break;
    p.relation = line.substr(rel_pos + 4, paren - rel_pos - 4);
    size_t comma = line.find(',', paren);
    if (comma == std::string::npos) break;
    p.object_class = line.substr(paren + 1, comma - paren - 1);
    size_t after = 0;
    if (!next_ref(line, comma, &p.target_name, &p.target_id, &after)) break;
    out.push_back(p);
    pos = after;
  }
  return out;
}

inline Candidate parse_candidate(const std::string& line) {
  Candidate c;
  c.full_line = line;
  std::string body = line;
  if (body.rfind("- ", 0) == 0) body = body.substr(2);
  // strip the cost annotation
  size_t cost_pos = body.rfind(" (est. cost: ");
  if (cost_pos != std::string::npos) {
    c.cost = parse_long(body, cost_pos + 13);
    body = body.substr(0, cost_pos);
  }
  c.text = body;
  size_t rb = body.find(']');
  if (body.size() > 1 && body[0] == '[' && rb != std::string::npos)
    c.verb = body.substr(1, rb - 1);
  size_t after = 0;
  if (next_ref(body, 0, &c.object_name, &c.object_id, &after))
    next_ref(body, after, &c.target_name, &c.target_id, &after);
  return c;
}

// The planner rule: among the candidates that advance an unsatisfied
// predicate (tiered: put > open goal target > grasp needed > walk to target
// or needed object > open unexplored container > walk to a fresh room), pick
// the one with minimal annotated cost, tie-breaking lexicographically.
inline std::string plan(const std::string& prompt) {
  auto lines = split_lines(prompt);
  auto progress = parse_progress(section_line(lines, "Progress: "));
  std::string history = section_line(lines, "Previous actions: ");

  std::vector<Candidate> candidates;
  bool in_actions = false;
  for (const auto& line : lines) {
    if (line.rfind("Available actions:", 0) == 0) { in_actions = true; continue; }
    if (line.rfind("Answer:", 0) == 0) in_actions = false;
    if (in_actions && line.rfind("- ", 0) == 0) candidates.push_back(parse_candidate(line));
  }
  if (candidates.empty()) return "[noop]";

  std::set<std::string> needed_classes;
  std::map<int, std::string> goal_targets;  // id -> relation needed
  for (const auto& p : progress) {
    if (p.satisfied >= p.count) continue;
    needed_classes.insert(p.object_class);
    goal_targets[p.target_id] = p.relation;
  }

  // Infer carried goal objects from the action-history excerpt.
  std::set<std::string> carried_classes;
  {
    auto entries = split_lines(history);  // history is one line; split on ", ["
    std::vector<std::string> parts;
    size_t pos = 0;
    while (pos < history.size()) {
      size_t next = history.find(", [", pos);
      if (next == std::string::npos) {
        parts.push_back(history.substr(pos));
        break;
      }
      parts.push_back(history.substr(pos, next - pos));
      pos = next + 2;
    }
    std::map<int, std::string> carried;
    for (const auto& part : parts) {
      if (part.find("(failed)") != std::string::npos) continue;
      Candidate c = parse_candidate(part);
      if (c.verb == "grasp" && c.object_id >= 0) carried[c.object_id] = c.object_name;
      if ((c.verb == "putin" || c.verb == "puton") && c.object_id >= 0) carried.erase(c.object_id);
    }
    for (const auto& [id, cls] : carried) carried_classes.insert(cls);
  }
  bool carrying_needed = false;
  for (const auto& cls : carried_classes) carrying_needed |= needed_classes.count(cls) > 0;

  auto visited_recently = [&](const std::string& ref_text) {
    return history.find(ref_text) != std::string::npos;
  };

  // Openable fixtures worth exploring when nothing else advances the goal.
  static const std::set<std::string> kOpenableFixtures = {
      "fridge", "dishwasher", "kitchencabinet", "cabinet", "microwave", "oven", "stove"};

  auto tier_of = [&](const Candidate& c) -> int {
    if (c.verb == "putin" || c.verb == "puton") {
      auto it = goal_targets.find(c.target_id);
      if (it != goal_targets.end() && needed_classes.count(c.object_name)) {
        const std::string& rel = it->second;
        if ((c.verb == "putin" && rel == "IN") || (c.verb == "puton" && rel == "ON")) return 0;
      }
      return 9;
    }
    if (c.verb == "open") {
      if (goal_targets.count(c.object_id)) return 1;
      return 5;
    }
    if (c.verb == "grasp") {
      if (needed_classes.count(c.object_name)) return 2;
      return 9;
    }
    if (c.verb == "walktowards") {
      if (c.object_id >= 0 && goal_targets.count(c.object_id) && carrying_needed) return 3;
      if (c.object_id >= 0 && needed_classes.count(c.object_name)) return 3;
      if (c.object_id >= 0 && kOpenableFixtures.count(c.object_name) &&
          !visited_recently(c.text))
        return 6;
      if (c.object_id < 0 && !visited_recently(c.text)) return 7;
      return 8;
    }
    return 9;
  };

  const Candidate* best = nullptr;
  int best_tier = 99;
  for (const auto& c : candidates) {
    int tier = tier_of(c);
    if (tier > best_tier) continue;
    if (tier < best_tier) {
      best = &c;
      best_tier = tier;
      continue;
    }
    long c_cost = c.cost.value_or(0);
    long b_cost = best->cost.value_or(0);
    if (c_cost < b_cost || (c_cost == b_cost && c.text < best->text)) best = &c;
  }
  if (!best) return candidates.front().text;
  return best->text;
}

// The message rule: a short status plus a deterministic labor split.
inline std::string generate_message(const std::string& prompt) {
  auto lines = split_lines(prompt);
  std::string name = "Agent";
  if (!lines.empty() && lines[0].rfind("I'm ", 0) == 0) {
    size_t dot = lines[0].find('.');
    if (dot != std::string::npos) name = lines[0].substr(4, dot - 4);
  }
  std::string oppo = "teammate";
  {
    size_t f = lines.empty() ? std::string::npos : lines[0].find("friend ");
    if (f != std::string::npos) {
      size_t t = lines[0].find(" together", f);
      if (t != std::string::npos) oppo = lines[0].substr(f + 7, t - f - 7);
    }
  }
  auto progress = parse_progress(section_line(lines, "Progress: "));
  int sat = 0, total = 0;
  for (const auto& p : progress) {
    sat += p.satisfied;
    total += p.count;
  }
  // Opening message if the dialogue has nothing beyond the seeded greetings.
  int quoted_lines = 0;
  for (const auto& line : lines)
    if (line.find(": \"") != std::string::npos) ++quoted_lines;
  bool opener = quoted_lines <= 2;

  std::ostringstream out;
  if (opener) {
    bool even = !name.empty() && (name == "Alice" || name == "Charlie" || name == "Eve");
    out << "Hi " << oppo << ", progress is " << sat << "/" << total << ". I will search the "
        << (even ? "kitchen and livingroom" : "bedroom and office") << "; please cover the "
        << (even ? "bedroom and office" : "kitchen and livingroom")
        << ". I will report any goal objects I find.";
  } else {
    out << "Update from " << name << ": " << sat << "/" << total
        << " subgoals satisfied. I will keep working on the remaining goals; tell me if you need "
           "help.";
  }
  return out.str();
}

// The reflector rule: tips reacting to missing fields in the last message.
inline std::string reflect(const std::string& prompt) {
  auto lines = split_lines(prompt);
  std::string last_message;
  for (const auto& line : lines) {
    size_t q = line.find(": \"");
    if (q != std::string::npos && line.back() == '"') last_message = line.substr(q + 3);
  }
  std::string current;
  bool in_list = false;
  for (const auto& line : lines) {
    if (line.rfind("-----", 0) == 0) {
      if (in_list) break;
      in_list = true;
      continue;
    }
    if (in_list) current += (current.empty() ? "" : "\n") + line;
  }

  std::vector<std::string> tips;
  auto add_tip = [&](const std::string& tip) {
    if (current.find(tip) == std::string::npos) tips.push_back(tip);
  };
  bool has_id = false;
  for (size_t i = 0; i + 1 < last_message.size(); ++i)
    if (last_message[i] == '(' && std::isdigit(static_cast<unsigned char>(last_message[i + 1])))
      has_id = true;
  if (!has_id) add_tip("Include object locations with <name> (id) references.");
  if (last_message.find('/') == std::string::npos) add_tip("Share your progress counts in every message.");
  if (last_message.find("I will") == std::string::npos) add_tip("Propose a clear division of labor.");
  add_tip("Keep messages brief, concrete and non-repetitive.");

  std::string updated = current;
  for (const auto& tip : tips) {
    if (!updated.empty()) updated += " ";
    updated += tip;
  }
  return "-------------------------\n" + updated + "\n-------------------------";
}

}  // namespace scripted

class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::string ruleset = "default") : ruleset_(std::move(ruleset)) {
    if (ruleset_ != "default")
      throw ConfigError("unknown scripted ruleset '" + ruleset_ + "'");
  }

  CompletionResult complete(const CompletionRequest& request) override {
    request.validate();
    const std::string& p = request.prompt;
    std::string reply;
    if (p.find("choose the best available action") != std::string::npos)
      reply = scripted::plan(p);
    else if (p.find("generate a short message") != std::string::npos)
      reply = scripted::generate_message(p);
    else if (p.find("update the knowledge list") != std::string::npos)
      reply = scripted::reflect(p);
    else
      reply = "[noop]";
    return {reply, 0, 0};
  }

  bool deterministic() const override { return true; }
  std::string kind() const override { return "scripted"; }

 private:
  std::string ruleset_;
};

// ---------------------------------------------------------------------------
// Transcript tap
// ---------------------------------------------------------------------------

struct TranscriptEntry {
  std::string prompt;
  std::string reply;
  int retries = 0;
  long latency_ms = 0;
  std::string backend_kind;
};

class TranscriptTap : public Backend {
 public:
  explicit TranscriptTap(std::shared_ptr<Backend> inner) : inner_(std::move(inner)) {}

  CompletionResult complete(const CompletionRequest& request) override {
    auto result = inner_->complete(request);
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.push_back({request.prompt, result.text, result.retries,
                        inner_->deterministic() ? 0 : result.latency_ms, inner_->kind()});
    return result;
  }

  bool deterministic() const override { return inner_->deterministic(); }
  std::string kind() const override { return inner_->kind(); }

  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  void clear() { entries_.clear(); }

 private:
  std::shared_ptr<Backend> inner_;
  std::vector<TranscriptEntry> entries_;
  std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// HTTP backend (chat-completions wire format)
// ---------------------------------------------------------------------------

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(BackendSpec spec);
  CompletionResult complete(const CompletionRequest& request) override;
  std::string kind() const override { return "http"; }

 private:
  BackendSpec spec_;
  std::string host_port_;  // scheme://host:port
  std::string path_;
};

inline std::shared_ptr<Backend> make_backend(const BackendSpec& spec) {
  if (spec.kind == BackendSpec::Kind::Scripted)
    return std::make_shared<ScriptedBackend>(spec.ruleset);
  return std::make_shared<HttpBackend>(spec);
}

// Single-call convenience wrapper over a backend spec.
inline std::string complete(const BackendSpec& spec, const CompletionRequest& request) {
  return make_backend(spec)->complete(request).text;
}

}  // namespace liet::llm

#include "liet/llm_http.hpp"
