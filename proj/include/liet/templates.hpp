#pragma once

#include <set>
#include <string>
#include <vector>

#include "liet/errors.hpp"

// Prompt templates for the planner, message generator, and reflector.
// Placeholders use the $NAME$ form. The household set is the canonical one;
// the transport set substitutes task phrasing and the container rule.
namespace liet::llm {

enum class TemplateKind { Planner, MessageGenerator, Reflector };

struct PromptTemplate {
  std::string id;  // registry key, e.g. "planner_cwah"
  TemplateKind kind = TemplateKind::Planner;
  std::string body;
  std::set<std::string> required;  // placeholder names without the $ fences
};

namespace detail {

inline constexpr const char* kPlannerCwah =
    "I'm $AGENT_NAME$. I'm in a hurry to finish the housework with my teammate $OPPO_NAME$ "
    "together. Given our shared goal, dialogue history, and my progress and previous actions, "
    "please help me choose the best available action to achieve the goal as soon as possible.\n"
    "Note that I can hold two objects at a time and there are no costs for holding objects. "
    "All objects are denoted as <name> (id), such as <table> (712).\n"
    "\n"
    "Goal: $GOAL$\n"
    "Progress: $PROGRESS$\n"
    "Dialogue history:\n"
    "Alice: \"Hi, I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "Bob: \"Thanks! I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "$DIALOGUE_HISTORY$\n"
    "Previous actions: $ACTION_HISTORY$\n"
    "Available actions: $AVAILABLE_ACTIONS$\n"
    "Answer:";

inline constexpr const char* kMessageGeneratorCwah =
    "I'm $AGENT_NAME$. I'm in a hurry to finish the housework with my friend $OPPO_NAME$ "
    "together. Given our shared goal, dialogue history, and my progress and previous actions, "
    "please help me generate a short message to send to $OPPO_NAME$ to help us achieve the goal "
    "as soon as possible.\n"
    "Note that I can hold two objects at a time and there are no costs for holding objects. "
    "All objects are denoted as <name> (id), such as <table> (712).\n"
    "\n"
    "Goal: $GOAL$\n"
    "Progress: $PROGRESS$\n"
    "Previous actions: $ACTION_HISTORY$\n"
    "Dialogue history:\n"
    "Alice: \"Hi, I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "Bob: \"Thanks! I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "$DIALOGUE_HISTORY$\n"
    "Here are some hints to help you generate more useful messages based on previous experiences:\n"
    "$KNOWLEDGE_LIST$\n"
    "Note: The generated message should be accurate, helpful and brief. Do not generate "
    "repetitive messages and please output the message to send only.\n"
    "Message:";

inline constexpr const char* kReflectorCwah =
    "I'm $AGENT_NAME$. I'm in a hurry to finish the housework with my teammate $OPPO_NAME$ "
    "together.\n"
    "Note that I can hold two objects at a time and there are no costs for holding objects. "
    "All objects are denoted as <name> (id), such as <table> (712).\n"
    "\n"
    "Given a new piece of decision making experience based on our shared goal, my progress, "
    "previous actions, and our current plans, please reflect on the dialogue history and update "
    "the knowledge list to better guide future effective communication in cooperative planning.\n"
    "\n"
    "Goal: $GOAL$\n"
    "Progress: $PROGRESS$\n"
    "Dialogue history:\n"
    "Alice: \"Hi, I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "Bob: \"Thanks! I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "$DIALOGUE_HISTORY$\n"
    "Previous actions: $ACTION_HISTORY$\n"
    "Current plans: $CURRENT_PLANS$\n"
    "Knowledge list:\n"
    "-------------------------\n"
    "$KNOWLEDGE_LIST$\n"
    "-------------------------\n"
    "Note: Please help update the knowledge list within the '-----'. The updated list should "
    "integrate insights from both new experiences and previously accumulated knowledge, aiming "
    "to provide hints to enhance future communication message exchange between teammates. This "
    "knowledge list is shared among all teammates to enable effective communication to improve "
    "decision-making during our decentralized planning. Keep the list concise and informative, "
    "not exceeding 100 words.";

// Transport variants: same structure, transport phrasing, container rule.

inline constexpr const char* kPlannerTdw =
    "I'm $AGENT_NAME$. I'm in a hurry to transport the target objects to the goal position with "
    "my teammate $OPPO_NAME$ together. Given our shared goal, dialogue history, and my progress "
    "and previous actions, please help me choose the best available action to achieve the goal "
    "as soon as possible.\n"
    "Note that I can hold two objects at a time and a container can hold up to three objects. "
    "All objects are denoted as <name> (id), such as <table> (712).\n"
    "\n"
    "Goal: $GOAL$\n"
    "Progress: $PROGRESS$\n"
    "Dialogue history:\n"
    "Alice: \"Hi, I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "Bob: \"Thanks! I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "$DIALOGUE_HISTORY$\n"
    "Previous actions: $ACTION_HISTORY$\n"
    "Available actions: $AVAILABLE_ACTIONS$\n"
    "Answer:";

inline constexpr const char* kMessageGeneratorTdw =
    "I'm $AGENT_NAME$. I'm in a hurry to transport the target objects to the goal position with "
    "my friend $OPPO_NAME$ together. Given our shared goal, dialogue history, and my progress "
    "and previous actions, please help me generate a short message to send to $OPPO_NAME$ to "
    "help us achieve the goal as soon as possible.\n"
    "Note that I can hold two objects at a time and a container can hold up to three objects. "
    "All objects are denoted as <name> (id), such as <table> (712).\n"
    "\n"
    "Goal: $GOAL$\n"
    "Progress: $PROGRESS$\n"
    "Previous actions: $ACTION_HISTORY$\n"
    "Dialogue history:\n"
    "Alice: \"Hi, I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "Bob: \"Thanks! I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "$DIALOGUE_HISTORY$\n"
    "Here are some hints to help you generate more useful messages based on previous experiences:\n"
    "$KNOWLEDGE_LIST$\n"
    "Note: The generated message should be accurate, helpful and brief. Do not generate "
    "repetitive messages and please output the message to send only.\n"
    "Message:";

inline constexpr const char* kReflectorTdw =
    "I'm $AGENT_NAME$. I'm in a hurry to transport the target objects to the goal position with "
    "my teammate $OPPO_NAME$ together.\n"
    "Note that I can hold two objects at a time and a container can hold up to three objects. "
    "All objects are denoted as <name> (id), such as <table> (712).\n"
    "\n"
    "Given a new piece of decision making experience based on our shared goal, my progress, "
    "previous actions, and our current plans, please reflect on the dialogue history and update "
    "the knowledge list to better guide future effective communication in cooperative planning.\n"
    "\n"
    "Goal: $GOAL$\n"
    "Progress: $PROGRESS$\n"
    "Dialogue history:\n"
    "Alice: \"Hi, I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "Bob: \"Thanks! I'll let you know if I find any goal objects and finish any subgoals, and ask "
    "for your help when necessary.\"\n"
    "$DIALOGUE_HISTORY$\n"
    "Previous actions: $ACTION_HISTORY$\n"
    "Current plans: $CURRENT_PLANS$\n"
    "Knowledge list:\n"
    "-------------------------\n"
    "$KNOWLEDGE_LIST$\n"
    "-------------------------\n"
    "Note: Please help update the knowledge list within the '-----'. The updated list should "
    "integrate insights from both new experiences and previously accumulated knowledge, aiming "
    "to provide hints to enhance future communication message exchange between teammates. This "
    "knowledge list is shared among all teammates to enable effective communication to improve "
    "decision-making during our decentralized planning. Keep the list concise and informative, "
    "not exceeding 100 words.";

}  // namespace detail

inline const std::vector<PromptTemplate>& template_registry() {
  static const std::vector<PromptTemplate> registry = {
      {"planner_cwah", TemplateKind::Planner, detail::kPlannerCwah,
       {"AGENT_NAME", "OPPO_NAME", "GOAL", "PROGRESS", "DIALOGUE_HISTORY", "ACTION_HISTORY",
        "AVAILABLE_ACTIONS"}},
      {"message_generator_cwah", TemplateKind::MessageGenerator, detail::kMessageGeneratorCwah,
       {"AGENT_NAME", "OPPO_NAME", "GOAL", "PROGRESS", "ACTION_HISTORY", "DIALOGUE_HISTORY",
        "KNOWLEDGE_LIST"}},
      {"reflector_cwah", TemplateKind::Reflector, detail::kReflectorCwah,
       {"AGENT_NAME", "OPPO_NAME", "GOAL", "PROGRESS", "DIALOGUE_HISTORY", "ACTION_HISTORY",
        "CURRENT_PLANS", "KNOWLEDGE_LIST"}},
      {"planner_tdw", TemplateKind::Planner, detail::kPlannerTdw,
       {"AGENT_NAME", "OPPO_NAME", "GOAL", "PROGRESS", "DIALOGUE_HISTORY", "ACTION_HISTORY",
        "AVAILABLE_ACTIONS"}},
      {"message_generator_tdw", TemplateKind::MessageGenerator, detail::kMessageGeneratorTdw,
       {"AGENT_NAME", "OPPO_NAME", "GOAL", "PROGRESS", "ACTION_HISTORY", "DIALOGUE_HISTORY",
        "KNOWLEDGE_LIST"}},
      {"reflector_tdw", TemplateKind::Reflector, detail::kReflectorTdw,
       {"AGENT_NAME", "OPPO_NAME", "GOAL", "PROGRESS", "DIALOGUE_HISTORY", "ACTION_HISTORY",
        "CURRENT_PLANS", "KNOWLEDGE_LIST"}},
  };
  return registry;
}

inline const PromptTemplate& template_by_id(const std::string& id) {
  for (const auto& t : template_registry())
    if (t.id == id) return t;
  throw TemplateError("unknown template id '" + id + "'");
}

// Template set for a benchmark flavor ("cwah" or "transport").
inline const PromptTemplate& template_for(TemplateKind kind, const std::string& benchmark) {
  std::string suffix = benchmark == "transport" ? "_tdw" : "_cwah";
  switch (kind) {
    case TemplateKind::Planner: return template_by_id("planner" + suffix);
    case TemplateKind::MessageGenerator: return template_by_id("message_generator" + suffix);
    case TemplateKind::Reflector: return template_by_id("reflector" + suffix);
  }
  throw TemplateError("unknown template kind");
}

}  // namespace liet::llm
