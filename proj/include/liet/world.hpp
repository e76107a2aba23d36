#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "liet/errors.hpp"
#include "liet/message.hpp"
#include "liet/rng.hpp"

// Symbolic household simulator: grid rooms connected by doors, objects with
// containment, two-handed agents, predicate goals, and a ground-truth action
// cost oracle. All transitions are deterministic; a macro-step resolves one
// action per agent in ascending agent-id order.
namespace liet::world {

// ---------------------------------------------------------------------------
// Rooms and layout
// ---------------------------------------------------------------------------

enum class RoomKind { Kitchen, Livingroom, Bedroom, Office, Bathroom };

inline const char* to_string(RoomKind k) {
  switch (k) {
    case RoomKind::Kitchen: return "kitchen";
    case RoomKind::Livingroom: return "livingroom";
    case RoomKind::Bedroom: return "bedroom";
    case RoomKind::Office: return "office";
    case RoomKind::Bathroom: return "bathroom";
  }
  return "?";
}

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Position {
  int room = 0;
  Cell cell;
  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

struct Room {
  int id = 0;
  RoomKind kind = RoomKind::Livingroom;
  int width = 6;
  int height = 6;
};

struct Door {
  int room_a = 0;
  Cell cell_a;
  int room_b = 0;
  Cell cell_b;
};

class RoomGraph {
 public:
  std::string id;
  std::vector<Room> rooms;
  std::vector<Door> doors;

  const Room* find_room(int room_id) const {
    for (const auto& r : rooms)
      if (r.id == room_id) return &r;
    return nullptr;
  }

  bool walkable(const Position& p) const {
    const Room* r = find_room(p.room);
    return r && p.cell.x >= 0 && p.cell.x < r->width && p.cell.y >= 0 && p.cell.y < r->height;
  }

  std::vector<Position> neighbors(const Position& p) const {
    std::vector<Position> out;
    static constexpr int dx[4] = {0, 0, -1, 1};
    static constexpr int dy[4] = {-1, 1, 0, 0};
    for (int k = 0; k < 4; ++k) {
      Position q{p.room, {p.cell.x + dx[k], p.cell.y + dy[k]}};
      if (walkable(q)) out.push_back(q);
    }
    for (const auto& d : doors) {
      if (d.room_a == p.room && d.cell_a == p.cell) out.push_back(Position{d.room_b, d.cell_b});
      if (d.room_b == p.room && d.cell_b == p.cell) out.push_back(Position{d.room_a, d.cell_a});
    }
    return out;
  }

  std::vector<Position> all_cells() const {
    std::vector<Position> out;
    for (const auto& r : rooms)
      for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) out.push_back(Position{r.id, {x, y}});
    return out;
  }

  // Room ids unique, doors reference walkable cells, cell graph connected.
  void validate() const {
    std::set<int> ids;
    for (const auto& r : rooms) {
      if (!ids.insert(r.id).second) throw InvalidTask("layout '" + id + "': duplicate room id");
      if (r.width <= 0 || r.height <= 0) throw InvalidTask("layout '" + id + "': empty room grid");
    }
    for (const auto& d : doors) {
      if (!walkable({d.room_a, d.cell_a}) || !walkable({d.room_b, d.cell_b}))
        throw InvalidTask("layout '" + id + "': door references a non-walkable cell");
    }
    auto cells = all_cells();
    if (cells.empty()) throw InvalidTask("layout '" + id + "': no cells");
    std::set<Position> seen;
    std::queue<Position> q;
    q.push(cells.front());
    seen.insert(cells.front());
    while (!q.empty()) {
      Position p = q.front();
      q.pop();
      for (const auto& n : neighbors(p))
        if (seen.insert(n).second) q.push(n);
    }
    if (seen.size() != cells.size()) throw InvalidTask("layout '" + id + "': walkable graph is disconnected");
  }

  // BFS distances from `src` to every cell. Door traversal costs one step.
  std::map<Position, int> distances_from(const Position& src) const {
    std::map<Position, int> dist;
    std::queue<Position> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
      Position p = q.front();
      q.pop();
      int d = dist[p];
      for (const auto& n : neighbors(p)) {
        if (dist.count(n)) continue;
        dist[n] = d + 1;
        q.push(n);
      }
    }
    return dist;
  }
};

// ---------------------------------------------------------------------------
// Objects, agents, goals
// ---------------------------------------------------------------------------

struct InRoom {
  int room = 0;
  Cell cell;
  friend bool operator==(const InRoom&, const InRoom&) = default;
};
struct OnSurface {
  int surface_id = 0;
  friend bool operator==(const OnSurface&, const OnSurface&) = default;
};
struct InContainer {
  int container_id = 0;
  friend bool operator==(const InContainer&, const InContainer&) = default;
};
struct Held {
  int agent_id = 0;
  int hand = 0;  // 0 or 1
  friend bool operator==(const Held&, const Held&) = default;
};
using Location = std::variant<InRoom, OnSurface, InContainer, Held>;

struct ObjectInstance {
  int id = 0;
  std::string cls;
  Location location = InRoom{};
  bool is_container = false;
  bool is_surface = false;
  bool is_openable = false;
  bool open = false;

  // Surfaces and openable appliances are fixtures: they cannot be picked up.
  // Non-openable containers are the portable transport kind.
  bool is_fixture() const { return is_surface || is_openable; }
  bool portable_container() const { return is_container && !is_openable; }
};

// Portable containers hold at most this many objects.
inline constexpr int kContainerCapacity = 3;
inline constexpr int kHandCount = 2;

struct AgentBody {
  int agent_id = 0;
  std::string name;
  Position position;
  std::array<std::optional<int>, kHandCount> hands;

  std::optional<int> free_hand() const {
    for (int h = 0; h < kHandCount; ++h)
      if (!hands[h]) return h;
    return std::nullopt;
  }
  int held_count() const {
    int n = 0;
    for (const auto& h : hands) n += h.has_value();
    return n;
  }
};

inline std::string default_agent_name(int agent_id) {
  static const char* names[] = {"Alice", "Bob", "Charlie", "David", "Eve", "Frank"};
  if (agent_id >= 0 && agent_id < 6) return names[agent_id];
  return "Agent" + std::to_string(agent_id);
}

enum class Relation { On, In };

inline const char* to_string(Relation r) { return r == Relation::On ? "ON" : "IN"; }

struct GoalPredicate {
  Relation relation = Relation::On;
  std::string object_class;
  int target_id = 0;
  int count = 1;
};

struct Task {
  std::string id;
  std::string benchmark = "cwah";  // "cwah" or "transport"; selects prompt flavor and metrics
  std::string layout_id;
  std::vector<GoalPredicate> goal;
  long horizon = 250;
  std::vector<ObjectInstance> placements;
  int n_agents = 2;
};

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

enum class ActionKind { WalkTowards, Grasp, Open, Close, PutOn, PutIn, Drop, NoOp };

// One high-level environment action. Display names are carried alongside ids
// so the rendered text is a pure function of the action value.
struct EnvAction {
  ActionKind kind = ActionKind::NoOp;
  int agent_id = 0;
  int object_id = -1;  // grasp/open/close target, put* carried object, walk target object
  int target_id = -1;  // put* destination
  int room_id = -1;    // walk target room when object_id < 0
  int hand = -1;       // drop
  std::string object_name;
  std::string target_name;
  std::string room_name;

  friend bool operator==(const EnvAction& a, const EnvAction& b) {
    return a.kind == b.kind && a.agent_id == b.agent_id && a.object_id == b.object_id &&
           a.target_id == b.target_id && a.room_id == b.room_id && a.hand == b.hand;
  }
};

inline std::string ref(const std::string& name, int id) {
  return "<" + name + "> (" + std::to_string(id) + ")";
}

inline std::string render_action_text(const EnvAction& a) {
  switch (a.kind) {
    case ActionKind::WalkTowards:
      if (a.object_id >= 0) return "[walktowards] " + ref(a.object_name, a.object_id);
      return "[walktowards] " + ref(a.room_name, a.room_id);
    case ActionKind::Grasp: return "[grasp] " + ref(a.object_name, a.object_id);
    case ActionKind::Open: return "[open] " + ref(a.object_name, a.object_id);
    case ActionKind::Close: return "[close] " + ref(a.object_name, a.object_id);
    case ActionKind::PutOn:
      return "[puton] " + ref(a.object_name, a.object_id) + " on " + ref(a.target_name, a.target_id);
    case ActionKind::PutIn:
      return "[putin] " + ref(a.object_name, a.object_id) + " in " + ref(a.target_name, a.target_id);
    case ActionKind::Drop: return "[drop] (hand " + std::to_string(a.hand) + ")";
    case ActionKind::NoOp: return "[noop]";
  }
  return "[noop]";
}

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

struct SeenFact {
  std::string cls;
  Location location;
  bool open = false;  // last seen open flag for openables
};

// What one agent has observed so far: object id -> last seen fact.
struct AgentKnowledge {
  std::map<int, SeenFact> seen;
};

struct WorldState {
  long tick = 0;
  std::shared_ptr<const RoomGraph> rooms;
  Task task;
  std::map<int, ObjectInstance> objects;
  std::vector<AgentBody> agents;
  std::vector<AgentKnowledge> knowledge;  // one per agent
  uint64_t rng_state = 0;

  const ObjectInstance* find_object(int id) const {
    auto it = objects.find(id);
    return it == objects.end() ? nullptr : &it->second;
  }
};

// ---------------------------------------------------------------------------
// Observations
// ---------------------------------------------------------------------------

struct VisibleObject {
  int id = 0;
  std::string cls;
  std::string location_text;  // symbolic location, e.g. "on <dinnertable> (102)"
  Location location;
  int steps_away = 0;  // Manhattan distance from the agent to the object's cell
  bool is_openable = false;
  bool open = false;
};

struct PredicateProgress {
  std::string predicate_text;  // e.g. "IN(plate, <dishwasher> (103))"
  int satisfied = 0;
  int count = 1;
};

struct Observation {
  int agent_id = 0;
  long tick = 0;
  std::vector<VisibleObject> visible;  // sorted by id
  Position self_position;
  int self_room_id = 0;
  std::string self_room_name;
  std::string agent_name;
  std::vector<std::pair<int, std::string>> held;  // (id, class) per occupied hand, hand order
  std::vector<std::pair<std::string, int>> door_distances;  // adjacent room name -> steps to door
  std::vector<PredicateProgress> progress;
  std::vector<comm::Message> inbox;  // filled by the episode runner, not the world
  bool last_action_failed = false;
};

// ---------------------------------------------------------------------------
// Internal helpers
// ---------------------------------------------------------------------------

namespace detail {

// Resolve the cell an object effectively occupies by following its
// containment chain down to a room cell or a holder's position.
inline Position effective_position(const WorldState& s, int object_id) {
  int guard = 0;
  int id = object_id;
  for (;;) {
    const ObjectInstance* o = s.find_object(id);
    if (!o) throw MalformedJointAction("unknown object id " + std::to_string(id));
    if (++guard > 64) throw InvalidTask("containment cycle at object " + std::to_string(id));
    if (const auto* in_room = std::get_if<InRoom>(&o->location)) return Position{in_room->room, in_room->cell};
    if (const auto* on = std::get_if<OnSurface>(&o->location)) { id = on->surface_id; continue; }
    if (const auto* in = std::get_if<InContainer>(&o->location)) { id = in->container_id; continue; }
    const auto& held = std::get<Held>(o->location);
    return s.agents.at(held.agent_id).position;
  }
}

// An object is visible to an agent when its effective position is in the
// agent's room and no closed container hides it along the chain.
inline bool visible_to(const WorldState& s, int agent_id, int object_id) {
  const auto& agent = s.agents.at(agent_id);
  if (effective_position(s, object_id).room != agent.position.room) return false;
  int id = object_id;
  int guard = 0;
  for (;;) {
    const ObjectInstance* o = s.find_object(id);
    if (!o || ++guard > 64) return false;
    if (const auto* in = std::get_if<InContainer>(&o->location)) {
      const ObjectInstance* c = s.find_object(in->container_id);
      if (!c) return false;
      if (c->is_openable && !c->open) return false;
      id = in->container_id;
      continue;
    }
    if (const auto* on = std::get_if<OnSurface>(&o->location)) { id = on->surface_id; continue; }
    return true;  // InRoom or Held
  }
}

inline bool adjacent_or_same(const Position& a, const Position& b) {
  if (a.room != b.room) return false;
  int dx = a.cell.x - b.cell.x;
  int dy = a.cell.y - b.cell.y;
  return std::abs(dx) + std::abs(dy) <= 1;
}

// Agent can manipulate an object when standing on or next to its cell, or
// when holding the containing chain itself.
inline bool in_reach(const WorldState& s, int agent_id, int object_id) {
  Position p = effective_position(s, object_id);
  return adjacent_or_same(s.agents.at(agent_id).position, p);
}

inline bool held_by(const WorldState& s, int agent_id, int object_id) {
  const ObjectInstance* o = s.find_object(object_id);
  if (!o) return false;
  const auto* held = std::get_if<Held>(&o->location);
  return held && held->agent_id == agent_id;
}

inline int container_load(const WorldState& s, int container_id) {
  int n = 0;
  for (const auto& [id, o] : s.objects)
    if (const auto* in = std::get_if<InContainer>(&o.location); in && in->container_id == container_id) ++n;
  return n;
}

inline std::string location_text(const WorldState& s, const ObjectInstance& o) {
  if (const auto* in_room = std::get_if<InRoom>(&o.location)) {
    return "at cell (" + std::to_string(in_room->cell.x) + ", " + std::to_string(in_room->cell.y) + ")";
  }
  if (const auto* on = std::get_if<OnSurface>(&o.location)) {
    const ObjectInstance* t = s.find_object(on->surface_id);
    return "on " + ref(t ? t->cls : "?", on->surface_id);
  }
  if (const auto* in = std::get_if<InContainer>(&o.location)) {
    const ObjectInstance* t = s.find_object(in->container_id);
    return "in " + ref(t ? t->cls : "?", in->container_id);
  }
  const auto& held = std::get<Held>(o.location);
  return "held by " + s.agents.at(held.agent_id).name;
}

inline std::string predicate_text(const WorldState& s, const GoalPredicate& p) {
  const ObjectInstance* t = s.find_object(p.target_id);
  std::string target = ref(t ? t->cls : "?", p.target_id);
  return std::string(to_string(p.relation)) + "(" + p.object_class + ", " + target + ")";
}

// Count of goal-predicate instances satisfied in ground truth.
inline int satisfied_count(const WorldState& s, const GoalPredicate& p) {
  int n = 0;
  for (const auto& [id, o] : s.objects) {
    if (o.cls != p.object_class) continue;
    if (p.relation == Relation::On) {
      if (const auto* on = std::get_if<OnSurface>(&o.location); on && on->surface_id == p.target_id) ++n;
    } else {
      if (const auto* in = std::get_if<InContainer>(&o.location); in && in->container_id == p.target_id) ++n;
    }
  }
  return n;
}

// Same count but measured against one agent's last-seen facts.
inline int satisfied_count_known(const AgentKnowledge& k, const GoalPredicate& p) {
  int n = 0;
  for (const auto& [id, fact] : k.seen) {
    if (fact.cls != p.object_class) continue;
    if (p.relation == Relation::On) {
      if (const auto* on = std::get_if<OnSurface>(&fact.location); on && on->surface_id == p.target_id) ++n;
    } else {
      if (const auto* in = std::get_if<InContainer>(&fact.location); in && in->container_id == p.target_id) ++n;
    }
  }
  return n;
}

// Merge everything the agent currently sees into its knowledge.
inline void absorb_view(WorldState& s, int agent_id) {
  auto& k = s.knowledge[agent_id];
  for (const auto& [id, o] : s.objects) {
    if (!visible_to(s, agent_id, id)) continue;
    k.seen[id] = SeenFact{o.cls, o.location, o.open};
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double goal_progress(const WorldState& state, const std::vector<GoalPredicate>& goal);
Observation make_observation(const WorldState& state, int agent_id, bool failed);

// Validate task-level invariants: goal satisfiable from placements, targets
// of the right kind, horizon positive.
inline void validate_task(const Task& task, const RoomGraph& graph) {
  if (task.horizon <= 0) throw InvalidTask("task '" + task.id + "': horizon must be positive");
  if (task.goal.empty()) throw InvalidTask("task '" + task.id + "': empty goal");
  if (task.n_agents < 1) throw InvalidTask("task '" + task.id + "': need at least one agent");
  std::map<int, const ObjectInstance*> by_id;
  for (const auto& o : task.placements) {
    if (o.id < 0) throw InvalidTask("task '" + task.id + "': negative object id");
    if (!by_id.emplace(o.id, &o).second)
      throw InvalidTask("task '" + task.id + "': duplicate object id " + std::to_string(o.id));
  }
  std::map<std::string, int> class_counts;
  for (const auto& o : task.placements) ++class_counts[o.cls];
  for (const auto& p : task.goal) {
    auto it = by_id.find(p.target_id);
    if (it == by_id.end())
      throw InvalidTask("task '" + task.id + "': goal target " + std::to_string(p.target_id) + " not placed");
    const ObjectInstance* t = it->second;
    if (p.relation == Relation::On && !t->is_surface)
      throw InvalidTask("task '" + task.id + "': ON target " + t->cls + " is not a surface");
    if (p.relation == Relation::In && !t->is_container)
      throw InvalidTask("task '" + task.id + "': IN target " + t->cls + " is not a container");
    if (p.count <= 0) throw InvalidTask("task '" + task.id + "': predicate count must be positive");
    if (class_counts[p.object_class] < p.count)
      throw InvalidTask("task '" + task.id + "': not enough '" + p.object_class + "' instances for the goal");
  }
  for (const auto& o : task.placements) {
    if (const auto* in_room = std::get_if<InRoom>(&o.location)) {
      if (!graph.walkable({in_room->room, in_room->cell}))
        throw InvalidTask("task '" + task.id + "': object " + std::to_string(o.id) + " placed off-grid");
    }
  }
}

struct ResetResult {
  WorldState state;
  std::vector<Observation> observations;
};

// Build the initial state. Identical (task, seed) produce bit-identical
// states; agents start on seed-derived walkable cells.
inline ResetResult reset(const Task& task, std::shared_ptr<const RoomGraph> graph, uint64_t seed) {
  graph->validate();
  validate_task(task, *graph);

  WorldState s;
  s.tick = 0;
  s.rooms = graph;
  s.task = task;
  for (const auto& o : task.placements) s.objects[o.id] = o;

  Rng rng(derive_seed(seed, 0x77));
  auto cells = graph->all_cells();
  for (int i = 0; i < task.n_agents; ++i) {
    AgentBody a;
    a.agent_id = i;
    a.name = default_agent_name(i);
    a.position = cells[rng.below(cells.size())];
    s.agents.push_back(a);
  }
  s.knowledge.resize(task.n_agents);
  s.rng_state = rng.state();

  for (int i = 0; i < task.n_agents; ++i) detail::absorb_view(s, i);

  ResetResult out;
  out.observations.reserve(task.n_agents);
  for (int i = 0; i < task.n_agents; ++i) out.observations.push_back(make_observation(s, i, false));
  out.state = std::move(s);
  return out;
}

// Goal progress in [0, 1]: capped satisfied instances over total instances.
inline double goal_progress(const WorldState& state, const std::vector<GoalPredicate>& goal) {
  if (goal.empty()) throw InvalidTask("goal_progress: empty goal");
  long satisfied = 0, total = 0;
  for (const auto& p : goal) {
    satisfied += std::min(detail::satisfied_count(state, p), p.count);
    total += p.count;
  }
  return static_cast<double>(satisfied) / static_cast<double>(total);
}

inline Observation make_observation(const WorldState& state, int agent_id, bool failed) {
  const auto& agent = state.agents.at(agent_id);
  Observation obs;
  obs.agent_id = agent_id;
  obs.tick = state.tick;
  obs.self_position = agent.position;
  obs.self_room_id = agent.position.room;
  const Room* room = state.rooms->find_room(agent.position.room);
  obs.self_room_name = room ? to_string(room->kind) : "?";
  obs.agent_name = agent.name;
  for (int h = 0; h < kHandCount; ++h) {
    if (agent.hands[h]) {
      const ObjectInstance* o = state.find_object(*agent.hands[h]);
      obs.held.emplace_back(*agent.hands[h], o ? o->cls : "?");
    }
  }
  for (const auto& [id, o] : state.objects) {  // map iteration: sorted by id
    if (!detail::visible_to(state, agent_id, id)) continue;
    VisibleObject v;
    v.id = id;
    v.cls = o.cls;
    v.location = o.location;
    v.location_text = detail::location_text(state, o);
    Position p = detail::effective_position(state, id);
    v.steps_away = std::abs(p.cell.x - agent.position.cell.x) +
                   std::abs(p.cell.y - agent.position.cell.y);
    v.is_openable = o.is_openable;
    v.open = o.open;
    obs.visible.push_back(std::move(v));
  }
  {
    // Steps to the nearest cell of every other room: the agent knows the
    // static floor plan and where it stands in it.
    auto dist = state.rooms->distances_from(agent.position);
    std::map<int, int> room_steps;
    for (const auto& [pos, d] : dist) {
      if (pos.room == agent.position.room) continue;
      auto it = room_steps.find(pos.room);
      if (it == room_steps.end() || d < it->second) room_steps[pos.room] = d;
    }
    for (const auto& [room_id, steps] : room_steps) {
      const Room* r = state.rooms->find_room(room_id);
      obs.door_distances.emplace_back(r ? to_string(r->kind) : "?", steps);
    }
  }
  for (const auto& p : state.task.goal) {
    PredicateProgress pp;
    pp.predicate_text = detail::predicate_text(state, p);
    pp.satisfied = std::min(detail::satisfied_count_known(state.knowledge[agent_id], p), p.count);
    pp.count = p.count;
    obs.progress.push_back(std::move(pp));
  }
  obs.last_action_failed = failed;
  return obs;
}

// Observation text fed to the utility featurizer. Deterministic and sorted;
// distinct semantic states render to distinct strings at a fixed layout.
inline std::string render_observation_text(const Observation& obs) {
  std::ostringstream out;
  out << "I am " << obs.agent_name << ". I am in <" << obs.self_room_name << "> ("
      << obs.self_room_id << ") at cell (" << obs.self_position.cell.x << ", "
      << obs.self_position.cell.y << ").";
  if (obs.held.empty()) {
    out << " My hands are empty.";
  } else {
    out << " I am holding ";
    for (size_t i = 0; i < obs.held.size(); ++i) {
      if (i) out << " and ";
      out << ref(obs.held[i].second, obs.held[i].first);
    }
    out << ".";
  }
  out << "\nRooms:";
  if (obs.door_distances.empty()) {
    out << " none.";
  } else {
    bool first = true;
    for (const auto& [room_name, steps] : obs.door_distances) {
      out << (first ? " " : "; ") << room_name << " " << steps << " steps";
      first = false;
    }
    out << ".";
  }
  out << "\nI see:";
  if (obs.visible.empty()) {
    out << " nothing.";
  } else {
    bool first = true;
    for (const auto& v : obs.visible) {
      out << (first ? " " : "; ") << ref(v.cls, v.id) << " " << v.steps_away << " steps away "
          << v.location_text;
      if (v.is_openable) out << (v.open ? " (open)" : " (closed)");
      first = false;
    }
    out << ".";
  }
  out << "\nProgress:";
  bool first = true;
  for (const auto& p : obs.progress) {
    out << (first ? " " : "; ") << p.satisfied << "/" << p.count << " of " << p.predicate_text;
    first = false;
  }
  out << ".";
  return out.str();
}

// ---------------------------------------------------------------------------
// Available actions
// ---------------------------------------------------------------------------

inline std::vector<EnvAction> available_actions(const WorldState& state, int agent_id) {
  if (agent_id < 0 || agent_id >= static_cast<int>(state.agents.size()))
    throw MalformedJointAction("unknown agent id " + std::to_string(agent_id));
  const auto& agent = state.agents[agent_id];
  std::vector<EnvAction> acts;

  auto add = [&](EnvAction a) {
    a.agent_id = agent_id;
    acts.push_back(std::move(a));
  };

  add(EnvAction{.kind = ActionKind::NoOp});

  for (const auto& room : state.rooms->rooms) {
    EnvAction a{.kind = ActionKind::WalkTowards};
    a.room_id = room.id;
    a.room_name = to_string(room.kind);
    add(a);
  }

  // Walks target objects the agent knows about (names from last-seen facts).
  for (const auto& [id, fact] : state.knowledge[agent_id].seen) {
    if (detail::held_by(state, agent_id, id)) continue;  // pointless walk
    EnvAction a{.kind = ActionKind::WalkTowards};
    a.object_id = id;
    a.object_name = fact.cls;
    add(a);
  }

  bool has_free_hand = agent.free_hand().has_value();
  for (const auto& [id, o] : state.objects) {
    if (!detail::visible_to(state, agent_id, id)) continue;
    bool reach = detail::in_reach(state, agent_id, id);
    if (o.is_openable && reach) {
      EnvAction a{.kind = o.open ? ActionKind::Close : ActionKind::Open};
      a.object_id = id;
      a.object_name = o.cls;
      add(a);
    }
    if (!o.is_fixture() && has_free_hand && !std::holds_alternative<Held>(o.location) && reach) {
      EnvAction a{.kind = ActionKind::Grasp};
      a.object_id = id;
      a.object_name = o.cls;
      add(a);
    }
  }

  for (int h = 0; h < kHandCount; ++h) {
    if (!agent.hands[h]) continue;
    int held_id = *agent.hands[h];
    const ObjectInstance& held = state.objects.at(held_id);
    {
      EnvAction a{.kind = ActionKind::Drop};
      a.hand = h;
      add(a);
    }
    for (const auto& [tid, t] : state.objects) {
      if (tid == held_id) continue;
      if (!detail::visible_to(state, agent_id, tid)) continue;
      bool reach = detail::in_reach(state, agent_id, tid) || detail::held_by(state, agent_id, tid);
      if (!reach) continue;
      if (t.is_surface) {
        EnvAction a{.kind = ActionKind::PutOn};
        a.object_id = held_id;
        a.object_name = held.cls;
        a.target_id = tid;
        a.target_name = t.cls;
        add(a);
      }
      if (t.is_container && !held.is_container) {
        if (t.is_openable && !t.open) continue;  // closed container cannot receive
        if (t.portable_container() && detail::container_load(state, tid) >= kContainerCapacity) continue;
        EnvAction a{.kind = ActionKind::PutIn};
        a.object_id = held_id;
        a.object_name = held.cls;
        a.target_id = tid;
        a.target_name = t.cls;
        add(a);
      }
    }
  }

  std::sort(acts.begin(), acts.end(), [](const EnvAction& a, const EnvAction& b) {
    return render_action_text(a) < render_action_text(b);
  });
  return acts;
}

// ---------------------------------------------------------------------------
// Cost oracle
// ---------------------------------------------------------------------------

namespace detail {

// Destination cell of a walk: nearest walkable cell on-or-adjacent to the
// target object's cell, or the nearest cell of the target room. Ties break
// on (room, y, x).
inline std::pair<Position, int> walk_destination(const WorldState& s, int agent_id, const EnvAction& a) {
  const auto& agent = s.agents.at(agent_id);
  auto dist = s.rooms->distances_from(agent.position);
  std::vector<Position> candidates;
  if (a.object_id >= 0) {
    Position t = effective_position(s, a.object_id);
    candidates.push_back(t);
    static constexpr int dx[4] = {0, 0, -1, 1};
    static constexpr int dy[4] = {-1, 1, 0, 0};
    for (int k = 0; k < 4; ++k) {
      Position q{t.room, {t.cell.x + dx[k], t.cell.y + dy[k]}};
      if (s.rooms->walkable(q)) candidates.push_back(q);
    }
  } else {
    const Room* room = s.rooms->find_room(a.room_id);
    if (!room) throw MalformedJointAction("unknown room id " + std::to_string(a.room_id));
    for (int y = 0; y < room->height; ++y)
      for (int x = 0; x < room->width; ++x) candidates.push_back(Position{room->id, {x, y}});
  }
  std::optional<Position> best;
  int best_d = -1;
  for (const auto& c : candidates) {
    auto it = dist.find(c);
    if (it == dist.end()) continue;
    if (!best || it->second < best_d ||
        (it->second == best_d && std::tie(c.room, c.cell.y, c.cell.x) <
                                     std::tie(best->room, best->cell.y, best->cell.x))) {
      best = c;
      best_d = it->second;
    }
  }
  if (!best) throw UnreachableTarget("no path to walk target");
  return {*best, best_d};
}

}  // namespace detail

// Ground-truth cost in ticks of executing `action` from `state`: BFS path
// length for walks (minimum 1), one tick for everything else.
inline long true_cost(const WorldState& state, int agent_id, const EnvAction& action) {
  if (action.kind == ActionKind::WalkTowards) {
    auto [dest, d] = detail::walk_destination(state, agent_id, action);
    (void)dest;
    return std::max(1, d);
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Step
// ---------------------------------------------------------------------------

struct StepResult {
  WorldState state;
  std::vector<Observation> observations;
  double reward = 0.0;
  bool done = false;
  std::vector<long> costs;   // per-agent tick cost of the executed (or failed) action
  std::vector<bool> failed;  // per-agent ill-situated flag
};

namespace detail {

// Re-check an action's precondition against the (possibly already mutated)
// state inside a macro-step. Returns false when ill-situated.
inline bool action_valid(const WorldState& s, const EnvAction& a) {
  int agent_id = a.agent_id;
  const auto& agent = s.agents.at(agent_id);
  switch (a.kind) {
    case ActionKind::NoOp: return true;
    case ActionKind::WalkTowards:
      if (a.object_id >= 0) return s.find_object(a.object_id) != nullptr;
      return s.rooms->find_room(a.room_id) != nullptr;
    case ActionKind::Grasp: {
      const ObjectInstance* o = s.find_object(a.object_id);
      return o && !o->is_fixture() && !std::holds_alternative<Held>(o->location) &&
             visible_to(s, agent_id, a.object_id) && in_reach(s, agent_id, a.object_id) &&
             agent.free_hand().has_value();
    }
    case ActionKind::Open: {
      const ObjectInstance* o = s.find_object(a.object_id);
      return o && o->is_openable && !o->open && in_reach(s, agent_id, a.object_id);
    }
    case ActionKind::Close: {
      const ObjectInstance* o = s.find_object(a.object_id);
      return o && o->is_openable && o->open && in_reach(s, agent_id, a.object_id);
    }
    case ActionKind::PutOn: {
      const ObjectInstance* o = s.find_object(a.object_id);
      const ObjectInstance* t = s.find_object(a.target_id);
      return o && t && held_by(s, agent_id, a.object_id) && t->is_surface &&
             in_reach(s, agent_id, a.target_id);
    }
    case ActionKind::PutIn: {
      const ObjectInstance* o = s.find_object(a.object_id);
      const ObjectInstance* t = s.find_object(a.target_id);
      if (!o || !t || !held_by(s, agent_id, a.object_id)) return false;
      if (!t->is_container || o->is_container) return false;
      if (t->is_openable && !t->open) return false;
      if (t->portable_container() && container_load(s, a.target_id) >= kContainerCapacity) return false;
      return in_reach(s, agent_id, a.target_id) || held_by(s, agent_id, a.target_id);
    }
    case ActionKind::Drop:
      return a.hand >= 0 && a.hand < kHandCount && agent.hands[a.hand].has_value();
  }
  return false;
}

}  // namespace detail

// Advance the world by one macro-step: one action per agent, resolved
// atomically in ascending agent-id order. Ill-situated actions fail in
// place (cost 1, failure flag) without mutating anything. The tick advances
// by the largest per-agent cost, clamped at the horizon.
inline StepResult step(const WorldState& state, const std::vector<EnvAction>& joint_action) {
  int n = static_cast<int>(state.agents.size());
  if (static_cast<int>(joint_action.size()) != n)
    throw MalformedJointAction("expected " + std::to_string(n) + " actions, got " +
                               std::to_string(joint_action.size()));

  StepResult out;
  out.state = state;
  out.costs.assign(n, 1);
  out.failed.assign(n, false);
  WorldState& s = out.state;

  for (int i = 0; i < n; ++i) {
    const EnvAction& a = joint_action[i];
    if (a.agent_id != i) throw MalformedJointAction("action " + std::to_string(i) + " has agent_id " +
                                                    std::to_string(a.agent_id));
    if (a.kind != ActionKind::NoOp && a.kind != ActionKind::Drop) {
      if (a.object_id >= 0 && !s.find_object(a.object_id))
        throw MalformedJointAction("unknown object id " + std::to_string(a.object_id));
      if ((a.kind == ActionKind::PutOn || a.kind == ActionKind::PutIn) && !s.find_object(a.target_id))
        throw MalformedJointAction("unknown target id " + std::to_string(a.target_id));
      if (a.kind == ActionKind::WalkTowards && a.object_id < 0 && !s.rooms->find_room(a.room_id))
        throw MalformedJointAction("unknown room id " + std::to_string(a.room_id));
    }

    if (!detail::action_valid(s, a)) {
      out.failed[i] = true;
      out.costs[i] = 1;
      continue;
    }

    AgentBody& agent = s.agents[i];
    switch (a.kind) {
      case ActionKind::NoOp:
        out.costs[i] = 1;
        break;
      case ActionKind::WalkTowards: {
        auto [dest, d] = detail::walk_destination(s, i, a);
        out.costs[i] = std::max(1, d);
        agent.position = dest;
        break;
      }
      case ActionKind::Grasp: {
        int hand = *agent.free_hand();
        agent.hands[hand] = a.object_id;
        s.objects.at(a.object_id).location = Held{i, hand};
        out.costs[i] = 1;
        break;
      }
      case ActionKind::Open:
        s.objects.at(a.object_id).open = true;
        out.costs[i] = 1;
        break;
      case ActionKind::Close:
        s.objects.at(a.object_id).open = false;
        out.costs[i] = 1;
        break;
      case ActionKind::PutOn:
      case ActionKind::PutIn: {
        const auto& held = std::get<Held>(s.objects.at(a.object_id).location);
        agent.hands[held.hand].reset();
        if (a.kind == ActionKind::PutOn)
          s.objects.at(a.object_id).location = OnSurface{a.target_id};
        else
          s.objects.at(a.object_id).location = InContainer{a.target_id};
        out.costs[i] = 1;
        break;
      }
      case ActionKind::Drop: {
        int held_id = *agent.hands[a.hand];
        agent.hands[a.hand].reset();
        s.objects.at(held_id).location = InRoom{agent.position.room, agent.position.cell};
        out.costs[i] = 1;
        break;
      }
    }
  }

  long max_cost = 1;
  for (long c : out.costs) max_cost = std::max(max_cost, c);
  s.tick = std::min(state.tick + max_cost, s.task.horizon);

  for (int i = 0; i < n; ++i) detail::absorb_view(s, i);

  out.reward = goal_progress(s, s.task.goal);
  out.done = out.reward >= 1.0 || s.tick >= s.task.horizon;
  out.observations.reserve(n);
  for (int i = 0; i < n; ++i) out.observations.push_back(make_observation(s, i, out.failed[i]));
  return out;
}

}  // namespace liet::world
