#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "liet/errors.hpp"
#include "liet/world.hpp"

// Built-in layouts and the default benchmark suites, plus the task-file and
// world-snapshot serialization formats.
namespace liet::tasks {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Layouts
// ---------------------------------------------------------------------------

// Four 6x6 rooms around a living-room hub:
//   bedroom (3)
//      |
//   livingroom (1) -- kitchen (2)
//      |
//   office (4)
inline std::shared_ptr<const world::RoomGraph> make_flat4() {
  auto g = std::make_shared<world::RoomGraph>();
  g->id = "flat4";
  g->rooms = {
      {1, world::RoomKind::Livingroom, 6, 6},
      {2, world::RoomKind::Kitchen, 6, 6},
      {3, world::RoomKind::Bedroom, 6, 6},
      {4, world::RoomKind::Office, 6, 6},
  };
  g->doors = {
      {1, {5, 2}, 2, {0, 2}},  // livingroom east -> kitchen west
      {1, {2, 0}, 3, {2, 5}},  // livingroom north -> bedroom south
      {1, {2, 5}, 4, {2, 0}},  // livingroom south -> office north
  };
  return g;
}

inline std::shared_ptr<const world::RoomGraph> layout_by_id(const std::string& id) {
  static const std::map<std::string, std::shared_ptr<const world::RoomGraph>> registry = {
      {"flat4", make_flat4()},
  };
  auto it = registry.find(id);
  if (it == registry.end()) throw InvalidTask("unknown layout id '" + id + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Object helpers
// ---------------------------------------------------------------------------

namespace detail {

inline world::ObjectInstance fixture_surface(int id, const std::string& cls, int room, int x, int y) {
  world::ObjectInstance o;
  o.id = id;
  o.cls = cls;
  o.location = world::InRoom{room, {x, y}};
  o.is_surface = true;
  return o;
}

inline world::ObjectInstance fixture_container(int id, const std::string& cls, int room, int x, int y,
                                               bool open = false) {
  world::ObjectInstance o;
  o.id = id;
  o.cls = cls;
  o.location = world::InRoom{room, {x, y}};
  o.is_container = true;
  o.is_openable = true;
  o.open = open;
  return o;
}

inline world::ObjectInstance portable_container(int id, const std::string& cls, world::Location loc) {
  world::ObjectInstance o;
  o.id = id;
  o.cls = cls;
  o.location = loc;
  o.is_container = true;
  return o;
}

inline world::ObjectInstance item(int id, const std::string& cls, world::Location loc) {
  world::ObjectInstance o;
  o.id = id;
  o.cls = cls;
  o.location = loc;
  return o;
}

// Shared fixture set for the flat4 layout. Object ids start at 101.
inline std::vector<world::ObjectInstance> flat4_fixtures() {
  return {
      fixture_surface(101, "coffeetable", 1, 1, 1),
      fixture_surface(102, "dinnertable", 2, 4, 4),
      fixture_container(103, "dishwasher", 2, 0, 4),
      fixture_container(104, "fridge", 2, 5, 0),
      fixture_container(105, "kitchencabinet", 2, 2, 0),
      fixture_surface(106, "desk", 4, 3, 3),
      fixture_surface(107, "bed", 3, 3, 2),
      fixture_surface(108, "sofa", 1, 4, 4),
  };
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Built-in benchmark suites
// ---------------------------------------------------------------------------

using world::GoalPredicate;
using world::InContainer;
using world::InRoom;
using world::OnSurface;
using world::Relation;
using world::Task;

// Household-chore tasks: predicate goals over fixtures, horizon 250.
inline std::vector<Task> cwah_suite() {
  using namespace detail;
  std::vector<Task> suite;

  {
    Task t;
    t.id = "prepare_afternoon_tea";
    t.layout_id = "flat4";
    t.horizon = 250;
    t.placements = flat4_fixtures();
    t.placements.push_back(item(120, "cupcake", InContainer{104}));
    t.placements.push_back(item(121, "pudding", InRoom{2, {3, 3}}));
    t.placements.push_back(item(122, "apple", InRoom{2, {1, 2}}));
    t.placements.push_back(item(123, "apple", OnSurface{107}));
    t.placements.push_back(item(124, "juice", InContainer{104}));
    t.placements.push_back(item(125, "wine", InContainer{105}));
    t.goal = {{Relation::On, "cupcake", 101, 1}, {Relation::On, "pudding", 101, 1},
              {Relation::On, "apple", 101, 1},   {Relation::On, "juice", 101, 1},
              {Relation::On, "wine", 101, 1}};
    suite.push_back(t);
  }
  {
    Task t;
    t.id = "wash_dishes";
    t.layout_id = "flat4";
    t.horizon = 250;
    t.placements = flat4_fixtures();
    t.placements.push_back(item(120, "plate", OnSurface{102}));
    t.placements.push_back(item(121, "plate", InRoom{1, {3, 3}}));
    t.placements.push_back(item(122, "fork", OnSurface{101}));
    t.placements.push_back(item(123, "fork", InContainer{105}));
    t.placements.push_back(item(124, "fork", OnSurface{106}));
    t.goal = {{Relation::In, "plate", 103, 1}, {Relation::In, "fork", 103, 2}};
    suite.push_back(t);
  }
  {
    Task t;
    t.id = "prepare_a_meal";
    t.layout_id = "flat4";
    t.horizon = 250;
    t.placements = flat4_fixtures();
    t.placements.push_back(item(120, "coffeepot", InRoom{2, {1, 5}}));
    t.placements.push_back(item(121, "cupcake", InContainer{104}));
    t.placements.push_back(item(122, "pancake", InContainer{104}));
    t.placements.push_back(item(123, "poundcake", InContainer{105}));
    t.placements.push_back(item(124, "pudding", OnSurface{101}));
    t.placements.push_back(item(125, "apple", InRoom{3, {1, 4}}));
    t.placements.push_back(item(126, "juice", InContainer{104}));
    t.placements.push_back(item(127, "wine", OnSurface{108}));
    t.goal = {{Relation::On, "coffeepot", 102, 1}, {Relation::On, "cupcake", 102, 1},
              {Relation::On, "pancake", 102, 1},   {Relation::On, "poundcake", 102, 1},
              {Relation::On, "pudding", 102, 1},   {Relation::On, "apple", 102, 1},
              {Relation::On, "juice", 102, 1},     {Relation::On, "wine", 102, 1}};
    suite.push_back(t);
  }
  {
    Task t;
    t.id = "put_groceries";
    t.layout_id = "flat4";
    t.horizon = 250;
    t.placements = flat4_fixtures();
    t.placements.push_back(item(120, "cupcake", InRoom{1, {0, 3}}));
    t.placements.push_back(item(121, "pancake", OnSurface{102}));
    t.placements.push_back(item(122, "poundcake", InRoom{2, {3, 2}}));
    t.placements.push_back(item(123, "pudding", OnSurface{108}));
    t.placements.push_back(item(124, "apple", InRoom{4, {4, 1}}));
    t.placements.push_back(item(125, "juice", InContainer{105}));
    t.placements.push_back(item(126, "wine", OnSurface{106}));
    t.goal = {{Relation::In, "cupcake", 104, 1}, {Relation::In, "pancake", 104, 1},
              {Relation::In, "poundcake", 104, 1}, {Relation::In, "pudding", 104, 1},
              {Relation::In, "apple", 104, 1},   {Relation::In, "juice", 104, 1},
              {Relation::In, "wine", 104, 1}};
    suite.push_back(t);
  }
  {
    Task t;
    t.id = "setup_dinner_table";
    t.layout_id = "flat4";
    t.horizon = 250;
    t.placements = flat4_fixtures();
    t.placements.push_back(item(120, "plate", InContainer{103}));
    t.placements.push_back(item(121, "plate", InRoom{1, {5, 5}}));
    t.placements.push_back(item(122, "fork", InContainer{105}));
    t.placements.push_back(item(123, "fork", OnSurface{107}));
    t.goal = {{Relation::On, "plate", 102, 2}, {Relation::On, "fork", 102, 2}};
    suite.push_back(t);
  }
  return suite;
}

// Transport tasks: scattered targets, portable containers, long horizon.
inline std::vector<Task> transport_suite() {
  using namespace detail;
  std::vector<Task> suite;

  {
    Task t;
    t.id = "transport_food";
    t.benchmark = "transport";
    t.layout_id = "flat4";
    t.horizon = 3000;
    t.placements = flat4_fixtures();
    t.placements.push_back(portable_container(140, "bowl", InRoom{2, {2, 3}}));
    t.placements.push_back(portable_container(141, "tray", OnSurface{102}));
    t.placements.push_back(portable_container(142, "basket", InRoom{1, {0, 5}}));
    t.placements.push_back(item(150, "apple", InRoom{2, {0, 1}}));
    t.placements.push_back(item(151, "apple", InContainer{104}));
    t.placements.push_back(item(152, "banana", InRoom{2, {4, 2}}));
    t.placements.push_back(item(153, "banana", OnSurface{102}));
    t.placements.push_back(item(154, "orange", InContainer{104}));
    t.placements.push_back(item(155, "orange", InRoom{1, {2, 2}}));
    t.placements.push_back(item(156, "bread", InContainer{105}));
    t.placements.push_back(item(157, "bread", InRoom{2, {5, 5}}));
    t.placements.push_back(item(158, "burger", InRoom{1, {5, 0}}));
    t.placements.push_back(item(159, "burger", OnSurface{108}));
    t.goal = {{Relation::On, "apple", 107, 2},  {Relation::On, "banana", 107, 2},
              {Relation::On, "orange", 107, 2}, {Relation::On, "bread", 107, 2},
              {Relation::On, "burger", 107, 2}};
    suite.push_back(t);
  }
  {
    Task t;
    t.id = "transport_stuff";
    t.benchmark = "transport";
    t.layout_id = "flat4";
    t.horizon = 3000;
    t.placements = flat4_fixtures();
    t.placements.push_back(portable_container(140, "plasticbasket", InRoom{4, {0, 0}}));
    t.placements.push_back(portable_container(141, "woodbasket", InRoom{1, {5, 4}}));
    t.placements.push_back(item(150, "calculator", InRoom{4, {5, 5}}));
    t.placements.push_back(item(151, "calculator", OnSurface{101}));
    t.placements.push_back(item(152, "pen", InRoom{1, {1, 5}}));
    t.placements.push_back(item(153, "pen", OnSurface{107}));
    t.placements.push_back(item(154, "mouse", InRoom{3, {5, 1}}));
    t.placements.push_back(item(155, "mouse", InRoom{2, {3, 5}}));
    t.placements.push_back(item(156, "purse", OnSurface{108}));
    t.placements.push_back(item(157, "purse", InRoom{3, {0, 4}}));
    t.placements.push_back(item(158, "lighter", InContainer{105}));
    t.placements.push_back(item(159, "lighter", InRoom{1, {3, 0}}));
    t.goal = {{Relation::On, "calculator", 106, 2}, {Relation::On, "pen", 106, 2},
              {Relation::On, "mouse", 106, 2},      {Relation::On, "purse", 106, 2},
              {Relation::On, "lighter", 106, 2}};
    suite.push_back(t);
  }
  return suite;
}

inline std::vector<Task> suite_by_id(const std::string& id) {
  if (id == "cwah") return cwah_suite();
  if (id == "transport") return transport_suite();
  if (id == "all") {
    auto s = cwah_suite();
    auto t = transport_suite();
    s.insert(s.end(), t.begin(), t.end());
    return s;
  }
  // A single task id from either suite.
  for (const auto& t : cwah_suite())
    if (t.id == id) return {t};
  for (const auto& t : transport_suite())
    if (t.id == id) return {t};
  throw ConfigError("unknown task suite or task id '" + id + "'");
}

// ---------------------------------------------------------------------------
// JSON serialization: locations, objects, tasks (task definition file)
// ---------------------------------------------------------------------------

inline ordered_json location_to_json(const world::Location& loc) {
  ordered_json j;
  if (const auto* in_room = std::get_if<world::InRoom>(&loc)) {
    j["kind"] = "in_room";
    j["room"] = in_room->room;
    j["x"] = in_room->cell.x;
    j["y"] = in_room->cell.y;
  } else if (const auto* on = std::get_if<world::OnSurface>(&loc)) {
    j["kind"] = "on_surface";
    j["surface"] = on->surface_id;
  } else if (const auto* in = std::get_if<world::InContainer>(&loc)) {
    j["kind"] = "in_container";
    j["container"] = in->container_id;
  } else {
    const auto& held = std::get<world::Held>(loc);
    j["kind"] = "held";
    j["agent"] = held.agent_id;
    j["hand"] = held.hand;
  }
  return j;
}

inline world::Location location_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "in_room") return world::InRoom{j.at("room").get<int>(), {j.at("x").get<int>(), j.at("y").get<int>()}};
  if (kind == "on_surface") return world::OnSurface{j.at("surface").get<int>()};
  if (kind == "in_container") return world::InContainer{j.at("container").get<int>()};
  if (kind == "held") return world::Held{j.at("agent").get<int>(), j.at("hand").get<int>()};
  throw ConfigError("unknown location kind '" + kind + "'");
}

inline ordered_json object_to_json(const world::ObjectInstance& o) {
  ordered_json j;
  j["id"] = o.id;
  j["class"] = o.cls;
  j["location"] = location_to_json(o.location);
  j["is_container"] = o.is_container;
  j["is_surface"] = o.is_surface;
  j["is_openable"] = o.is_openable;
  j["open"] = o.open;
  return j;
}

inline world::ObjectInstance object_from_json(const json& j) {
  world::ObjectInstance o;
  o.id = j.at("id").get<int>();
  o.cls = j.at("class").get<std::string>();
  o.location = location_from_json(j.at("location"));
  o.is_container = j.value("is_container", false);
  o.is_surface = j.value("is_surface", false);
  o.is_openable = j.value("is_openable", false);
  o.open = j.value("open", false);
  return o;
}

inline constexpr int kTaskSchemaVersion = 1;

inline ordered_json task_to_json(const Task& t) {
  ordered_json j;
  j["schema_version"] = kTaskSchemaVersion;
  j["id"] = t.id;
  j["benchmark"] = t.benchmark;
  j["layout"] = t.layout_id;
  j["horizon"] = t.horizon;
  j["n_agents"] = t.n_agents;
  ordered_json goal = ordered_json::array();
  for (const auto& p : t.goal) {
    ordered_json pj;
    pj["relation"] = world::to_string(p.relation);
    pj["class"] = p.object_class;
    pj["target"] = p.target_id;
    pj["count"] = p.count;
    goal.push_back(pj);
  }
  j["goal"] = goal;
  ordered_json placements = ordered_json::array();
  for (const auto& o : t.placements) placements.push_back(object_to_json(o));
  j["placements"] = placements;
  return j;
}

inline Task task_from_json(const json& j) {
  if (j.value("schema_version", -1) != kTaskSchemaVersion)
    throw SchemaVersionMismatch("task file schema version mismatch");
  Task t;
  t.id = j.at("id").get<std::string>();
  t.benchmark = j.value("benchmark", "cwah");
  t.layout_id = j.at("layout").get<std::string>();
  t.horizon = j.at("horizon").get<long>();
  t.n_agents = j.value("n_agents", 2);
  for (const auto& pj : j.at("goal")) {
    world::GoalPredicate p;
    const std::string rel = pj.at("relation").get<std::string>();
    if (rel == "ON") p.relation = Relation::On;
    else if (rel == "IN") p.relation = Relation::In;
    else throw ConfigError("unknown relation '" + rel + "'");
    p.object_class = pj.at("class").get<std::string>();
    p.target_id = pj.at("target").get<int>();
    p.count = pj.value("count", 1);
    t.goal.push_back(p);
  }
  for (const auto& oj : j.at("placements")) t.placements.push_back(object_from_json(oj));
  return t;
}

inline Task load_task_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task file '" + path + "'");
  json j = json::parse(in);
  return task_from_json(j);
}

inline void save_task_file(const Task& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write task file '" + path + "'");
  out << task_to_json(t).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Canonical world snapshot (field-ordered) for replay equality checks
// ---------------------------------------------------------------------------

inline ordered_json state_to_json(const world::WorldState& s) {
  ordered_json j;
  j["tick"] = s.tick;
  j["layout"] = s.rooms->id;
  j["task"] = task_to_json(s.task);
  j["rng_state"] = s.rng_state;
  ordered_json agents = ordered_json::array();
  for (const auto& a : s.agents) {
    ordered_json aj;
    aj["id"] = a.agent_id;
    aj["name"] = a.name;
    aj["room"] = a.position.room;
    aj["x"] = a.position.cell.x;
    aj["y"] = a.position.cell.y;
    ordered_json hands = ordered_json::array();
    for (const auto& h : a.hands) hands.push_back(h ? ordered_json(*h) : ordered_json(nullptr));
    aj["hands"] = hands;
    agents.push_back(aj);
  }
  j["agents"] = agents;
  ordered_json objects = ordered_json::array();
  for (const auto& [id, o] : s.objects) objects.push_back(object_to_json(o));
  j["objects"] = objects;
  ordered_json knowledge = ordered_json::array();
  for (const auto& k : s.knowledge) {
    ordered_json kj = ordered_json::array();
    for (const auto& [id, fact] : k.seen) {
      ordered_json fj;
      fj["id"] = id;
      fj["class"] = fact.cls;
      fj["location"] = location_to_json(fact.location);
      fj["open"] = fact.open;
      kj.push_back(fj);
    }
    knowledge.push_back(kj);
  }
  j["knowledge"] = knowledge;
  return j;
}

inline std::string state_snapshot(const world::WorldState& s) { return state_to_json(s).dump(); }

}  // namespace liet::tasks
