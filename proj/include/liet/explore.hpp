#pragma once

#include <string>
#include <vector>

#include "liet/rng.hpp"
#include "liet/tasks.hpp"
#include "liet/utility.hpp"
#include "liet/world.hpp"

// Exploratory data collection: a uniform-random policy over the available
// actions, labeling every executed action with the ground-truth cost oracle
// evaluated on the decision-time state.
namespace liet::utility {

// Run `episodes_per_task` exploration episodes over each task and record one
// sample per executed action. The episode-level 80/20 split is derived from
// the same seed.
inline ExploratoryDataset collect_exploratory_dataset(const std::vector<world::Task>& task_suite,
                                                      int episodes_per_task, uint64_t seed) {
  if (task_suite.empty()) throw EmptyDataset("no tasks to explore");
  if (episodes_per_task < 1) throw EmptyDataset("episodes_per_task must be >= 1");

  ExploratoryDataset ds;
  int episode_id = 0;
  for (size_t ti = 0; ti < task_suite.size(); ++ti) {
    const auto& task = task_suite[ti];
    auto graph = tasks::layout_by_id(task.layout_id);
    for (int e = 0; e < episodes_per_task; ++e, ++episode_id) {
      uint64_t episode_seed = derive_seed(seed, uint64_t(episode_id));
      Rng policy_rng(derive_seed(episode_seed, 0xf00d));
      auto r = world::reset(task, graph, episode_seed);
      auto state = r.state;
      auto observations = r.observations;
      bool done = false;
      while (!done) {
        std::vector<world::EnvAction> joint;
        joint.reserve(state.agents.size());
        for (int i = 0; i < int(state.agents.size()); ++i) {
          auto acts = world::available_actions(state, i);
          const auto& pick = acts[policy_rng.below(acts.size())];
          ExplorationSample s;
          s.obs_text = world::render_observation_text(observations[i]);
          s.action_text = world::render_action_text(pick);
          s.cost = world::true_cost(state, i, pick);
          s.episode_id = episode_id;
          ds.samples.push_back(std::move(s));
          joint.push_back(pick);
        }
        auto out = world::step(state, joint);
        state = std::move(out.state);
        observations = std::move(out.observations);
        done = out.done;
      }
    }
  }
  if (ds.samples.empty()) throw EmptyDataset("exploration executed no actions");
  assign_split(ds, seed);
  return ds;
}

}  // namespace liet::utility
