#include "anttamp/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "anttamp/render.hpp"

namespace anttamp {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Myopic: return "myopic";
    case Variant::AntTamp: return "anttamp";
    case Variant::PrepMyopic: return "prep-myopic";
    case Variant::PrepAntTamp: return "prep-anttamp";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "myopic") return Variant::Myopic;
  if (s == "anttamp") return Variant::AntTamp;
  if (s == "prep-myopic") return Variant::PrepMyopic;
  if (s == "prep-anttamp") return Variant::PrepAntTamp;
  throw std::invalid_argument("unknown variant '" + s + "'");
}

bool variant_prepares(Variant v) {
  return v == Variant::PrepMyopic || v == Variant::PrepAntTamp;
}

bool variant_anticipates(Variant v) {
  return v == Variant::AntTamp || v == Variant::PrepAntTamp;
}

namespace {

const Task& sample_task(const TaskDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& e : dist.entries) {
    acc += e.probability;
    if (u < acc) return e.task;
  }
  return dist.entries.back().task;  // guards rounding at u ~ 1
}

}  // namespace

DeploymentResult run_deployment(const Domain& domain, const CostEstimator& estimator,
                                const DeploymentConfig& config) {
  if (config.trials < 1 || config.tasks_per_trial < 1)
    throw std::invalid_argument("deployment needs at least one trial and one task");

  const TaskDistribution dist = domain.task_distribution();
  if (dist.entries.empty()) throw std::invalid_argument("task distribution is empty");

  DeploymentResult out;
  out.records.reserve(static_cast<std::size_t>(config.trials) * config.tasks_per_trial);
  out.trials.resize(static_cast<std::size_t>(config.trials));

  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed =
        derive_seed(config.seed, "trial", static_cast<std::uint64_t>(t));

    Rng init_rng(derive_seed(trial_seed, "init"));
    WorldState state = domain.random_state(init_rng);

    TrialSnapshot snap;
    const bool keep_snapshot = t < config.snapshots;
    if (keep_snapshot) {
      snap.trial = t;
      snap.initial = state;
    }

    if (variant_prepares(config.variant)) {
      PrepareConfig pc;
      pc.schedule = config.prep_schedule;
      pc.step_fraction = config.prep_step_fraction;
      pc.seed = derive_seed(trial_seed, "prep");
      const PrepareResult prep = prepare(domain, state, estimator, pc);

      TrialStats& ts = out.trials[static_cast<std::size_t>(t)];
      for (std::size_t i = 1; i < state.poses.size(); ++i) {
        const double d = distance(state.poses[i], prep.state.poses[i]);
        if (d > 0.0) {
          ts.prep_displacement += d;
          ++ts.prep_moved;
        }
      }
      ts.prep_value_before = prep.initial_value;
      ts.prep_value_after = prep.value;
      state = prep.state;
      if (keep_snapshot) snap.prepared = state;
    }

    const CostEstimator& selection =
        variant_anticipates(config.variant) ? estimator : zero_estimator();
    Rng task_rng(derive_seed(trial_seed, "tasks"));
    for (int k = 0; k < config.tasks_per_trial; ++k) {
      const Task& task = sample_task(dist, task_rng);
      PlannerConfig pc;
      pc.candidate_count = config.candidate_count;
      pc.seed = derive_seed(trial_seed, "plan", static_cast<std::uint64_t>(k));
      pc.limits = config.limits;

      const auto t0 = std::chrono::steady_clock::now();
      const PlannerResult result =
          anticipatory_tamp(domain, state, task, selection, pc);
      double wall = 0.0;
      if (config.real_timing) {
        wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                   .count();
      }

      state = result.plan.terminal;
      out.records.push_back({t, k, result.plan_cost, wall, task.label});
    }

    if (keep_snapshot) {
      snap.final_state = state;
      out.snapshots.push_back(std::move(snap));
    }
  }

  double total = 0.0;
  out.mean_cost_by_task_index.assign(static_cast<std::size_t>(config.tasks_per_trial),
                                     0.0);
  for (const auto& r : out.records) {
    total += r.cost;
    out.mean_cost_by_task_index[static_cast<std::size_t>(r.task_index)] += r.cost;
  }
  out.mean_cost = total / static_cast<double>(out.records.size());
  for (auto& m : out.mean_cost_by_task_index) m /= static_cast<double>(config.trials);
  return out;
}

double improvement_percent(double baseline_mean, double improved_mean) {
  if (baseline_mean == 0.0) throw std::invalid_argument("baseline mean is zero");
  return (baseline_mean - improved_mean) / baseline_mean * 100.0;
}

void write_results_csv(const DeploymentResult& result, Variant variant,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ScenarioError("cannot write results file: " + path);
  f << "trial,task_index,variant,cost,wallclock\n";
  char line[256];
  for (const auto& r : result.records) {
    std::snprintf(line, sizeof(line), "%d,%d,%s,%.6f,%.6f\n", r.trial, r.task_index,
                  std::string(variant_name(variant)).c_str(), r.cost, r.wallclock_s);
    f << line;
  }
}

void write_summary_json(const Domain& domain, const DeploymentConfig& config,
                        std::string_view estimator_name, const DeploymentResult& result,
                        const std::string& path) {
  nlohmann::ordered_json j;
  j["domain"] = std::string(domain.name());
  j["variant"] = std::string(variant_name(config.variant));
  j["estimator"] = std::string(estimator_name);
  j["trials"] = config.trials;
  j["tasks_per_trial"] = config.tasks_per_trial;
  j["candidates"] = config.candidate_count;
  j["seed"] = config.seed;
  j["mean_cost"] = result.mean_cost;
  j["mean_cost_by_task_index"] = result.mean_cost_by_task_index;

  if (variant_prepares(config.variant)) {
    double disp = 0.0, moved = 0.0, before = 0.0, after = 0.0;
    for (const auto& ts : result.trials) {
      disp += ts.prep_displacement;
      moved += ts.prep_moved;
      before += ts.prep_value_before;
      after += ts.prep_value_after;
    }
    const double n = static_cast<double>(result.trials.size());
    j["preparation"] = {{"mean_displacement", disp / n},
                        {"mean_objects_moved", moved / n},
                        {"mean_value_before", before / n},
                        {"mean_value_after", after / n},
                        {"iterations", config.prep_schedule.iterations}};
  }

  if (config.real_timing) {
    double wall = 0.0;
    for (const auto& r : result.records) wall += r.wallclock_s;
    j["timing"] = {{"mean_wallclock_s",
                    wall / static_cast<double>(result.records.size())}};
  }

  std::ofstream f(path);
  if (!f) throw ScenarioError("cannot write summary file: " + path);
  f << j.dump(2) << "\n";
}

void write_outputs(const Domain& domain, const DeploymentConfig& config,
                   std::string_view estimator_name, const DeploymentResult& result,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_results_csv(result, config.variant, (dir / "results.csv").string());
  write_summary_json(domain, config, estimator_name, result,
                     (dir / "summary.json").string());
  for (const auto& snap : result.snapshots) {
    const std::string stem = "snap_t" + std::to_string(snap.trial);
    save_svg(domain, snap.initial, (dir / (stem + "_initial.svg")).string());
    if (snap.prepared)
      save_svg(domain, *snap.prepared, (dir / (stem + "_prepared.svg")).string());
    save_svg(domain, snap.final_state, (dir / (stem + "_final.svg")).string());
  }
}

}  // namespace anttamp
