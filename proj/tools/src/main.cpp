// anttamp — command line front end: run deployments, generate labeled
// datasets, train/evaluate cost models, dump scenario files.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "anttamp/cabinet.hpp"
#include "anttamp/dataset.hpp"
#include "anttamp/domain.hpp"
#include "anttamp/estimators.hpp"
#include "anttamp/gnn.hpp"
#include "anttamp/harness.hpp"
#include "anttamp/namo.hpp"
#include "anttamp/scenario.hpp"

namespace {

using namespace anttamp;

struct ScenarioOpts {
  std::string domain;
  std::string scenario_path;  // overrides --domain when set
  int objects = 10;
  int per_class = 3;
  bool multi_class = false;
  bool interchangeable = true;
  std::uint64_t layout_seed = 1;
};

void add_scenario_options(CLI::App* cmd, ScenarioOpts& o) {
  cmd->add_option("--domain", o.domain, "problem domain")
      ->check(CLI::IsMember({"namo", "cabinet"}));
  cmd->add_option("--scenario", o.scenario_path,
                  "scenario JSON file (overrides --domain)");
  cmd->add_option("--objects", o.objects, "movable object count (namo)");
  cmd->add_option("--per-class", o.per_class, "objects per class (cabinet)");
  cmd->add_flag("--multi-class-tasks", o.multi_class,
                "tasks may span several classes (cabinet)");
  cmd->add_flag("--interchangeable,!--no-interchangeable", o.interchangeable,
                "same-class objects may stand in for each other (cabinet)");
  cmd->add_option("--layout-seed", o.layout_seed, "nominal layout seed");
}

Scenario build_scenario(const ScenarioOpts& o) {
  if (!o.scenario_path.empty()) return load_scenario(o.scenario_path);
  if (o.domain == "namo") {
    NamoScenarioParams p;
    p.object_count = o.objects;
    p.layout_seed = o.layout_seed;
    return make_namo_scenario(p);
  }
  if (o.domain == "cabinet") {
    CabinetScenarioParams p;
    p.per_class = o.per_class;
    p.multi_class_tasks = o.multi_class;
    p.interchangeable_obstruction = o.interchangeable;
    p.layout_seed = o.layout_seed;
    return make_cabinet_scenario(p);
  }
  throw std::invalid_argument("pass --domain namo|cabinet or --scenario <file>");
}

int cmd_run(const ScenarioOpts& sopts, CLI::App* cmd, std::string variant_str,
            std::string estimator_spec, int trials, int tasks, int candidates,
            int prep_iters, double prep_temp, double prep_cooling, double prep_step,
            std::uint64_t seed, std::string timing, int snapshots,
            std::string out_dir) {
  const Scenario scen = build_scenario(sopts);
  const auto domain = make_domain(scen);
  const bool namo = domain->name() == "namo";

  // Unset knobs fall back to per-domain defaults.
  if (!cmd->count("--trials")) trials = namo ? 32 : 16;
  if (!cmd->count("--tasks")) tasks = namo ? 20 : 10;
  if (!cmd->count("--candidates")) candidates = namo ? 100 : 200;
  if (!cmd->count("--prep-iterations")) prep_iters = namo ? 5000 : 2500;

  const auto estimator = make_estimator(estimator_spec, *domain);

  DeploymentConfig cfg;
  cfg.variant = parse_variant(variant_str);
  cfg.trials = trials;
  cfg.tasks_per_trial = tasks;
  cfg.candidate_count = candidates;
  cfg.prep_schedule.iterations = prep_iters;
  cfg.prep_schedule.initial_temperature = prep_temp;
  cfg.prep_schedule.cooling_rate = prep_cooling;
  cfg.prep_step_fraction = prep_step;
  cfg.seed = seed;
  cfg.real_timing = timing == "real";
  cfg.snapshots = snapshots;

  const DeploymentResult result = run_deployment(*domain, *estimator, cfg);
  write_outputs(*domain, cfg, estimator_spec, result, out_dir);

  std::printf("%s / %s / %s: mean task cost %.3f over %d trials x %d tasks\n",
              std::string(domain->name()).c_str(), variant_str.c_str(),
              estimator_spec.c_str(), result.mean_cost, trials, tasks);
  if (variant_prepares(cfg.variant)) {
    double before = 0.0, after = 0.0;
    for (const auto& ts : result.trials) {
      before += ts.prep_value_before;
      after += ts.prep_value_after;
    }
    const double n = static_cast<double>(result.trials.size());
    std::printf("preparation: mean estimate %.3f -> %.3f (%d iterations)\n",
                before / n, after / n, prep_iters);
  }
  std::printf("wrote %s/results.csv and %s/summary.json\n", out_dir.c_str(),
              out_dir.c_str());
  return 0;
}

int cmd_dataset_gen(const ScenarioOpts& sopts, int count, std::uint64_t seed,
                    int samples_per_task, std::string out) {
  const Scenario scen = build_scenario(sopts);
  const auto domain = make_domain(scen);

  DatasetGenParams p;
  p.count = count;
  p.seed = seed;
  p.oracle.samples_per_task = samples_per_task;

  const Dataset ds = generate_dataset(*domain, p);
  save_dataset(ds, out);

  double mean = 0.0;
  for (const auto& s : ds.samples) mean += s.label;
  mean /= static_cast<double>(ds.samples.size());
  std::printf("wrote %s: %zu labeled graphs (%s), mean label %.3f\n", out.c_str(),
              ds.samples.size(), ds.domain.c_str(), mean);
  return 0;
}

int cmd_model_train(std::string dataset_path, std::string out, TrainParams p) {
  const Dataset ds = load_dataset(dataset_path);
  TrainReport report;
  const GnnModel model = train_model(ds, p, &report);
  for (std::size_t e = 0; e < report.train_mae.size(); ++e) {
    std::printf("epoch %2zu  train_mae %9.4f  val_mae %9.4f\n", e + 1,
                report.train_mae[e], report.val_mae[e]);
  }
  save_model(model, out);
  std::printf("wrote %s (%s, hidden %d, %d layers)\n", out.c_str(),
              model.domain.c_str(), p.hidden, p.layer_count);
  return 0;
}

int cmd_model_eval(std::string dataset_path, std::string model_path) {
  const Dataset ds = load_dataset(dataset_path);
  const GnnModel model = load_model(model_path);
  if (model.domain != ds.domain)
    throw std::invalid_argument("model is for domain '" + model.domain +
                                "' but dataset is '" + ds.domain + "'");
  const EvalReport r = evaluate_model(model, ds);
  std::printf("graphs %d  mae %.4f  spearman %.4f\n", r.count, r.mae, r.spearman);
  return 0;
}

int cmd_scenario_dump(const ScenarioOpts& sopts, std::string out) {
  const Scenario scen = build_scenario(sopts);
  save_scenario(scen, out);
  std::printf("wrote %s (%zu entities, %zu regions)\n", out.c_str(),
              scen.entities.size(), scen.regions.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anticipatory task-and-motion planning toolkit"};
  app.require_subcommand(1);

  int rc = 0;

  // --- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run a deployment and write results");
  ScenarioOpts run_scen;
  add_scenario_options(run, run_scen);
  std::string variant = "anttamp";
  std::string estimator = "zero";
  int trials = 0, tasks = 0, candidates = 0, prep_iters = 0, snapshots = 0;
  double prep_temp = 1000.0, prep_cooling = 0.95, prep_step = 0.2;
  std::uint64_t run_seed = 1;
  std::string timing = "off";
  std::string out_dir = "out";
  run->add_option("--variant", variant, "myopic|anttamp|prep-myopic|prep-anttamp")
      ->check(CLI::IsMember({"myopic", "anttamp", "prep-myopic", "prep-anttamp"}));
  run->add_option("--estimator", estimator, "zero | oracle | model:<path>");
  run->add_option("--trials", trials, "independent trials (domain default)");
  run->add_option("--tasks", tasks, "tasks per trial (domain default)");
  run->add_option("--candidates", candidates,
                  "goal candidates per task (domain default)");
  run->add_option("--prep-iterations", prep_iters,
                  "annealing iterations (domain default)");
  run->add_option("--prep-temperature", prep_temp, "initial annealing temperature");
  run->add_option("--prep-cooling", prep_cooling, "per-iteration cooling factor");
  run->add_option("--prep-step", prep_step,
                  "perturbation radius as a fraction of the workspace");
  run->add_option("--seed", run_seed, "deployment seed");
  run->add_option("--timing", timing, "off = zeros in the csv, real = wallclock")
      ->check(CLI::IsMember({"off", "real"}));
  run->add_option("--snapshots", snapshots, "trials to render as SVG");
  run->add_option("--out", out_dir, "output directory");
  run->callback([&] {
    rc = cmd_run(run_scen, run, variant, estimator, trials, tasks, candidates,
                 prep_iters, prep_temp, prep_cooling, prep_step, run_seed, timing,
                 snapshots, out_dir);
  });

  // --- dataset gen ---------------------------------------------------------
  auto* dataset = app.add_subcommand("dataset", "labeled graph datasets");
  dataset->require_subcommand(1);
  auto* gen = dataset->add_subcommand("gen", "sample states and label with the oracle");
  ScenarioOpts gen_scen;
  add_scenario_options(gen, gen_scen);
  int gen_count = 10000, samples_per_task = 10;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "data.graphs";
  gen->add_option("--count", gen_count, "number of labeled states");
  gen->add_option("--samples-per-task", samples_per_task,
                  "plans drawn per task while labeling");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output file")->required();
  gen->callback(
      [&] { rc = cmd_dataset_gen(gen_scen, gen_count, gen_seed, samples_per_task, gen_out); });

  // --- model train / eval --------------------------------------------------
  auto* model = app.add_subcommand("model", "train or evaluate cost models");
  model->require_subcommand(1);

  auto* train = model->add_subcommand("train", "fit a model to a dataset");
  std::string train_dataset, train_out = "model.gnn";
  TrainParams tp;
  train->add_option("--dataset", train_dataset, "dataset file")->required();
  train->add_option("--out", train_out, "model file");
  train->add_option("--epochs", tp.epochs, "training epochs");
  train->add_option("--batch", tp.batch_size, "minibatch size");
  train->add_option("--lr", tp.learning_rate, "learning rate");
  train->add_option("--hidden", tp.hidden, "hidden width");
  train->add_option("--layers", tp.layer_count, "attention layers");
  train->add_option("--val-fraction", tp.val_fraction, "held-out fraction");
  train->add_option("--seed", tp.seed, "training seed");
  train->callback([&] { rc = cmd_model_train(train_dataset, train_out, tp); });

  auto* eval = model->add_subcommand("eval", "report MAE and rank correlation");
  std::string eval_dataset, eval_model;
  eval->add_option("--dataset", eval_dataset, "dataset file")->required();
  eval->add_option("--model", eval_model, "model file")->required();
  eval->callback([&] { rc = cmd_model_eval(eval_dataset, eval_model); });

  // --- scenario dump ---------------------------------------------------------
  auto* scenario = app.add_subcommand("scenario", "scenario files");
  scenario->require_subcommand(1);
  auto* dump = scenario->add_subcommand("dump", "write a generated scenario as JSON");
  ScenarioOpts dump_scen;
  add_scenario_options(dump, dump_scen);
  std::string dump_out = "scenario.json";
  dump->add_option("--out", dump_out, "output file");
  dump->callback([&] { rc = cmd_scenario_dump(dump_scen, dump_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
