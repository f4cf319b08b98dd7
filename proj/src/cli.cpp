#include "ierl/cli.hpp"

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ierl/embed_store.hpp"
#include "ierl/error.hpp"
#include "ierl/harness.hpp"
#include "ierl/inference.hpp"
#include "ierl/model_store.hpp"
#include "ierl/trainer.hpp"

namespace ierl::cli {
namespace {

struct DataFlags {
  std::string dataset;
  std::string task;
  std::string llm_emb;
  std::string kg_emb;
  std::string out;
};

struct TrainFlags {
  std::string agg = "moments";
  CLI::Option* max_power_opt = nullptr;
  TrainConfig config;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--dataset", f.dataset, "Sentence-pair TSV (sentence1, sentence2, label)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--task", f.task, "Label scheme")
      ->required()
      ->check(CLI::IsMember({"similarity", "entailment"}));
  cmd->add_option("--llm-emb", f.llm_emb, "Sentence-store file for the LLM stream")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--kg-emb", f.kg_emb, "Embedding-table file for the KG stream")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output path")->required();
}

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  auto& c = f.config;
  cmd->add_option("--agg", f.agg, "Aggregation: mean (baseline) or moments")
      ->check(CLI::IsMember({"mean", "moments"}))
      ->capture_default_str();
  f.max_power_opt = cmd->add_option("--max-power", c.max_power, "Highest moment power (moments mode)")
                        ->check(CLI::NonNegativeNumber)
                        ->capture_default_str();
  cmd->add_option("--lr", c.learning_rate, "Proximal gradient learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--l1-weight", c.l1_weight, "L1 penalty weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--tol", c.tol, "Convergence tolerance on objective decrease")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iters", c.max_iters, "Iteration cap per sentence model")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for alpha initialization")->capture_default_str();
}

TrainConfig resolve_config(const TrainFlags& f) {
  TrainConfig c = f.config;
  c.agg_mode = f.agg == "mean" ? AggMode::Mean : AggMode::Moments;
  if (c.agg_mode == AggMode::Mean && f.max_power_opt->count() > 0)
    throw ConfigError("--max-power conflicts with --agg mean");
  c.validate();
  return c;
}

struct Inputs {
  TaskDataset dataset;
  SentenceEmbeddingStore llm;
  EmbeddingTable kg;
  Sources sources() const { return {llm, kg}; }
};

void report_warnings(const std::vector<std::string>& warnings, const std::string& what,
                     std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << what << ": " << w << '\n';
}

Inputs load_inputs(const DataFlags& f, std::ostream& err) {
  Inputs in{load_task_tsv(f.dataset, parse_task_kind(f.task)), load_sentence_store_file(f.llm_emb),
            load_embedding_table_file(f.kg_emb)};
  report_warnings(in.dataset.warnings, f.dataset, err);
  report_warnings(in.llm.warnings(), f.llm_emb, err);
  report_warnings(in.kg.warnings(), f.kg_emb, err);
  return in;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpretable ensemble representation learning toolkit"};
  app.require_subcommand(1);

  DataFlags train_data;
  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Fit a per-sentence model for every training sentence");
  add_data_flags(train_cmd, train_data);
  add_train_flags(train_cmd, train_flags);

  DataFlags eval_data;
  std::string eval_models;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model store on a labelled TSV");
  add_data_flags(eval_cmd, eval_data);
  eval_cmd->add_option("--models", eval_models, "Model store (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);

  DataFlags infer_data;
  std::string infer_models;
  auto* infer_cmd = app.add_subcommand("infer", "Write the per-pair interpretability report");
  add_data_flags(infer_cmd, infer_data);
  infer_cmd->add_option("--models", infer_models, "Model store (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);

  DataFlags bv_data;
  TrainFlags bv_flags;
  double batch_fraction = 0.8;
  long num_batches = 10;
  auto* bv_cmd = app.add_subcommand("batch-variance", "Step-count range over random training batches");
  add_data_flags(bv_cmd, bv_data);
  add_train_flags(bv_cmd, bv_flags);
  bv_cmd->add_option("--batch-fraction", batch_fraction, "Fraction of the dataset per batch")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bv_cmd->add_option("--num-batches", num_batches, "Number of random batches")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  DataFlags grid_data;
  TrainFlags grid_flags;
  std::string grid_path;
  std::string dev_path;
  auto* grid_cmd = app.add_subcommand("grid-search", "Tune learning rate, L1 weight and max power");
  add_data_flags(grid_cmd, grid_data);
  add_train_flags(grid_cmd, grid_flags);
  grid_cmd->add_option("--grid", grid_path, "JSON grid spec")->required()->check(CLI::ExistingFile);
  grid_cmd->add_option("--dev", dev_path,
                       "Dev TSV; default: a seeded 80/20 split of --dataset")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) {
      const TrainConfig config = resolve_config(train_flags);
      const Inputs in = load_inputs(train_data, err);
      const auto result = train(in.dataset.instances, in.sources(), config);
      save_model_store(train_data.out, result.models);
      err << "trained " << result.models.size() << " sentence models, run steps "
          << result.run_steps << '\n';
    } else if (*eval_cmd) {
      const Inputs in = load_inputs(eval_data, err);
      const ModelStore models = load_model_store(eval_models);
      EvalReport report = evaluate(models, in.dataset, in.sources());
      report.config = {{"models", eval_models}, {"num_models", models.size()}};
      emit_report(to_json(report), eval_data.out);
      err << "accuracy " << report.accuracy << " (" << report.tp + report.tn << "/"
          << report.total << ")\n";
    } else if (*infer_cmd) {
      const Inputs in = load_inputs(infer_data, err);
      const ModelStore models = load_model_store(infer_models);
      const RetrievalIndex index(models, in.sources());
      std::vector<InferenceResult> results;
      for (const auto& inst : in.dataset.instances) {
        try {
          results.push_back(infer_pair(inst.sentence1, inst.sentence2, index));
        } catch (const DataError& e) {
          err << "warning: skipped pair: " << e.what() << '\n';
        }
      }
      emit_report(to_json(interpretability_report(std::move(results))), infer_data.out);
    } else if (*bv_cmd) {
      const TrainConfig config = resolve_config(bv_flags);
      const Inputs in = load_inputs(bv_data, err);
      const auto report = batch_variance_experiment(in.dataset, in.sources(), config, num_batches,
                                                    config.seed, batch_fraction);
      nlohmann::json j = to_json(report);
      j["config"] = to_json(config);
      emit_report(j, bv_data.out);
      err << "steps range " << report.min_steps << "-" << report.max_steps << '\n';
    } else if (*grid_cmd) {
      const TrainConfig base = resolve_config(grid_flags);
      std::ifstream grid_in(grid_path);
      nlohmann::json grid_json;
      try {
        grid_json = nlohmann::json::parse(grid_in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(grid_path + ": " + e.what());
      }
      const GridSpec grid = parse_grid_spec(grid_json);
      const Inputs in = load_inputs(grid_data, err);
      TaskDataset train_set = in.dataset;
      TaskDataset dev;
      if (!dev_path.empty()) {
        dev = load_task_tsv(dev_path, in.dataset.kind);
      } else {
        const auto picked = sample_batch(in.dataset.instances.size(), 0.8, base.seed, 0);
        std::vector<bool> in_train(in.dataset.instances.size(), false);
        for (auto k : picked) in_train[k] = true;
        train_set.instances.clear();
        dev.name = in.dataset.name + " (dev split)";
        dev.kind = in.dataset.kind;
        for (std::size_t k = 0; k < in_train.size(); ++k)
          (in_train[k] ? train_set.instances : dev.instances).push_back(in.dataset.instances[k]);
      }
      const auto result = grid_search(train_set, dev, in.sources(), grid, base);
      emit_report(to_json(result), grid_data.out);
      err << "best cell " << result.best_index << " of " << result.cells.size() << '\n';
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ierl::cli
