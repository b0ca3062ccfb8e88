#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subalign/errors.hpp"
#include "subalign/io.hpp"
#include "subalign/multi_source.hpp"
#include "subalign/synthetic.hpp"

namespace subalign::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Target rows with this label are treated as unlabeled.
constexpr const char* kUnlabeled = "?";

// ---- small helpers --------------------------------------------------------

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
}

std::ofstream open_artifact(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_json(const fs::path& path, const Json& json) {
  std::ofstream out = open_artifact(path);
  out << json.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Eigen::Index resolve_dim(const RunConfig& config, const Dataset& target) {
  const Eigen::Index dim = config.dim > 0 ? config.dim : default_dim(target);
  if (dim < 1) {
    throw DimensionError("cannot choose a subspace dimension: target has " +
                         std::to_string(target.size()) + " rows");
  }
  return dim;
}

std::size_t resolve_k(const RunConfig& config, const EvolutionTrace& trace) {
  if (!config.k_override) return select_k(trace, config.stop_rule);
  if (*config.k_override < 1 || *config.k_override > trace.size()) {
    throw IndexError("--k-override " + std::to_string(*config.k_override) +
                     " is outside [1, " + std::to_string(trace.size()) + "]");
  }
  return *config.k_override;
}

struct LabeledRows {
  std::vector<std::size_t> rows;
  std::vector<std::string> names;
};

LabeledRows labeled_rows(const Dataset& target) {
  LabeledRows out;
  for (std::size_t i = 0; i < target.labels().size(); ++i) {
    std::string name = target.name_of(target.labels()[i]);
    if (name == kUnlabeled) continue;
    out.rows.push_back(i);
    out.names.push_back(std::move(name));
  }
  return out;
}

// Accuracy over labeled target rows, compared by category name.
std::optional<double> name_accuracy(const std::vector<std::string>& predicted,
                                    const Dataset& target) {
  const LabeledRows truth = labeled_rows(target);
  if (truth.rows.empty()) return std::nullopt;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < truth.rows.size(); ++k) {
    if (predicted[truth.rows[k]] == truth.names[k]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.rows.size());
}

void write_predictions(const fs::path& path,
                       const std::vector<CategoryId>& ids,
                       const std::vector<std::string>& names) {
  std::ofstream out = open_artifact(path);
  out << "row,category_id,category_name\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << i << ',' << ids[i] << ',' << names[i] << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Json names_of(const std::vector<CategoryId>& ids, const Dataset& data) {
  Json list = Json::array();
  for (CategoryId id : ids) list.push_back(data.name_of(id));
  return list;
}

Json trace_summary(const char* command, const RunConfig& config,
                   const EvolutionTrace& trace, const Dataset& source) {
  Json j;
  j["command"] = command;
  j["d"] = trace.dim;
  j["error_kind"] = std::string(to_string(trace.error_kind));
  j["stop_rule"] = std::string(to_string(config.stop_rule));
  j["num_source_categories"] = trace.size();
  j["k_global"] = select_k(trace, StopRule::GlobalMin);
  j["k_local"] = select_k(trace, StopRule::FirstLocalMin);
  j["ordering"] = names_of(trace.ordering, source);
  j["errors"] = trace.errors;
  j["seed"] = config.classifier.seed;
  return j;
}

struct SingleSource {
  Dataset source;
  Dataset target;
};

SingleSource load_single(const RunConfig& config) {
  if (config.sources.size() != 1) {
    throw Error("exactly one --source is required");
  }
  Dataset source = load_dataset(config.sources.front());
  Dataset target = align_label_ids(source, load_dataset(config.target));
  return {std::move(source), std::move(target)};
}

struct Adapted {
  EvolutionTrace trace;
  std::size_t k = 0;
  CategorySubset c_train;
  std::optional<AdaptedClassifier> classifier;
};

Adapted adapt(const RunConfig& config, const Dataset& source,
              const Dataset& target) {
  const Eigen::Index dim = resolve_dim(config, target);
  Adapted a;
  a.trace = evolve(source, target, config.error_kind, dim,
                   EvolveOptions{config.threads});
  a.k = resolve_k(config, a.trace);
  a.c_train = selected_categories(a.trace, a.k);
  a.classifier = train(source, a.c_train, target, dim, config.classifier);
  return a;
}

std::vector<std::string> id_names(const std::vector<CategoryId>& ids,
                                  const Dataset& data) {
  std::vector<std::string> names;
  names.reserve(ids.size());
  for (CategoryId id : ids) names.push_back(data.name_of(id));
  return names;
}

// ---- subcommands ----------------------------------------------------------

int cmd_evolve(const RunConfig& config, std::ostream& out) {
  const SingleSource data = load_single(config);
  const Eigen::Index dim = resolve_dim(config, data.target);
  const EvolutionTrace trace =
      evolve(data.source, data.target, config.error_kind, dim,
             EvolveOptions{config.threads});

  prepare_out(config.out);
  {
    std::ofstream csv = open_artifact(config.out / "trace.csv");
    write_trace_csv(csv, trace, data.source);
  }
  Json summary = trace_summary("evolve", config, trace, data.source);
  summary["k_selected"] = resolve_k(config, trace);
  write_json(config.out / "summary.json", summary);
  out << "K (" << to_string(config.stop_rule)
      << ") = " << summary["k_selected"].get<std::size_t>() << '\n';
  return kOk;
}

int cmd_adapt(const RunConfig& config, std::ostream& out) {
  const SingleSource data = load_single(config);
  const Adapted a = adapt(config, data.source, data.target);
  const std::vector<CategoryId> predicted = predict(*a.classifier, data.target);
  const std::vector<std::string> predicted_names =
      id_names(predicted, data.source);

  prepare_out(config.out);
  {
    std::ofstream csv = open_artifact(config.out / "trace.csv");
    write_trace_csv(csv, a.trace, data.source);
  }
  write_predictions(config.out / "predictions.csv", predicted, predicted_names);

  Json summary = trace_summary("adapt", config, a.trace, data.source);
  summary["k_selected"] = a.k;
  summary["c_train"] = names_of(a.c_train.labels(), data.source);
  const std::optional<double> accuracy =
      name_accuracy(predicted_names, data.target);
  if (accuracy) {
    summary["accuracy"] = *accuracy;
    out << "accuracy = " << format_double(*accuracy) << '\n';
  }
  write_json(config.out / "summary.json", summary);
  return kOk;
}

int cmd_train(const RunConfig& config, std::ostream& out) {
  const SingleSource data = load_single(config);
  const Adapted a = adapt(config, data.source, data.target);

  prepare_out(config.out);
  {
    std::ofstream csv = open_artifact(config.out / "trace.csv");
    write_trace_csv(csv, a.trace, data.source);
  }
  save_model(config.out / "model.sadm", *a.classifier);
  Json summary = trace_summary("train", config, a.trace, data.source);
  summary["k_selected"] = a.k;
  summary["c_train"] = names_of(a.c_train.labels(), data.source);
  write_json(config.out / "summary.json", summary);
  out << "trained on " << a.k << " categories\n";
  return kOk;
}

int cmd_predict(const fs::path& model_path, const RunConfig& config,
                std::ostream& out) {
  const AdaptedClassifier clf = load_model(model_path);
  const Dataset target = align_label_ids(clf.names(), load_dataset(config.target));
  const std::vector<CategoryId> predicted = predict(clf, target);
  std::vector<std::string> names;
  for (CategoryId id : predicted) {
    auto it = clf.names().find(id);
    names.push_back(it == clf.names().end() ? std::to_string(id) : it->second);
  }
  prepare_out(config.out);
  write_predictions(config.out / "predictions.csv", predicted, names);
  if (const auto accuracy = name_accuracy(names, target)) {
    out << "accuracy = " << format_double(*accuracy) << '\n';
  }
  return kOk;
}

int cmd_evaluate(const fs::path& predictions_path, const fs::path& target_path,
                 std::ostream& out) {
  std::ifstream in(predictions_path);
  if (!in) {
    throw IoError("cannot open '" + predictions_path.string() +
                  "' for reading");
  }
  std::string line;
  std::getline(in, line);
  if (line.rfind("row,category_id,category_name", 0) != 0) {
    throw ParseError(predictions_path.string() + ": not a predictions CSV", 1, 0);
  }
  std::vector<std::string> predicted;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto last = line.rfind(',');
    if (last == std::string::npos) {
      throw ParseError(predictions_path.string() + ": malformed row",
                       predicted.size() + 2, 0);
    }
    std::string name = line.substr(last + 1);
    if (!name.empty() && name.back() == '\r') name.pop_back();
    predicted.push_back(std::move(name));
  }

  const Dataset target = load_dataset(target_path);
  std::vector<std::string> truth;
  for (CategoryId id : target.labels()) truth.push_back(target.name_of(id));
  if (truth.size() != predicted.size()) {
    throw LengthMismatch("evaluate: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(truth.size()) +
                         " target rows");
  }
  const auto accuracy = name_accuracy(predicted, target);
  if (!accuracy) throw Error("evaluate: target has no labeled rows");
  out << "accuracy = " << format_double(*accuracy) << '\n';
  return kOk;
}

int cmd_select(const fs::path& trace_path, StopRule rule, std::ostream& out) {
  std::ifstream in(trace_path);
  if (!in) throw IoError("cannot open '" + trace_path.string() + "' for reading");
  const EvolutionTrace trace = read_trace_csv(in);
  out << select_k(trace, rule) << '\n';
  return kOk;
}

int cmd_sweep(const RunConfig& config, std::size_t k_max, std::ostream& out) {
  const SingleSource data = load_single(config);
  const Eigen::Index dim = resolve_dim(config, data.target);
  const EvolutionTrace trace =
      evolve(data.source, data.target, config.error_kind, dim,
             EvolveOptions{config.threads});
  const std::size_t last = k_max == 0 ? trace.size() : std::min(k_max, trace.size());

  prepare_out(config.out);
  {
    std::ofstream csv = open_artifact(config.out / "trace.csv");
    write_trace_csv(csv, trace, data.source);
  }
  std::ofstream csv = open_artifact(config.out / "sweep.csv");
  csv << "k,error,accuracy\n";
  std::size_t best_k = 0;
  double best_accuracy = -1.0;
  for (std::size_t k = 1; k <= last; ++k) {
    double accuracy = std::numeric_limits<double>::quiet_NaN();
    try {
      const AdaptedClassifier clf = train(
          data.source, selected_categories(trace, k), data.target, dim,
          config.classifier);
      const auto acc = name_accuracy(
          id_names(predict(clf, data.target), data.source), data.target);
      if (acc) accuracy = *acc;
    } catch (const InsufficientSamples&) {
      // too few samples in the first k categories for a dim-d subspace
    }
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best_k = k;
    }
    csv << k << ',' << format_double(trace.errors[k - 1]) << ','
        << (std::isnan(accuracy) ? std::string("nan") : format_double(accuracy))
        << '\n';
  }
  if (!csv) throw IoError("failed writing sweep.csv");
  if (best_k > 0) {
    out << "best accuracy " << format_double(best_accuracy) << " at K = " << best_k
        << '\n';
  }
  return kOk;
}

std::vector<std::string> read_label_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    labels.push_back(line.substr(first, end - first + 1));
  }
  return labels;
}

int cmd_multi(const RunConfig& config,
              const std::optional<fs::path>& target_label_file,
              std::ostream& out) {
  if (config.sources.empty()) throw EmptyPool("multi: no --source given");

  // Label identifiers are unified by name across every input file.
  std::map<CategoryId, std::string> reference;
  auto absorb = [&reference](const Dataset& data) {
    for (const auto& entry : data.names()) reference.insert(entry);
  };
  std::vector<NamedDataset> domains;
  std::set<std::string> used_names;
  for (const fs::path& path : config.sources) {
    Dataset data = align_label_ids(reference, load_dataset(path));
    absorb(data);
    std::string name = path.stem().string();
    for (int suffix = 2; used_names.contains(name); ++suffix) {
      name = path.stem().string() + "#" + std::to_string(suffix);
    }
    used_names.insert(name);
    domains.push_back({std::move(name), std::move(data)});
  }
  const Dataset target = align_label_ids(reference, load_dataset(config.target));

  const SourcePool pool = pool_sources(std::move(domains));
  const Eigen::Index dim = resolve_dim(config, target);
  const EvolutionTrace trace = evolve_multi(pool, target, config.error_kind, dim,
                                            EvolveOptions{config.threads});
  const std::size_t k = resolve_k(config, trace);

  CategorySubset c_train = selected_categories(trace, k);
  if (target_label_file) {
    std::map<std::string, CategoryId> by_name;
    for (const auto& [id, name] : reference) by_name.emplace(name, id);
    std::vector<CategoryId> target_labels;
    for (const std::string& name : read_label_file(*target_label_file)) {
      auto it = by_name.find(name);
      if (it == by_name.end()) {
        throw UncoverableLabel("target label '" + name +
                               "' occurs in no source domain");
      }
      target_labels.push_back(it->second);
    }
    c_train = enforce_cover(trace, k, target_labels, pool);
  }

  const AdaptedClassifier clf =
      train(pool.pooled(), c_train, target, dim, config.classifier);
  const std::vector<CategoryId> predicted = predict(clf, target);
  std::vector<std::string> predicted_names;
  predicted_names.reserve(predicted.size());
  for (CategoryId pooled : predicted) {
    const PooledLabel original = pool.original_of(pooled);
    predicted_names.push_back(
        pool.domains()[original.domain].data.name_of(original.original));
  }

  prepare_out(config.out);
  {
    std::ofstream csv = open_artifact(config.out / "trace.csv");
    write_pooled_trace_csv(csv, trace, pool);
  }
  write_predictions(config.out / "predictions.csv", predicted, predicted_names);

  Json summary = trace_summary("multi", config, trace, pool.pooled());
  summary["k_selected"] = k;
  summary["cover_enforced"] = target_label_file.has_value();
  Json members = Json::array();
  for (CategoryId pooled : c_train.labels()) {
    const PooledLabel original = pool.original_of(pooled);
    members.push_back(
        {{"pooled_id", pooled},
         {"domain", pool.domains()[original.domain].name},
         {"label",
          pool.domains()[original.domain].data.name_of(original.original)}});
  }
  summary["c_train"] = members;
  Json composition = Json::array();
  const std::vector<std::size_t> counts = domain_composition(c_train, pool);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    composition.push_back(
        {{"domain", pool.domains()[i].name}, {"categories", counts[i]}});
  }
  summary["composition"] = composition;
  if (const auto accuracy = name_accuracy(predicted_names, target)) {
    summary["accuracy"] = *accuracy;
    out << "accuracy = " << format_double(*accuracy) << '\n';
  }
  write_json(config.out / "summary.json", summary);
  out << "C_train has " << c_train.size() << " pooled categories\n";
  return kOk;
}

int cmd_synth(const fs::path& config_path, const std::string& labels_text,
              std::uint64_t stream, const std::string& format,
              const fs::path& out_dir, std::ostream& out) {
  const SyntheticDomain domain(load_synthetic_spec(config_path));
  std::vector<CategoryId> labels;
  std::stringstream ss(labels_text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      labels.push_back(static_cast<CategoryId>(std::stoul(item)));
    } catch (const std::exception&) {
      throw Error("--target-labels: '" + item + "' is not a category index");
    }
  }
  if (labels.empty()) {
    for (std::size_t i = 0; i < domain.spec().num_categories; ++i) {
      labels.push_back(static_cast<CategoryId>(i));
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  prepare_out(out_dir);
  const std::string ext = format == "bin" ? ".sads" : ".csv";
  save_dataset(out_dir / ("source" + ext), domain.source());
  save_dataset(out_dir / ("target" + ext), domain.make_target(labels, stream));
  out << "wrote source" << ext << " and target" << ext << " to "
      << out_dir.string() << '\n';
  return kOk;
}

int cmd_convert(const fs::path& in, const fs::path& out_path, bool f32,
                std::ostream& out) {
  const Dataset data = load_dataset(in);
  if (out_path.extension() == ".csv") {
    save_csv(out_path, data);
  } else {
    save_matrix_bin(out_path, data,
                    f32 ? kDatasetFormatVersionF32 : kDatasetFormatVersion);
  }
  out << data.size() << " rows x " << data.dim() << " features\n";
  return kOk;
}

void add_pipeline_options(CLI::App& cmd, RunConfig& config,
                          std::string& error_text, std::string& stop_text,
                          std::size_t& k_override, bool multi_source) {
  if (multi_source) {
    cmd.add_option("--source", config.sources, "Source dataset (repeatable)")
        ->required();
  } else {
    cmd.add_option("--source", config.sources, "Source dataset (.csv or .sads)")
        ->required()
        ->expected(1);
  }
  cmd.add_option("--target", config.target, "Target dataset")->required();
  cmd.add_option("--out", config.out, "Output directory")->required();
  cmd.add_option("--dim", config.dim,
                 "Subspace dimension (default min(80, N_t - 1, D))");
  cmd.add_option("--error", error_text, "Projection error: reproj | sa")
      ->capture_default_str();
  cmd.add_option("--stop", stop_text, "Stop rule: global | local")
      ->capture_default_str();
  cmd.add_option("--k-override", k_override,
                 "Use the first K categories instead of the stop rule");
  cmd.add_option("--seed", config.classifier.seed, "Classifier seed")
      ->capture_default_str();
  cmd.add_option("--threads", config.threads,
                 "Worker threads for candidate scoring (0 = all cores)")
      ->capture_default_str();
  cmd.add_option("--lambda", config.classifier.lambda,
                 "SVM regularization")
      ->capture_default_str();
  cmd.add_option("--epochs", config.classifier.epochs, "SVM epochs")
      ->capture_default_str();
}

}  // namespace

Eigen::Index default_dim(const Dataset& target) {
  return std::min<Eigen::Index>({80, target.size() - 1, target.dim()});
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Subspace alignment with greedy source-category selection"};
  app.require_subcommand(1);

  RunConfig config;
  std::string error_text = "reproj";
  std::string stop_text = "global";
  std::size_t k_override = 0;
  std::optional<fs::path> target_labels;
  std::size_t k_max = 0;
  fs::path model_path, predictions_path, trace_path, config_path, in_path, out_path;
  std::string synth_labels, synth_format = "csv";
  std::uint64_t synth_stream = 0;
  bool f32 = false;

  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Order source categories");
  add_pipeline_options(*evolve_cmd, config, error_text, stop_text, k_override,
                       false);
  CLI::App* adapt_cmd =
      app.add_subcommand("adapt", "Evolve, select K, train and predict");
  add_pipeline_options(*adapt_cmd, config, error_text, stop_text, k_override,
                       false);
  CLI::App* train_cmd = app.add_subcommand("train", "Train and save a model");
  add_pipeline_options(*train_cmd, config, error_text, stop_text, k_override,
                       false);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Accuracy and error for K = 1..k-max");
  add_pipeline_options(*sweep_cmd, config, error_text, stop_text, k_override,
                       false);
  sweep_cmd->add_option("--k-max", k_max, "Largest K (default: all)");
  CLI::App* multi_cmd =
      app.add_subcommand("multi", "Multi-source adaptation over pooled labels");
  add_pipeline_options(*multi_cmd, config, error_text, stop_text, k_override,
                       true);
  multi_cmd->add_option("--target-labels", target_labels,
                        "File of target label names to cover");

  CLI::App* predict_cmd = app.add_subcommand("predict", "Predict with a model");
  predict_cmd->add_option("--model", model_path, "model.sadm")->required();
  predict_cmd->add_option("--target", config.target, "Target dataset")->required();
  predict_cmd->add_option("--out", config.out, "Output directory")->required();

  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Accuracy of a predictions file");
  evaluate_cmd->add_option("--predictions", predictions_path)->required();
  evaluate_cmd->add_option("--target", config.target)->required();

  CLI::App* select_cmd = app.add_subcommand("select", "K from a trace CSV");
  select_cmd->add_option("--trace", trace_path)->required();
  select_cmd->add_option("--stop", stop_text)->capture_default_str();

  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate synthetic data");
  synth_cmd->add_option("--config", config_path, "key = value spec")->required();
  synth_cmd->add_option("--target-labels", synth_labels,
                        "Comma-separated category indices (default: all)");
  synth_cmd->add_option("--stream", synth_stream, "Target draw index");
  synth_cmd->add_option("--format", synth_format, "csv | bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  synth_cmd->add_option("--out", out_path, "Output directory")->required();

  CLI::App* convert_cmd =
      app.add_subcommand("convert", "Convert between CSV and SADS");
  convert_cmd->add_option("--in", in_path)->required();
  convert_cmd->add_option("--out", out_path)->required();
  convert_cmd->add_flag("--f32", f32, "Write 32-bit features (version 2)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrIoError;
  }

  try {
    config.error_kind = parse_error_kind(error_text);
    config.stop_rule = parse_stop_rule(stop_text);
    if (k_override > 0) config.k_override = k_override;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIoError;
  }

  try {
    if (*evolve_cmd) return cmd_evolve(config, out);
    if (*adapt_cmd) return cmd_adapt(config, out);
    if (*train_cmd) return cmd_train(config, out);
    if (*sweep_cmd) return cmd_sweep(config, k_max, out);
    if (*multi_cmd) return cmd_multi(config, target_labels, out);
    if (*predict_cmd) return cmd_predict(model_path, config, out);
    if (*evaluate_cmd) return cmd_evaluate(predictions_path, config.target, out);
    if (*select_cmd) return cmd_select(trace_path, config.stop_rule, out);
    if (*synth_cmd) {
      return cmd_synth(config_path, synth_labels, synth_stream, synth_format,
                       out_path, out);
    }
    if (*convert_cmd) return cmd_convert(in_path, out_path, f32, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kPipelineError;
  }
  return kUsageOrIoError;
}

}  // namespace subalign::cli
