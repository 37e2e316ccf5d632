#include "sbsn/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sbsn/classify.hpp"
#include "sbsn/experiment.hpp"
#include "sbsn/export.hpp"
#include "sbsn/inference.hpp"
#include "sbsn/model_io.hpp"
#include "sbsn/synth.hpp"

namespace sbsn {

namespace {

struct Options {
  std::string edges;
  std::string labels;
  bool undirected = false;
  std::vector<std::size_t> k{10};
  double alpha = 2.0;
  std::optional<double> beta;
  std::string init = "flat";
  std::string mode = "supervised";
  std::vector<double> train_frac{2.0 / 3.0};
  std::size_t runs = 25;
  std::uint64_t seed = 0;
  std::size_t max_iter = 200;
  double tol = 1e-6;
  std::optional<double> reject_below;
  bool redraw = false;
  bool baseline = false;
  std::size_t threads = 0;
  std::string out = ".";
  std::string model;
  // generate
  std::size_t n = 40;
  std::size_t interactions = 400;
  double p_in = 0.9;
  std::size_t classes = 0;
  double eta_scale = 4.0;
};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::filesystem::path out_dir(const Options& o) {
  std::filesystem::create_directories(o.out);
  return o.out;
}

ModelConfig model_config(const Options& o) {
  ModelConfig config;
  config.K = o.k.front();
  config.alpha = o.alpha;
  config.beta = o.beta;
  config.init_mode = parse_init_mode(o.init);
  config.supervised = parse_fit_mode(o.mode) == FitMode::supervised;
  config.max_iterations = o.max_iter;
  config.free_energy_rel_tol = o.tol;
  config.seed = o.seed;
  config.validate();
  return config;
}

std::vector<NodeId> all_nodes(std::size_t n) {
  std::vector<NodeId> nodes(n);
  for (NodeId v = 0; v < n; ++v) nodes[v] = v;
  return nodes;
}

template <typename Pred>
std::vector<Prediction> keep(std::vector<Prediction> ps, Pred pred) {
  std::erase_if(ps, [&](const Prediction& p) { return !pred(p.node); });
  return ps;
}

void write_run_outputs(const std::filesystem::path& dir,
                       const std::vector<Prediction>& predictions,
                       const std::vector<std::string>& node_names,
                       const LabelSet& labels,
                       const std::vector<std::pair<std::string, double>>& extra) {
  auto pred_out = open_out(dir / "predictions.csv");
  write_predictions_csv(pred_out, predictions, node_names, labels.class_names());
  const auto test = keep(predictions, [&](NodeId v) { return labels.in_test(v); });
  auto metrics_out = open_out(dir / "metrics.json");
  if (test.empty()) {
    metrics_out << "{}\n";
  } else {
    write_metrics_json(metrics_out, score(test, labels), labels.class_names(), extra);
  }
}

int cmd_fit(const Options& o) {
  const auto network = load_edge_list(o.edges, !o.undirected);
  const auto labels = split(load_labels(o.labels, network), o.train_frac.front(), o.seed);
  const ModelConfig config = model_config(o);
  auto [state, report] = fit(network, labels, config);

  const auto dir = out_dir(o);
  const auto predictions =
      keep(predict(state, network, all_nodes(network.node_count()),
                   majority_train_class(labels)),
           [&](NodeId v) { return !labels.in_train(v); });
  write_run_outputs(dir, predictions, network.names(), labels,
                    {{"train_macro_f1", report.train_macro_f1},
                     {"final_free_energy", report.free_energy_trace.back()},
                     {"iterations", static_cast<double>(report.iterations_used)},
                     {"converged", report.converged ? 1.0 : 0.0},
                     {"line_search_failures",
                      static_cast<double>(report.line_search_failures)},
                     {"K", static_cast<double>(config.K)}});
  auto trace = open_out(dir / "trace.csv");
  write_trace_csv(trace, report.free_energy_trace);
  auto manifest = open_out(dir / "split.csv");
  write_split_manifest(manifest, network, labels);
  export_blockmodel(report, network, labels, dir);
  save_model(make_fitted_model(state, report, network, labels, config),
             dir / "model.json");
  std::cout << "fit: K=" << config.K << " iterations=" << report.iterations_used
            << " converged=" << report.converged
            << " train_macro_f1=" << report.train_macro_f1 << '\n';
  return 0;
}

LabelSet labels_of(const FittedModel& m) {
  LabelSet labels(m.class_names, m.node_names.size());
  std::vector<NodeId> train, test;
  for (NodeId v = 0; v < m.node_names.size(); ++v) {
    if (m.labels[v]) labels.set_label(v, *m.labels[v]);
    if (m.roles[v] == "train") train.push_back(v);
    if (m.roles[v] == "test") test.push_back(v);
  }
  labels.assign_masks(train, test);
  return labels;
}

int cmd_predict(const Options& o) {
  const FittedModel model = load_model(o.model);
  const LabelSet labels = labels_of(model);
  const auto predictions = keep(predict(model, all_nodes(model.node_names.size())),
                                [&](NodeId v) { return !labels.in_train(v); });
  write_run_outputs(out_dir(o), predictions, model.node_names, labels,
                    {{"train_macro_f1", model.train_macro_f1}});
  return 0;
}

int cmd_export(const Options& o) {
  const FittedModel model = load_model(o.model);
  VariationalState view;
  view.K = model.K;
  view.omega = model.omega;
  view.zeta = model.zeta;
  export_blockmodel(expected_pi(view), expected_phi(view), model.node_names,
                    model.labels, model.class_names, out_dir(o));
  return 0;
}

int cmd_sweep(const Options& o) {
  ExperimentSpec spec;
  spec.edges = o.edges;
  spec.labels = o.labels;
  spec.undirected = o.undirected;
  spec.mode = parse_fit_mode(o.mode);
  spec.K_values = o.k;
  spec.train_fractions = o.train_frac;
  spec.runs = o.runs;
  spec.init_mode = parse_init_mode(o.init);
  spec.fit_rejection_threshold = o.reject_below;
  spec.redraw_rejected = o.redraw;
  spec.base_seed = o.seed;
  spec.model = model_config(o);
  spec.with_wvrn = o.baseline;
  spec.threads = o.threads;
  const SweepResult result = run_experiment(spec);

  const auto dir = out_dir(o);
  auto sweep = open_out(dir / "sweep.csv");
  write_sweep_csv(sweep, result);
  auto runs = open_out(dir / "runs.csv");
  write_runs_csv(runs, result);
  auto timing = open_out(dir / "timing.csv");
  write_timing_csv(timing, result);
  write_sweep_csv(std::cout, result);
  return 0;
}

int cmd_generate(const Options& o) {
  const std::size_t K = o.k.front();
  const std::size_t C = o.classes == 0 ? K : o.classes;
  const auto params = planted_partition(K, o.n, o.interactions, o.p_in, C,
                                        o.eta_scale, o.seed);
  const auto sample = generate(params);
  write_fixture(sample, out_dir(o));
  std::cout << "generate: N=" << sample.network.node_count()
            << " I=" << sample.network.interaction_count() << '\n';
  return 0;
}

int cmd_baseline(const Options& o) {
  const auto network = load_edge_list(o.edges, !o.undirected);
  const auto labels = split(load_labels(o.labels, network), o.train_frac.front(), o.seed);
  write_run_outputs(out_dir(o), wvrn(network, labels), network.names(), labels, {});
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Supervised blockmodel for sparse networks"};
  app.require_subcommand(1);
  Options o;

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--edges", o.edges, "Edge list (src<TAB>dst per line)")->required();
    sub->add_option("--labels", o.labels, "Label file (node<TAB>class per line)")
        ->required();
    sub->add_flag("--undirected", o.undirected, "Insert every edge in both directions");
  };
  auto add_model = [&](CLI::App* sub, bool lists) {
    auto* k = sub->add_option("--k", o.k, "Maximum number of positions");
    auto* frac = sub->add_option("--train-frac", o.train_frac,
                                 "Fraction of labelled nodes used for training");
    if (lists) {
      k->delimiter(',');
      frac->delimiter(',');
    } else {
      k->expected(1);
      frac->expected(1);
    }
    sub->add_option("--alpha", o.alpha, "Dirichlet concentration for pi");
    sub->add_option("--beta", o.beta, "Dirichlet concentration for phi (default 1/C)");
    sub->add_option("--init", o.init, "Initialisation: flat or comm")
        ->check(CLI::IsMember({"flat", "comm"}));
    sub->add_option("--mode", o.mode, "supervised or unsupervised")
        ->check(CLI::IsMember({"supervised", "unsupervised"}));
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--max-iter", o.max_iter, "Maximum EM iterations");
    sub->add_option("--tol", o.tol, "Relative free-energy tolerance");
  };

  auto* fit_cmd = app.add_subcommand("fit", "Fit one model and classify held-out nodes");
  add_data(fit_cmd);
  add_model(fit_cmd, false);
  fit_cmd->add_option("--out", o.out, "Output directory");

  auto* predict_cmd = app.add_subcommand("predict", "Classify nodes with a saved model");
  predict_cmd->add_option("--model", o.model, "model.json written by fit")->required();
  predict_cmd->add_option("--out", o.out, "Output directory");

  auto* export_cmd = app.add_subcommand("export", "Write blockmodel matrices of a saved model");
  export_cmd->add_option("--model", o.model, "model.json written by fit")->required();
  export_cmd->add_option("--out", o.out, "Output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "Repeated runs over K and train fractions");
  add_data(sweep_cmd);
  add_model(sweep_cmd, true);
  sweep_cmd->add_option("--runs", o.runs, "Runs per cell");
  sweep_cmd->add_option("--reject-below", o.reject_below,
                        "Exclude runs whose train macro-F1 is below this");
  sweep_cmd->add_flag("--redraw", o.redraw, "Re-fit rejected runs up to 3 times");
  sweep_cmd->add_flag("--baseline", o.baseline, "Also score wvRN on every split");
  sweep_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  sweep_cmd->add_option("--out", o.out, "Output directory");

  auto* gen_cmd = app.add_subcommand("generate", "Sample a planted-partition fixture");
  gen_cmd->add_option("--k", o.k, "Number of positions")->expected(1);
  gen_cmd->add_option("--n", o.n, "Number of nodes");
  gen_cmd->add_option("--i", o.interactions, "Number of interactions");
  gen_cmd->add_option("--p-in", o.p_in, "Interaction mass inside positions");
  gen_cmd->add_option("--classes", o.classes, "Number of classes (default K)");
  gen_cmd->add_option("--eta-scale", o.eta_scale, "Softmax weight scale");
  gen_cmd->add_option("--seed", o.seed, "Random seed");
  gen_cmd->add_option("--out", o.out, "Output directory");

  auto* base_cmd = app.add_subcommand("baseline", "wvRN relational-neighbour baseline");
  add_data(base_cmd);
  base_cmd->add_option("--train-frac", o.train_frac, "Train fraction")->expected(1);
  base_cmd->add_option("--seed", o.seed, "Split seed");
  base_cmd->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) return cmd_fit(o);
    if (*predict_cmd) return cmd_predict(o);
    if (*export_cmd) return cmd_export(o);
    if (*sweep_cmd) return cmd_sweep(o);
    if (*gen_cmd) return cmd_generate(o);
    if (*base_cmd) return cmd_baseline(o);
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "sbsn");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace sbsn
