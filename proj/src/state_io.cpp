#include "sbsn/model_io.hpp"

#include <fstream>

#include "json.hpp"
#include "sbsn/inference.hpp"

namespace sbsn {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data() = j.at("data").get<std::vector<double>>();
  if (m.data().size() != m.rows() * m.cols()) {
    throw InputError("model file: matrix size mismatch");
  }
  return m;
}

}  // namespace

FittedModel make_fitted_model(const VariationalState& state,
                              const FitReport& report,
                              const InteractionNetwork& network,
                              const LabelSet& labels, const ModelConfig& config) {
  FittedModel m;
  m.K = state.K;
  m.C = state.C;
  m.alpha = config.alpha;
  m.beta = config.beta_for(state.C);
  m.seed = config.seed;
  m.init_mode = config.init_mode;
  m.mode = config.supervised ? FitMode::supervised : FitMode::unsupervised;
  m.node_names = network.names();
  m.class_names = labels.class_names();
  const std::size_t N = network.node_count();
  m.labels.resize(N);
  m.roles.resize(N);
  m.degree.resize(N);
  m.mean_marginal = Matrix(N, state.K);
  for (NodeId v = 0; v < N; ++v) {
    m.labels[v] = labels.label(v);
    m.roles[v] = labels.in_train(v) ? "train" : labels.in_test(v) ? "test" : "";
    m.degree[v] = network.incidence_count(v);
    const auto mean = mean_marginal(state, network, v);
    std::copy(mean.begin(), mean.end(), m.mean_marginal.row(v).begin());
  }
  m.eta = state.eta;
  m.omega = state.omega;
  m.zeta = state.zeta;
  m.free_energy_trace = report.free_energy_trace;
  m.converged = report.converged;
  m.train_macro_f1 = report.train_macro_f1;
  return m;
}

void save_model(const FittedModel& m, const std::filesystem::path& path) {
  json labels = json::array();
  for (const auto& l : m.labels) labels.push_back(l ? json(*l) : json(nullptr));
  const json doc{
      {"K", m.K},
      {"C", m.C},
      {"alpha", m.alpha},
      {"beta", m.beta},
      {"seed", m.seed},
      {"init_mode", to_string(m.init_mode)},
      {"mode", to_string(m.mode)},
      {"node_names", m.node_names},
      {"class_names", m.class_names},
      {"labels", labels},
      {"roles", m.roles},
      {"degree", m.degree},
      {"eta", matrix_to_json(m.eta)},
      {"omega", matrix_to_json(m.omega)},
      {"zeta", matrix_to_json(m.zeta)},
      {"mean_marginal", matrix_to_json(m.mean_marginal)},
      {"free_energy_trace", m.free_energy_trace},
      {"converged", m.converged},
      {"train_macro_f1", m.train_macro_f1},
  };
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump() << '\n';
}

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("model file " + path.string() + ": " + e.what());
  }
  try {
    FittedModel m;
    m.K = doc.at("K");
    m.C = doc.at("C");
    m.alpha = doc.at("alpha");
    m.beta = doc.at("beta");
    m.seed = doc.at("seed");
    m.init_mode = parse_init_mode(doc.at("init_mode"));
    m.mode = parse_fit_mode(doc.at("mode"));
    m.node_names = doc.at("node_names").get<std::vector<std::string>>();
    m.class_names = doc.at("class_names").get<std::vector<std::string>>();
    for (const auto& l : doc.at("labels")) {
      m.labels.push_back(l.is_null() ? std::nullopt
                                     : std::optional<ClassId>(l.get<ClassId>()));
    }
    m.roles = doc.at("roles").get<std::vector<std::string>>();
    m.degree = doc.at("degree").get<std::vector<std::size_t>>();
    m.eta = matrix_from_json(doc.at("eta"));
    m.omega = matrix_from_json(doc.at("omega"));
    m.zeta = matrix_from_json(doc.at("zeta"));
    m.mean_marginal = matrix_from_json(doc.at("mean_marginal"));
    m.free_energy_trace = doc.at("free_energy_trace").get<std::vector<double>>();
    m.converged = doc.at("converged");
    m.train_macro_f1 = doc.at("train_macro_f1");
    const std::size_t N = m.node_names.size();
    if (m.labels.size() != N || m.roles.size() != N || m.degree.size() != N ||
        m.mean_marginal.rows() != N || m.eta.rows() != m.C || m.eta.cols() != m.K) {
      throw InputError("model file " + path.string() + ": inconsistent sizes");
    }
    return m;
  } catch (const json::exception& e) {
    throw InputError("model file " + path.string() + ": " + e.what());
  }
}

std::vector<Prediction> predict(const FittedModel& model,
                                const std::vector<NodeId>& nodes) {
  std::vector<double> counts(model.C, 0.0);
  for (std::size_t v = 0; v < model.labels.size(); ++v) {
    if (model.roles[v] == "train") counts[*model.labels[v]] += 1.0;
  }
  const ClassId fallback = counts.empty() ? 0 : argmax(counts);
  std::vector<Prediction> out;
  for (NodeId v : nodes) {
    if (v >= model.node_names.size()) {
      throw std::invalid_argument("predict: unknown node id " + std::to_string(v));
    }
    Prediction p;
    p.node = v;
    p.score.assign(model.C, 0.0);
    if (model.degree[v] == 0) {
      p.predicted_class = fallback;
      p.fallback = true;
    } else {
      for (std::size_t c = 0; c < model.C; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < model.K; ++k) {
          s += model.eta(c, k) * model.mean_marginal(v, k);
        }
        p.score[c] = s;
      }
      p.predicted_class = argmax(p.score);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sbsn
