#include "sbsn/export.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace sbsn {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_node_row(std::ostream& out, const Matrix& phi_hat, NodeId v) {
  for (std::size_t k = 0; k < phi_hat.rows(); ++k) out << ',' << num(phi_hat(k, v));
  out << '\n';
}

}  // namespace

BlockmodelFiles export_blockmodel(
    const Matrix& pi_hat, const Matrix& phi_hat,
    const std::vector<std::string>& node_names,
    const std::vector<std::optional<ClassId>>& node_labels,
    const std::vector<std::string>& class_names,
    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string());
  BlockmodelFiles files{out_dir / "pi.csv", out_dir / "phi.csv",
                        out_dir / "phi_by_class.csv",
                        out_dir / "class_boundaries.csv",
                        out_dir / "position_summary.csv"};
  const std::size_t K = pi_hat.rows();
  const std::size_t N = phi_hat.cols();

  {
    auto out = open_output(files.pi);
    for (std::size_t a = 0; a < K; ++a) {
      for (std::size_t b = 0; b < K; ++b) out << (b ? "," : "") << num(pi_hat(a, b));
      out << '\n';
    }
  }

  std::string header = "node";
  for (std::size_t k = 0; k < K; ++k) header += ",pos_" + std::to_string(k);
  {
    auto out = open_output(files.phi);
    out << header << '\n';
    for (NodeId v = 0; v < N; ++v) {
      out << node_names[v];
      write_node_row(out, phi_hat, v);
    }
  }

  // Stable sort by class; unlabelled nodes go last.
  std::vector<NodeId> order(N);
  std::iota(order.begin(), order.end(), 0);
  const auto rank = [&](NodeId v) {
    return node_labels[v] ? static_cast<std::size_t>(*node_labels[v]) : class_names.size();
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return rank(a) < rank(b); });
  {
    auto out = open_output(files.phi_by_class);
    auto bounds = open_output(files.class_boundaries);
    out << "node,class" << header.substr(4) << '\n';
    bounds << "class,first_row,end_row\n";
    std::size_t row = 0;
    while (row < N) {
      const std::size_t r = rank(order[row]);
      const std::size_t first = row;
      const std::string name = r < class_names.size() ? class_names[r] : "";
      for (; row < N && rank(order[row]) == r; ++row) {
        out << node_names[order[row]] << ',' << name;
        write_node_row(out, phi_hat, order[row]);
      }
      bounds << name << ',' << first << ',' << row << '\n';
    }
  }

  {
    std::vector<std::size_t> cells(K * K);
    std::iota(cells.begin(), cells.end(), 0);
    std::stable_sort(cells.begin(), cells.end(), [&](std::size_t a, std::size_t b) {
      return pi_hat.data()[a] > pi_hat.data()[b];
    });
    auto out = open_output(files.position_summary);
    out << "rank,from_position,to_position,mass,cumulative_mass\n";
    double cumulative = 0.0;
    for (std::size_t r = 0; r < std::min(kSummaryPairs, cells.size()); ++r) {
      const double mass = pi_hat.data()[cells[r]];
      cumulative += mass;
      out << r + 1 << ',' << cells[r] / K << ',' << cells[r] % K << ',' << num(mass)
          << ',' << num(cumulative) << '\n';
    }
  }
  return files;
}

BlockmodelFiles export_blockmodel(const FitReport& report,
                                  const InteractionNetwork& network,
                                  const LabelSet& labels,
                                  const std::filesystem::path& out_dir) {
  std::vector<std::optional<ClassId>> node_labels(network.node_count());
  for (NodeId v = 0; v < network.node_count(); ++v) node_labels[v] = labels.label(v);
  return export_blockmodel(report.pi_hat, report.phi_hat, network.names(),
                           node_labels, labels.class_names(), out_dir);
}

void write_predictions_csv(std::ostream& out,
                           const std::vector<Prediction>& predictions,
                           const std::vector<std::string>& node_names,
                           const std::vector<std::string>& class_names) {
  out << "node,predicted_class";
  for (std::size_t c = 0; c < class_names.size(); ++c) out << ",score_" << c;
  out << ",fallback\n";
  for (const Prediction& p : predictions) {
    out << node_names[p.node] << ',' << class_names[p.predicted_class];
    for (double s : p.score) out << ',' << num(s);
    out << ',' << (p.fallback ? 1 : 0) << '\n';
  }
}

void write_metrics_json(std::ostream& out, const MetricReport& metrics,
                        const std::vector<std::string>& class_names,
                        const std::vector<std::pair<std::string, double>>& extra) {
  nlohmann::ordered_json doc;
  doc["macro_f1"] = metrics.macro_f1;
  doc["accuracy"] = metrics.accuracy;
  for (std::size_t c = 0; c < metrics.per_class_f1.size(); ++c) {
    doc["f1_" + class_names[c]] = metrics.per_class_f1[c];
  }
  std::size_t scored = 0;
  for (const auto& row : metrics.confusion) {
    scored += std::accumulate(row.begin(), row.end(), std::size_t{0});
  }
  doc["scored_nodes"] = scored;
  for (const auto& [key, value] : extra) doc[key] = value;
  out << doc.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<double>& trace) {
  out << "iteration,free_energy\n";
  char buf[40];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", trace[i]);
    out << i + 1 << ',' << buf << '\n';
  }
}

}  // namespace sbsn
