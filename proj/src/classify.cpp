#include "sbsn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sbsn/inference.hpp"

namespace sbsn {

ClassId argmax(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty vector");
  return static_cast<ClassId>(std::max_element(values.begin(), values.end()) -
                              values.begin());
}

ClassId majority_train_class(const LabelSet& labels) {
  std::vector<double> counts(labels.class_count(), 0.0);
  for (NodeId v : labels.train_nodes()) counts[*labels.label(v)] += 1.0;
  return counts.empty() ? 0 : argmax(counts);
}

std::vector<Prediction> predict(const VariationalState& state,
                                const InteractionNetwork& network,
                                const std::vector<NodeId>& nodes,
                                ClassId fallback_class) {
  std::vector<Prediction> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) {
    if (v >= network.node_count()) {
      throw std::invalid_argument("predict: unknown node id " + std::to_string(v));
    }
    Prediction p;
    p.node = v;
    p.score.assign(state.C, 0.0);
    if (network.incidence_count(v) == 0) {
      p.predicted_class = fallback_class;
      p.fallback = true;
    } else {
      const auto mean = mean_marginal(state, network, v);
      for (std::size_t c = 0; c < state.C; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < state.K; ++k) s += state.eta(c, k) * mean[k];
        p.score[c] = s;
      }
      p.predicted_class = argmax(p.score);
    }
    out.push_back(std::move(p));
  }
  return out;
}

MetricReport score(const std::vector<Prediction>& predictions,
                   const LabelSet& labels) {
  if (predictions.empty()) throw std::invalid_argument("score: no predictions");
  const std::size_t C = labels.class_count();
  MetricReport report;
  report.confusion.assign(C, std::vector<std::size_t>(C, 0));
  for (const Prediction& p : predictions) {
    const auto truth = labels.label(p.node);
    if (!truth) {
      throw std::invalid_argument("score: node " + std::to_string(p.node) +
                                  " has no true label");
    }
    if (p.predicted_class >= C) throw std::invalid_argument("score: class out of range");
    ++report.confusion[*truth][p.predicted_class];
  }
  std::size_t correct = 0;
  report.per_class_f1.assign(C, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    const std::size_t tp = report.confusion[c][c];
    std::size_t fn = 0, fp = 0;
    for (std::size_t o = 0; o < C; ++o) {
      if (o == c) continue;
      fn += report.confusion[c][o];
      fp += report.confusion[o][c];
    }
    const std::size_t denom = 2 * tp + fn + fp;
    report.per_class_f1[c] =
        denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    correct += tp;
  }
  double sum = 0.0;
  for (double f : report.per_class_f1) sum += f;
  report.macro_f1 = C == 0 ? 0.0 : sum / static_cast<double>(C);
  report.accuracy =
      static_cast<double>(correct) / static_cast<double>(predictions.size());
  return report;
}

std::vector<Prediction> wvrn(const InteractionNetwork& network,
                             const LabelSet& labels, std::size_t max_sweeps) {
  const std::size_t N = network.node_count();
  const std::size_t C = labels.class_count();

  // Undirected weighted neighbourhoods; multiplicity is the weight.
  std::vector<std::map<NodeId, double>> weight(N);
  for (const Interaction& e : network.interactions()) {
    if (e.sender == e.receiver) continue;
    weight[e.sender][e.receiver] += 1.0;
    weight[e.receiver][e.sender] += 1.0;
  }

  std::vector<double> prior(C, 0.0);
  double train_total = 0.0;
  for (NodeId v : labels.train_nodes()) {
    prior[*labels.label(v)] += 1.0;
    train_total += 1.0;
  }
  for (double& p : prior) p = train_total > 0 ? p / train_total : 1.0 / C;

  Matrix dist(N, C);
  for (NodeId v = 0; v < N; ++v) {
    if (labels.in_train(v)) {
      dist(v, *labels.label(v)) = 1.0;
    } else {
      std::copy(prior.begin(), prior.end(), dist.row(v).begin());
    }
  }

  Matrix next = dist;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (NodeId v = 0; v < N; ++v) {
      if (labels.in_train(v) || weight[v].empty()) continue;
      auto row = next.row(v);
      std::fill(row.begin(), row.end(), 0.0);
      double total = 0.0;
      for (const auto& [u, w] : weight[v]) {
        for (std::size_t c = 0; c < C; ++c) row[c] += w * dist(u, c);
        total += w;
      }
      for (std::size_t c = 0; c < C; ++c) {
        row[c] /= total;
        change = std::max(change, std::abs(row[c] - dist(v, c)));
      }
    }
    std::swap(dist, next);
    next = dist;
    if (change < 1e-6) break;
  }

  const ClassId majority = majority_train_class(labels);
  std::vector<Prediction> out;
  for (NodeId v = 0; v < N; ++v) {
    if (labels.in_train(v)) continue;
    Prediction p;
    p.node = v;
    p.score.assign(dist.row(v).begin(), dist.row(v).end());
    if (weight[v].empty()) {
      p.predicted_class = majority;
      p.fallback = true;
    } else {
      p.predicted_class = argmax(p.score);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sbsn
