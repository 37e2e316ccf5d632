#pragma once

#include <cstddef>
#include <vector>

#include "sbsn/matrix.hpp"
#include "sbsn/model.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

struct Prediction {
  NodeId node = 0;
  ClassId predicted_class = 0;
  std::vector<double> score;  // eta_c . lambda-bar_v, one per class
  bool fallback = false;      // zero-degree node given the majority class
};

struct MetricReport {
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<double> per_class_f1;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
};

// Lowest index among the maxima.
ClassId argmax(const std::vector<double>& values);

// Most frequent class among train nodes, lowest index on ties.
ClassId majority_train_class(const LabelSet& labels);

std::vector<Prediction> predict(const VariationalState& state,
                                const InteractionNetwork& network,
                                const std::vector<NodeId>& nodes,
                                ClassId fallback_class);

// Scores predictions against the true labels in `labels`; every predicted
// node must be labelled.
MetricReport score(const std::vector<Prediction>& predictions,
                   const LabelSet& labels);

// Weighted-vote relational neighbour classifier over the undirected view of
// the network. Train nodes are clamped; predictions are returned for every
// node that is not in the train mask.
std::vector<Prediction> wvrn(const InteractionNetwork& network,
                             const LabelSet& labels,
                             std::size_t max_sweeps = 100);

}  // namespace sbsn
