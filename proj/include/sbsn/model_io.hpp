#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbsn/classify.hpp"
#include "sbsn/experiment.hpp"
#include "sbsn/matrix.hpp"
#include "sbsn/model.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

// Everything needed to classify nodes and redraw the blockmodel after a fit,
// without the per-interaction posteriors.
struct FittedModel {
  std::size_t K = 0;
  std::size_t C = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  InitMode init_mode = InitMode::flat;
  FitMode mode = FitMode::supervised;
  std::vector<std::string> node_names;
  std::vector<std::string> class_names;
  std::vector<std::optional<ClassId>> labels;
  std::vector<std::string> roles;  // "train", "test" or ""
  std::vector<std::size_t> degree;
  Matrix eta;            // C x K
  Matrix omega;          // K x K
  Matrix zeta;           // K x N
  Matrix mean_marginal;  // N x K, lambda-bar per node
  std::vector<double> free_energy_trace;
  bool converged = false;
  double train_macro_f1 = 0.0;
};

FittedModel make_fitted_model(const VariationalState& state,
                              const FitReport& report,
                              const InteractionNetwork& network,
                              const LabelSet& labels, const ModelConfig& config);

void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

// Same scoring rule as predict() on the state the model was taken from.
std::vector<Prediction> predict(const FittedModel& model,
                                const std::vector<NodeId>& nodes);

}  // namespace sbsn
