#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbsn/classify.hpp"
#include "sbsn/matrix.hpp"
#include "sbsn/model.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

// Blockmodel image files written by export_blockmodel.
struct BlockmodelFiles {
  std::filesystem::path pi;               // K x K matrix, no header
  std::filesystem::path phi;              // node, pos_0..pos_{K-1}
  std::filesystem::path phi_by_class;     // rows grouped by true class
  std::filesystem::path class_boundaries; // class, first_row, end_row
  std::filesystem::path position_summary; // heaviest position pairs
};

// Number of position pairs listed in position_summary.csv.
inline constexpr std::size_t kSummaryPairs = 20;

BlockmodelFiles export_blockmodel(
    const Matrix& pi_hat, const Matrix& phi_hat,
    const std::vector<std::string>& node_names,
    const std::vector<std::optional<ClassId>>& node_labels,
    const std::vector<std::string>& class_names,
    const std::filesystem::path& out_dir);

BlockmodelFiles export_blockmodel(const FitReport& report,
                                  const InteractionNetwork& network,
                                  const LabelSet& labels,
                                  const std::filesystem::path& out_dir);

void write_predictions_csv(std::ostream& out,
                           const std::vector<Prediction>& predictions,
                           const std::vector<std::string>& node_names,
                           const std::vector<std::string>& class_names);

// Flat key/value JSON document.
void write_metrics_json(std::ostream& out, const MetricReport& metrics,
                        const std::vector<std::string>& class_names,
                        const std::vector<std::pair<std::string, double>>& extra);

void write_trace_csv(std::ostream& out, const std::vector<double>& trace);

}  // namespace sbsn
