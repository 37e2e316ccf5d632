#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sbsn/model.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

enum class FitMode { supervised, unsupervised };

std::string to_string(FitMode mode);
FitMode parse_fit_mode(const std::string& text);

struct ExperimentSpec {
  std::filesystem::path edges;
  std::filesystem::path labels;
  bool undirected = false;
  FitMode mode = FitMode::supervised;
  std::vector<std::size_t> K_values{10};
  std::vector<double> train_fractions{2.0 / 3.0};
  std::size_t runs = 25;
  InitMode init_mode = InitMode::flat;
  // Runs whose train macro-F1 falls below this are left out of the means.
  std::optional<double> fit_rejection_threshold;
  // Re-fit a rejected run with fresh initialisation seeds (at most 3 times)
  // instead of only counting it.
  bool redraw_rejected = false;
  std::uint64_t base_seed = 0;
  // Alpha, beta and the convergence controls; K, seed, init mode and
  // supervision are overridden per run.
  ModelConfig model;
  // Also score the wvRN baseline on every split.
  bool with_wvrn = false;
  // Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

struct RunRecord {
  std::size_t K = 0;
  double train_fraction = 0.0;
  std::size_t run = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t init_seed = 0;
  std::size_t attempts = 1;
  double train_macro_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  double wvrn_macro_f1 = 0.0;
  double wvrn_accuracy = 0.0;
  double final_free_energy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool rejected = false;
  bool failed = false;  // numerical failure; counted as rejected
  double wall_seconds = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct SweepCell {
  std::size_t K = 0;
  double train_fraction = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  // Empty when every run in the cell was rejected.
  std::optional<MeanStd> macro_f1;
  std::optional<MeanStd> accuracy;
  std::optional<MeanStd> wvrn_macro_f1;
  std::optional<MeanStd> wvrn_accuracy;
  double mean_free_energy = 0.0;
  double mean_wall_seconds = 0.0;
};

struct SweepResult {
  FitMode mode = FitMode::supervised;
  InitMode init_mode = InitMode::flat;
  std::vector<SweepCell> cells;  // K-major, then fraction, in spec order
  std::vector<RunRecord> runs;   // same order, then run index
};

SweepResult run_experiment(const ExperimentSpec& spec);
SweepResult run_experiment(const ExperimentSpec& spec,
                           const InteractionNetwork& network,
                           const LabelSet& labels);

// Cell with the highest mean macro-F1, if any cell has accepted runs.
const SweepCell* best_cell(const SweepResult& result);

// Deterministic for a fixed spec; wall times go to write_timing_csv only.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_runs_csv(std::ostream& out, const SweepResult& result);
void write_timing_csv(std::ostream& out, const SweepResult& result);

}  // namespace sbsn
