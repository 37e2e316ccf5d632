#include "sbsn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sbsn/classify.hpp"
#include "sbsn/inference.hpp"

namespace sbsn {

std::string to_string(FitMode mode) {
  return mode == FitMode::supervised ? "supervised" : "unsupervised";
}

FitMode parse_fit_mode(const std::string& text) {
  if (text == "supervised") return FitMode::supervised;
  if (text == "unsupervised") return FitMode::unsupervised;
  throw std::invalid_argument("unknown fit mode: " + text);
}

void ExperimentSpec::validate() const {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (K_values.empty()) throw std::invalid_argument("no K values given");
  if (train_fractions.empty()) throw std::invalid_argument("no train fractions given");
  for (double f : train_fractions) {
    if (!(f > 0.0 && f < 1.0)) {
      throw std::invalid_argument("train fractions must lie in (0, 1)");
    }
  }
  if (fit_rejection_threshold &&
      !(*fit_rejection_threshold >= 0.0 && *fit_rejection_threshold <= 1.0)) {
    throw std::invalid_argument("rejection threshold must lie in [0, 1]");
  }
}

namespace {

constexpr std::size_t kMaxRedraws = 3;

std::uint64_t init_seed_for(std::uint64_t split_seed) {
  return split_seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
}

RunRecord run_one(const ExperimentSpec& spec, const InteractionNetwork& network,
                  const LabelSet& labels, std::size_t K, double fraction,
                  std::size_t run) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.K = K;
  rec.train_fraction = fraction;
  rec.run = run;
  rec.split_seed = spec.base_seed + run;
  rec.init_seed = init_seed_for(rec.split_seed);

  const LabelSet masked = split(labels, fraction, rec.split_seed);
  const auto test = masked.test_nodes();
  ModelConfig config = spec.model;
  config.K = K;
  config.init_mode = spec.init_mode;
  config.supervised = spec.mode == FitMode::supervised;

  const std::size_t attempts = spec.redraw_rejected ? 1 + kMaxRedraws : 1;
  for (std::size_t a = 0; a < attempts; ++a) {
    config.seed = rec.init_seed + a;
    rec.attempts = a + 1;
    rec.failed = false;
    try {
      auto [state, report] = fit(network, masked, config);
      rec.train_macro_f1 = report.train_macro_f1;
      rec.final_free_energy = report.free_energy_trace.back();
      rec.iterations = report.iterations_used;
      rec.converged = report.converged;
      if (!test.empty()) {
        const auto metrics = score(
            predict(state, network, test, majority_train_class(masked)), masked);
        rec.macro_f1 = metrics.macro_f1;
        rec.accuracy = metrics.accuracy;
      }
      rec.rejected = spec.fit_rejection_threshold &&
                     rec.train_macro_f1 < *spec.fit_rejection_threshold;
    } catch (const NumericalFailure&) {
      rec.failed = true;
      rec.rejected = true;
    }
    if (!rec.rejected) break;
  }

  if (spec.with_wvrn && !test.empty()) {
    std::vector<Prediction> held_out;
    for (auto& p : wvrn(network, masked)) {
      if (masked.in_test(p.node)) held_out.push_back(std::move(p));
    }
    const auto metrics = score(held_out, masked);
    rec.wvrn_macro_f1 = metrics.macro_f1;
    rec.wvrn_accuracy = metrics.accuracy;
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

template <typename Get>
std::optional<MeanStd> summarize(const std::vector<const RunRecord*>& runs, Get get) {
  if (runs.empty()) return std::nullopt;
  double mean = 0.0;
  for (const RunRecord* r : runs) mean += get(*r);
  mean /= static_cast<double>(runs.size());
  double var = 0.0;
  for (const RunRecord* r : runs) var += (get(*r) - mean) * (get(*r) - mean);
  // Sample standard deviation; zero for a single run.
  const double sd =
      runs.size() > 1 ? std::sqrt(var / static_cast<double>(runs.size() - 1)) : 0.0;
  return MeanStd{mean, sd};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string fmt(const std::optional<MeanStd>& m, bool want_std) {
  if (!m) return "";
  return fmt(want_std ? m->std : m->mean);
}

}  // namespace

SweepResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const InteractionNetwork network = load_edge_list(spec.edges, !spec.undirected);
  const LabelSet labels = load_labels(spec.labels, network);
  return run_experiment(spec, network, labels);
}

SweepResult run_experiment(const ExperimentSpec& spec,
                           const InteractionNetwork& network,
                           const LabelSet& labels) {
  spec.validate();
  struct Job {
    std::size_t K;
    double fraction;
    std::size_t run;
  };
  std::vector<Job> jobs;
  for (std::size_t K : spec.K_values) {
    for (double f : spec.train_fractions) {
      for (std::size_t r = 0; r < spec.runs; ++r) jobs.push_back({K, f, r});
    }
  }

  SweepResult result;
  result.mode = spec.mode;
  result.init_mode = spec.init_mode;
  result.runs.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        result.runs[j] =
            run_one(spec, network, labels, jobs[j].K, jobs[j].fraction, jobs[j].run);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  std::size_t threads = spec.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t first = 0; first < jobs.size(); first += spec.runs) {
    SweepCell cell;
    cell.K = jobs[first].K;
    cell.train_fraction = jobs[first].fraction;
    std::vector<const RunRecord*> accepted, all;
    double energy = 0.0, wall = 0.0;
    for (std::size_t j = first; j < first + spec.runs; ++j) {
      const RunRecord& r = result.runs[j];
      all.push_back(&r);
      energy += r.final_free_energy;
      wall += r.wall_seconds;
      if (r.rejected) {
        ++cell.rejected;
      } else {
        ++cell.accepted;
        accepted.push_back(&r);
      }
    }
    cell.macro_f1 = summarize(accepted, [](const RunRecord& r) { return r.macro_f1; });
    cell.accuracy = summarize(accepted, [](const RunRecord& r) { return r.accuracy; });
    if (spec.with_wvrn) {
      cell.wvrn_macro_f1 =
          summarize(all, [](const RunRecord& r) { return r.wvrn_macro_f1; });
      cell.wvrn_accuracy =
          summarize(all, [](const RunRecord& r) { return r.wvrn_accuracy; });
    }
    cell.mean_free_energy = energy / static_cast<double>(spec.runs);
    cell.mean_wall_seconds = wall / static_cast<double>(spec.runs);
    result.cells.push_back(cell);
  }
  return result;
}

const SweepCell* best_cell(const SweepResult& result) {
  const SweepCell* best = nullptr;
  for (const SweepCell& c : result.cells) {
    if (c.macro_f1 && (!best || c.macro_f1->mean > best->macro_f1->mean)) best = &c;
  }
  return best;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "K,train_fraction,mode,init,accepted,rejected,macro_f1_mean,macro_f1_std,"
         "accuracy_mean,accuracy_std,wvrn_macro_f1_mean,wvrn_accuracy_mean,"
         "free_energy_mean\n";
  for (const SweepCell& c : result.cells) {
    out << c.K << ',' << fmt(c.train_fraction) << ',' << to_string(result.mode) << ','
        << to_string(result.init_mode) << ',' << c.accepted << ',' << c.rejected << ','
        << fmt(c.macro_f1, false) << ',' << fmt(c.macro_f1, true) << ','
        << fmt(c.accuracy, false) << ',' << fmt(c.accuracy, true) << ','
        << fmt(c.wvrn_macro_f1, false) << ',' << fmt(c.wvrn_accuracy, false) << ','
        << fmt(c.mean_free_energy) << '\n';
  }
}

void write_runs_csv(std::ostream& out, const SweepResult& result) {
  out << "K,train_fraction,run,split_seed,init_seed,attempts,train_macro_f1,"
         "macro_f1,accuracy,wvrn_macro_f1,wvrn_accuracy,final_free_energy,"
         "iterations,converged,rejected,failed\n";
  for (const RunRecord& r : result.runs) {
    out << r.K << ',' << fmt(r.train_fraction) << ',' << r.run << ',' << r.split_seed
        << ',' << r.init_seed << ',' << r.attempts << ',' << fmt(r.train_macro_f1)
        << ',' << fmt(r.macro_f1) << ',' << fmt(r.accuracy) << ','
        << fmt(r.wvrn_macro_f1) << ',' << fmt(r.wvrn_accuracy) << ','
        << fmt(r.final_free_energy) << ',' << r.iterations << ',' << r.converged
        << ',' << r.rejected << ',' << r.failed << '\n';
  }
}

void write_timing_csv(std::ostream& out, const SweepResult& result) {
  out << "K,train_fraction,run,wall_seconds\n";
  for (const RunRecord& r : result.runs) {
    out << r.K << ',' << fmt(r.train_fraction) << ',' << r.run << ','
        << fmt(r.wall_seconds) << '\n';
  }
}

}  // namespace sbsn
