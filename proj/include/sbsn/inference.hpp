#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sbsn/model.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

VariationalState init_state(const InteractionNetwork& network,
                            const LabelSet& labels, const ModelConfig& config);

// Writes the length-K position marginal of `role` in interaction i.
void role_marginal(const VariationalState& state, std::size_t i, Role role,
                   std::span<double> out);

// lambda-bar: the mean position marginal over all incidences of v. All zero
// when v has no incidences.
std::vector<double> mean_marginal(const VariationalState& state,
                                  const InteractionNetwork& network, NodeId v);

// Recomputes every cached log factor for the train nodes of `labels`.
void rebuild_cache(VariationalState& state, const InteractionNetwork& network,
                   const LabelSet& labels);

// One Gauss-Seidel sweep over the interactions in stored order. `iteration`
// only labels errors.
void e_step(VariationalState& state, const InteractionNetwork& network,
            const LabelSet& labels, const ModelConfig& config,
            std::size_t iteration = 0);

// h for the train endpoint occupying `role` in interaction i, read from the
// log-factor cache. Throws std::logic_error when that endpoint is not cached.
std::vector<double> compute_h(const VariationalState& state,
                              const InteractionNetwork& network, std::size_t i,
                              Role role);

// Exact recomputation of zeta and omega from lambda.
void m_step_counts(VariationalState& state, const InteractionNetwork& network,
                   const ModelConfig& config);

// The eta part of the free energy at an arbitrary eta (C x K, row-major) with
// lambda held at its current value; fills grad when it is non-empty.
double eta_objective(const VariationalState& state,
                     const InteractionNetwork& network, const LabelSet& labels,
                     std::span<const double> eta, std::span<double> grad = {});

struct EtaFitResult {
  double objective = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::vector<double> accepted_values;
};

// Conjugate-gradient ascent on eta_objective, warm-started from state.eta.
// Leaves the cache consistent with the new eta.
EtaFitResult optimize_eta(VariationalState& state,
                          const InteractionNetwork& network,
                          const LabelSet& labels, const ModelConfig& config);

// Evidence lower bound of the factored posterior. The softmax terms of train
// nodes are included when config.supervised is set.
double free_energy(const VariationalState& state,
                   const InteractionNetwork& network, const LabelSet& labels,
                   const ModelConfig& config);

// pi_hat = omega / sum(omega); phi_hat row k = zeta_k / sum(zeta_k).
Matrix expected_pi(const VariationalState& state);
Matrix expected_phi(const VariationalState& state);

// Runs the EM loop from an already initialised state.
FitReport fit_from(VariationalState& state, const InteractionNetwork& network,
                   const LabelSet& labels, const ModelConfig& config);

std::pair<VariationalState, FitReport> fit(const InteractionNetwork& network,
                                           const LabelSet& labels,
                                           const ModelConfig& config);

}  // namespace sbsn
