#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbsn/matrix.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

enum class InitMode { flat, comm };

std::string to_string(InitMode mode);
InitMode parse_init_mode(const std::string& text);

struct ModelConfig {
  std::size_t K = 10;
  double alpha = 2.0;
  // Dirichlet concentration over nodes; 1/C when unset.
  std::optional<double> beta;
  InitMode init_mode = InitMode::flat;
  // When false the label terms are dropped from the E-step and eta is only
  // trained once, after the positions have converged.
  bool supervised = true;
  std::size_t max_iterations = 200;
  double free_energy_rel_tol = 1e-6;
  std::size_t cg_max_steps = 50;
  double cg_grad_tol = 1e-5;
  std::uint64_t seed = 0;

  double beta_for(std::size_t class_count) const {
    return beta ? *beta : 1.0 / static_cast<double>(class_count);
  }
  void validate() const;
};

// A non-finite value appeared during fitting.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::size_t iteration,
                   std::optional<std::size_t> interaction = std::nullopt);
  std::size_t iteration() const { return iteration_; }
  std::optional<std::size_t> interaction() const { return interaction_; }

 private:
  std::size_t iteration_;
  std::optional<std::size_t> interaction_;
};

// Running log-products behind the softmax normaliser approximation.
//
// For a train node v, incidence j of v and class c the log factor is
//   log sum_k m_{j,k} exp(eta_{c,k} / n_v)
// where m_j is the position marginal of v's role in interaction j. `total`
// holds the per-node sums of those factors over all incidences.
struct LogFactorCache {
  std::vector<double> incidence_log;  // ((2 * i + role) * C + c)
  Matrix total;                       // N x C
  std::vector<bool> tracked;          // node v is a train node
};

struct VariationalState {
  std::size_t K = 0;
  std::size_t C = 0;
  std::vector<double> lambda;  // I blocks of K*K, index k1 * K + k2
  Matrix zeta;                 // K x N
  Matrix omega;                // K x K
  Matrix eta;                  // C x K
  LogFactorCache cache;

  std::span<double> lambda_of(std::size_t i) {
    return {lambda.data() + i * K * K, K * K};
  }
  std::span<const double> lambda_of(std::size_t i) const {
    return {lambda.data() + i * K * K, K * K};
  }
  std::size_t interaction_count() const {
    return K == 0 ? 0 : lambda.size() / (K * K);
  }
};

struct FitReport {
  std::vector<double> free_energy_trace;
  bool converged = false;
  std::size_t iterations_used = 0;
  double train_macro_f1 = 0.0;
  Matrix eta_final;  // C x K
  Matrix pi_hat;     // K x K, sums to 1
  Matrix phi_hat;    // K x N, rows sum to 1
  std::size_t line_search_failures = 0;
  InitMode init_mode = InitMode::flat;
};

}  // namespace sbsn
