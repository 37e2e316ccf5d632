#include "sbsn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sbsn/classify.hpp"
#include "sbsn/conjugate_gradient.hpp"
#include "sbsn/digamma.hpp"

namespace sbsn {

std::string to_string(InitMode mode) {
  return mode == InitMode::comm ? "comm" : "flat";
}

InitMode parse_init_mode(const std::string& text) {
  if (text == "flat") return InitMode::flat;
  if (text == "comm") return InitMode::comm;
  throw std::invalid_argument("unknown init mode: " + text);
}

void ModelConfig::validate() const {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (beta && !(*beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(free_energy_rel_tol > 0.0)) {
    throw std::invalid_argument("free_energy_rel_tol must be positive");
  }
  if (cg_max_steps < 1) throw std::invalid_argument("cg_max_steps must be positive");
  if (!(cg_grad_tol > 0.0)) throw std::invalid_argument("cg_grad_tol must be positive");
}

NumericalFailure::NumericalFailure(const std::string& what,
                                   std::size_t iteration,
                                   std::optional<std::size_t> interaction)
    : std::runtime_error("numerical failure: " + what + " (iteration " +
                         std::to_string(iteration) +
                         (interaction ? ", interaction " +
                                            std::to_string(*interaction)
                                      : std::string()) +
                         ")"),
      iteration_(iteration),
      interaction_(interaction) {}

namespace {

constexpr std::size_t incidence_slot(std::size_t i, Role role) {
  return 2 * i + static_cast<std::size_t>(role);
}

NodeId endpoint(const Interaction& e, Role role) {
  return role == Role::sender ? e.sender : e.receiver;
}

double beta_of(const ModelConfig& config, std::size_t C) {
  if (!config.beta && C == 0) {
    throw std::invalid_argument("beta defaults to 1/C but there are no classes");
  }
  return config.beta_for(C);
}

// log sum_k m_k exp(eta_k / n)
double log_factor(std::span<const double> m, std::span<const double> eta_row,
                  double inv_n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double e : eta_row) mx = std::max(mx, e * inv_n);
  double sum = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    sum += m[k] * std::exp(eta_row[k] * inv_n - mx);
  }
  return std::log(sum) + mx;
}

// Digamma expectations E[log phi_{k,v}] and E[log pi_{k1,k2}].
struct ExpectedLogs {
  Matrix log_phi;  // K x N
  std::vector<double> log_pi;
};

// Dirichlet parameters must be positive and finite, totals included.
void check_dirichlet(double x, std::size_t iteration) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw NumericalFailure("Dirichlet parameter is not positive and finite", iteration);
  }
}

ExpectedLogs expected_logs(const VariationalState& state, std::size_t iteration) {
  const std::size_t K = state.K;
  const std::size_t N = state.zeta.cols();
  ExpectedLogs out{Matrix(K, N), std::vector<double>(K * K)};
  for (double x : state.zeta.data()) check_dirichlet(x, iteration);
  for (double x : state.omega.data()) check_dirichlet(x, iteration);
  check_dirichlet(state.omega.sum(), iteration);
  for (std::size_t k = 0; k < K; ++k) {
    double total = 0.0;
    for (double z : state.zeta.row(k)) total += z;
    check_dirichlet(total, iteration);
    const double psi_total = digamma(total);
    for (std::size_t v = 0; v < N; ++v) {
      out.log_phi(k, v) = digamma(state.zeta(k, v)) - psi_total;
    }
  }
  const double psi_total = digamma(state.omega.sum());
  for (std::size_t c = 0; c < K * K; ++c) {
    out.log_pi[c] = digamma(state.omega.data()[c]) - psi_total;
  }
  return out;
}

// The eta objective with every train incidence marginal gathered up front.
class EtaProblem {
 public:
  EtaProblem(const VariationalState& state, const InteractionNetwork& network,
             const LabelSet& labels)
      : K_(state.K), C_(state.C) {
    std::vector<double> m(K_);
    for (NodeId v : labels.train_nodes()) {
      const auto inc = network.incidences(v);
      if (inc.empty()) continue;
      Node node;
      node.label = *labels.label(v);
      node.inv_n = 1.0 / static_cast<double>(inc.size());
      node.first = marginals_.size() / K_;
      node.mean.assign(K_, 0.0);
      for (const Incidence& j : inc) {
        role_marginal(state, j.interaction, j.role, m);
        for (std::size_t k = 0; k < K_; ++k) node.mean[k] += m[k] * node.inv_n;
        marginals_.insert(marginals_.end(), m.begin(), m.end());
      }
      node.count = inc.size();
      const auto slot = std::find(degrees_.begin(), degrees_.end(), node.count);
      node.degree_slot = static_cast<std::size_t>(slot - degrees_.begin());
      if (slot == degrees_.end()) degrees_.push_back(node.count);
      nodes_.push_back(std::move(node));
    }
  }

  bool empty() const { return nodes_.empty(); }

  double evaluate(std::span<const double> eta, std::span<double> grad) const {
    const bool want_grad = !grad.empty();
    if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
    std::vector<double> log_norm(C_), prod(C_), weights(K_), acc(want_grad ? C_ * K_ : 0);
    // exp(eta_ck / n), shifted per class for stability, for every distinct degree n.
    std::vector<double> scaled(degrees_.size() * C_ * K_), shifts(degrees_.size() * C_);
    for (std::size_t d = 0; d < degrees_.size(); ++d) {
      const double inv_n = 1.0 / static_cast<double>(degrees_[d]);
      for (std::size_t c = 0; c < C_; ++c) {
        const double* row = eta.data() + c * K_;
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K_; ++k) mx = std::max(mx, row[k] * inv_n);
        shifts[d * C_ + c] = mx;
        double* out = scaled.data() + (d * C_ + c) * K_;
        for (std::size_t k = 0; k < K_; ++k) out[k] = std::exp(row[k] * inv_n - mx);
      }
    }
    double value = 0.0;
    for (const Node& node : nodes_) {
      std::fill(log_norm.begin(), log_norm.end(), 0.0);
      std::fill(prod.begin(), prod.end(), 1.0);
      std::fill(acc.begin(), acc.end(), 0.0);
      const double* table = scaled.data() + node.degree_slot * C_ * K_;
      const double* shift = shifts.data() + node.degree_slot * C_;
      for (std::size_t j = 0; j < node.count; ++j) {
        const double* m = marginals_.data() + (node.first + j) * K_;
        for (std::size_t c = 0; c < C_; ++c) {
          const double* e = table + c * K_;
          double f = 0.0;
          for (std::size_t k = 0; k < K_; ++k) {
            weights[k] = m[k] * e[k];
            f += weights[k];
          }
          // Products are flushed into the log before they can underflow.
          if (f < 1e-150) {
            log_norm[c] += std::log(f);
          } else {
            if (prod[c] < 1e-150) {
              log_norm[c] += std::log(prod[c]);
              prod[c] = 1.0;
            }
            prod[c] *= f;
          }
          if (want_grad) {
            const double scale = node.inv_n / f;
            for (std::size_t k = 0; k < K_; ++k) acc[c * K_ + k] += weights[k] * scale;
          }
        }
      }
      for (std::size_t c = 0; c < C_; ++c) {
        log_norm[c] += std::log(prod[c]) + static_cast<double>(node.count) * shift[c];
      }
      const double mx = *std::max_element(log_norm.begin(), log_norm.end());
      double z = 0.0;
      for (double s : log_norm) z += std::exp(s - mx);
      const double lse = std::log(z) + mx;

      const double* own = eta.data() + node.label * K_;
      for (std::size_t k = 0; k < K_; ++k) value += own[k] * node.mean[k];
      value -= lse;

      if (want_grad) {
        for (std::size_t k = 0; k < K_; ++k) grad[node.label * K_ + k] += node.mean[k];
        for (std::size_t c = 0; c < C_; ++c) {
          const double p = std::exp(log_norm[c] - lse);
          for (std::size_t k = 0; k < K_; ++k) grad[c * K_ + k] -= p * acc[c * K_ + k];
        }
      }
    }
    return value;
  }

 private:
  struct Node {
    ClassId label = 0;
    double inv_n = 0.0;
    std::size_t first = 0;
    std::size_t count = 0;
    std::size_t degree_slot = 0;
    std::vector<double> mean;
  };
  std::size_t K_;
  std::size_t C_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> degrees_;
  std::vector<double> marginals_;
};

// h scaled by an arbitrary positive constant, which cancels in h_k / h'm.
void scaled_h(const VariationalState& state, NodeId v, std::size_t slot,
              double inv_n, std::span<double> h) {
  const std::size_t K = state.K;
  const std::size_t C = state.C;
  const double* own = state.cache.incidence_log.data() + slot * C;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < C; ++c) {
    const double rest = state.cache.total(v, c) - own[c];
    for (std::size_t k = 0; k < K; ++k) {
      top = std::max(top, state.eta(c, k) * inv_n + rest);
    }
  }
  std::fill(h.begin(), h.end(), 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    const double rest = state.cache.total(v, c) - own[c];
    for (std::size_t k = 0; k < K; ++k) {
      h[k] += std::exp(state.eta(c, k) * inv_n + rest - top);
    }
  }
}

void refresh_incidence(VariationalState& state, std::size_t i, Role role,
                       NodeId v, double inv_n, std::span<double> scratch) {
  role_marginal(state, i, role, scratch);
  const std::size_t C = state.C;
  double* own = state.cache.incidence_log.data() + incidence_slot(i, role) * C;
  for (std::size_t c = 0; c < C; ++c) {
    const double fresh = log_factor(scratch, state.eta.row(c), inv_n);
    state.cache.total(v, c) += fresh - own[c];
    own[c] = fresh;
  }
}

}  // namespace

void role_marginal(const VariationalState& state, std::size_t i, Role role,
                   std::span<double> out) {
  const std::size_t K = state.K;
  const auto lam = state.lambda_of(i);
  std::fill(out.begin(), out.end(), 0.0);
  if (role == Role::sender) {
    for (std::size_t k1 = 0; k1 < K; ++k1) {
      for (std::size_t k2 = 0; k2 < K; ++k2) out[k1] += lam[k1 * K + k2];
    }
  } else {
    for (std::size_t k1 = 0; k1 < K; ++k1) {
      for (std::size_t k2 = 0; k2 < K; ++k2) out[k2] += lam[k1 * K + k2];
    }
  }
}

std::vector<double> mean_marginal(const VariationalState& state,
                                  const InteractionNetwork& network, NodeId v) {
  std::vector<double> mean(state.K, 0.0), m(state.K);
  const auto inc = network.incidences(v);
  if (inc.empty()) return mean;
  for (const Incidence& j : inc) {
    role_marginal(state, j.interaction, j.role, m);
    for (std::size_t k = 0; k < state.K; ++k) mean[k] += m[k];
  }
  const double inv_n = 1.0 / static_cast<double>(inc.size());
  for (double& x : mean) x *= inv_n;
  return mean;
}

void rebuild_cache(VariationalState& state, const InteractionNetwork& network,
                   const LabelSet& labels) {
  const std::size_t N = network.node_count();
  const std::size_t C = state.C;
  auto& cache = state.cache;
  cache.incidence_log.assign(2 * network.interaction_count() * C, 0.0);
  cache.total = Matrix(N, C);
  cache.tracked.assign(N, false);
  std::vector<double> m(state.K);
  for (NodeId v : labels.train_nodes()) {
    const auto inc = network.incidences(v);
    if (inc.empty()) continue;
    cache.tracked[v] = true;
    const double inv_n = 1.0 / static_cast<double>(inc.size());
    for (const Incidence& j : inc) {
      role_marginal(state, j.interaction, j.role, m);
      double* own = cache.incidence_log.data() + incidence_slot(j.interaction, j.role) * C;
      for (std::size_t c = 0; c < C; ++c) {
        own[c] = log_factor(m, state.eta.row(c), inv_n);
        cache.total(v, c) += own[c];
      }
    }
  }
}

VariationalState init_state(const InteractionNetwork& network,
                            const LabelSet& labels, const ModelConfig& config) {
  config.validate();
  if (labels.node_count() != network.node_count()) {
    throw std::invalid_argument("label set does not match the network");
  }
  const std::size_t K = config.K;
  const std::size_t I = network.interaction_count();
  VariationalState state;
  state.K = K;
  state.C = labels.class_count();
  state.lambda.assign(I * K * K, 1.0);

  std::mt19937_64 rng(config.seed);
  if (K > 1) {
    // Symmetric Dirichlet(1) through normalised unit exponentials.
    std::exponential_distribution<double> unit_exp(1.0);
    for (std::size_t i = 0; i < I; ++i) {
      auto lam = state.lambda_of(i);
      double sum = 0.0;
      for (double& x : lam) {
        x = unit_exp(rng);
        sum += x;
      }
      for (double& x : lam) x /= sum;
    }
  }
  std::uniform_real_distribution<double> small(-0.1, 0.1);
  state.eta = Matrix(state.C, K);
  for (double& x : state.eta.data()) x = small(rng);

  m_step_counts(state, network, config);
  if (config.init_mode == InitMode::comm) {
    state.omega = Matrix(K, K, config.alpha);
    const double diag = static_cast<double>(I) / static_cast<double>(K);
    for (std::size_t k = 0; k < K; ++k) state.omega(k, k) += diag;
  }
  rebuild_cache(state, network, labels);
  return state;
}

std::vector<double> compute_h(const VariationalState& state,
                              const InteractionNetwork& network, std::size_t i,
                              Role role) {
  const NodeId v = endpoint(network.interaction(i), role);
  if (v >= state.cache.tracked.size() || !state.cache.tracked[v] ||
      state.cache.incidence_log.size() < (incidence_slot(i, role) + 1) * state.C) {
    throw std::logic_error("compute_h: endpoint has no cached log factors");
  }
  const double inv_n = 1.0 / static_cast<double>(network.incidence_count(v));
  const double* own = state.cache.incidence_log.data() + incidence_slot(i, role) * state.C;
  std::vector<double> h(state.K, 0.0);
  for (std::size_t c = 0; c < state.C; ++c) {
    const double rest = state.cache.total(v, c) - own[c];
    for (std::size_t k = 0; k < state.K; ++k) {
      h[k] += std::exp(state.eta(c, k) * inv_n + rest);
    }
  }
  return h;
}

void e_step(VariationalState& state, const InteractionNetwork& network,
            const LabelSet& labels, const ModelConfig& config,
            std::size_t iteration) {
  const std::size_t K = state.K;
  const std::size_t I = network.interaction_count();
  if (K == 1) {
    std::fill(state.lambda.begin(), state.lambda.end(), 1.0);
    return;
  }
  const bool supervised = config.supervised && state.C > 0;
  if (supervised) rebuild_cache(state, network, labels);

  const ExpectedLogs logs = expected_logs(state, iteration);
  const double pi_top = *std::max_element(logs.log_pi.begin(), logs.log_pi.end());
  std::vector<double> pi_weight(K * K);
  for (std::size_t c = 0; c < K * K; ++c) pi_weight[c] = std::exp(logs.log_pi[c] - pi_top);

  std::vector<double> a(K), b(K), ea(K), eb(K), m(K), h(K);

  // Adds eta_{y,k}/n_v - h_k / h'm_old for a train endpoint.
  auto add_label_terms = [&](std::size_t i, Role role, NodeId v,
                             std::span<double> terms) {
    if (!supervised) return;
    const auto y = labels.train_label(v);
    if (!y || !state.cache.tracked[v]) return;
    const double inv_n = 1.0 / static_cast<double>(network.incidence_count(v));
    role_marginal(state, i, role, m);
    scaled_h(state, v, incidence_slot(i, role), inv_n, h);
    const double denom = std::inner_product(h.begin(), h.end(), m.begin(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      terms[k] += state.eta(*y, k) * inv_n - h[k] / denom;
    }
  };

  for (std::size_t i = 0; i < I; ++i) {
    const Interaction& e = network.interaction(i);
    for (std::size_t k = 0; k < K; ++k) {
      a[k] = logs.log_phi(k, e.sender);
      b[k] = logs.log_phi(k, e.receiver);
    }
    add_label_terms(i, Role::sender, e.sender, a);
    add_label_terms(i, Role::receiver, e.receiver, b);

    const double a_top = *std::max_element(a.begin(), a.end());
    const double b_top = *std::max_element(b.begin(), b.end());
    if (!std::isfinite(a_top) || !std::isfinite(b_top)) {
      throw NumericalFailure("non-finite position weight", iteration, i);
    }
    for (std::size_t k = 0; k < K; ++k) {
      ea[k] = std::exp(a[k] - a_top);
      eb[k] = std::exp(b[k] - b_top);
    }
    auto lam = state.lambda_of(i);
    double sum = 0.0;
    for (std::size_t k1 = 0; k1 < K; ++k1) {
      for (std::size_t k2 = 0; k2 < K; ++k2) {
        const double w = ea[k1] * pi_weight[k1 * K + k2] * eb[k2];
        lam[k1 * K + k2] = w;
        sum += w;
      }
    }
    if (!(sum > 1e-280) || !std::isfinite(sum)) {
      // Factored weights underflowed; redo the normalisation in log space.
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t k1 = 0; k1 < K; ++k1) {
        for (std::size_t k2 = 0; k2 < K; ++k2) {
          top = std::max(top, a[k1] + b[k2] + logs.log_pi[k1 * K + k2]);
        }
      }
      sum = 0.0;
      for (std::size_t k1 = 0; k1 < K; ++k1) {
        for (std::size_t k2 = 0; k2 < K; ++k2) {
          const double w = std::exp(a[k1] + b[k2] + logs.log_pi[k1 * K + k2] - top);
          lam[k1 * K + k2] = w;
          sum += w;
        }
      }
      if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw NumericalFailure("position-pair posterior did not normalise",
                               iteration, i);
      }
    }
    const double inv = 1.0 / sum;
    for (double& x : lam) x *= inv;

    if (supervised) {
      for (Role role : {Role::sender, Role::receiver}) {
        const NodeId v = endpoint(e, role);
        if (!state.cache.tracked[v]) continue;
        refresh_incidence(state, i, role, v,
                          1.0 / static_cast<double>(network.incidence_count(v)), m);
      }
    }
  }
}

void m_step_counts(VariationalState& state, const InteractionNetwork& network,
                   const ModelConfig& config) {
  const std::size_t K = state.K;
  state.zeta = Matrix(K, network.node_count(), beta_of(config, state.C));
  state.omega = Matrix(K, K, config.alpha);
  for (std::size_t i = 0; i < network.interaction_count(); ++i) {
    const Interaction& e = network.interaction(i);
    const auto lam = state.lambda_of(i);
    for (std::size_t k1 = 0; k1 < K; ++k1) {
      for (std::size_t k2 = 0; k2 < K; ++k2) {
        const double x = lam[k1 * K + k2];
        state.zeta(k1, e.sender) += x;
        state.zeta(k2, e.receiver) += x;
        state.omega(k1, k2) += x;
      }
    }
  }
}

double eta_objective(const VariationalState& state,
                     const InteractionNetwork& network, const LabelSet& labels,
                     std::span<const double> eta, std::span<double> grad) {
  if (eta.size() != state.C * state.K) {
    throw std::invalid_argument("eta must have C * K entries");
  }
  return EtaProblem(state, network, labels).evaluate(eta, grad);
}

EtaFitResult optimize_eta(VariationalState& state,
                          const InteractionNetwork& network,
                          const LabelSet& labels, const ModelConfig& config) {
  const EtaProblem problem(state, network, labels);
  if (problem.empty()) {
    throw std::invalid_argument("optimize_eta needs a train node with interactions");
  }
  CgOptions options;
  options.max_steps = config.cg_max_steps;
  options.grad_tol = config.cg_grad_tol;
  std::vector<double> x = state.eta.data();
  const CgResult cg = maximize_conjugate_gradient(
      [&](std::span<const double> at, std::span<double> grad) {
        return problem.evaluate(at, grad);
      },
      x, options);
  state.eta.data() = std::move(x);
  rebuild_cache(state, network, labels);
  return {cg.value, cg.steps, cg.converged, cg.line_search_failed,
          cg.accepted_values};
}

double free_energy(const VariationalState& state,
                   const InteractionNetwork& network, const LabelSet& labels,
                   const ModelConfig& config) {
  const std::size_t K = state.K;
  const std::size_t N = network.node_count();
  const double alpha = config.alpha;
  const double beta = beta_of(config, state.C);
  const ExpectedLogs logs = expected_logs(state, 0);
  const double cells = static_cast<double>(K * K);
  const double nodes = static_cast<double>(N);

  // Dirichlet prior minus Dirichlet posterior entropy terms for pi.
  double f = std::lgamma(cells * alpha) - cells * std::lgamma(alpha);
  f -= std::lgamma(state.omega.sum());
  for (std::size_t c = 0; c < K * K; ++c) {
    const double w = state.omega.data()[c];
    f += (alpha - w) * logs.log_pi[c] + std::lgamma(w);
  }
  // ... and for each phi_k.
  for (std::size_t k = 0; k < K; ++k) {
    double total = 0.0;
    for (double z : state.zeta.row(k)) total += z;
    f += std::lgamma(nodes * beta) - nodes * std::lgamma(beta) - std::lgamma(total);
    for (std::size_t v = 0; v < N; ++v) {
      const double z = state.zeta(k, v);
      f += (beta - z) * logs.log_phi(k, v) + std::lgamma(z);
    }
  }
  // Expected complete-data log-likelihood of (z, s, r) plus entropy of q(z).
  for (std::size_t i = 0; i < network.interaction_count(); ++i) {
    const Interaction& e = network.interaction(i);
    const auto lam = state.lambda_of(i);
    for (std::size_t k1 = 0; k1 < K; ++k1) {
      for (std::size_t k2 = 0; k2 < K; ++k2) {
        const double x = lam[k1 * K + k2];
        if (x <= 0.0) continue;
        f += x * (logs.log_pi[k1 * K + k2] + logs.log_phi(k1, e.sender) +
                  logs.log_phi(k2, e.receiver) - std::log(x));
      }
    }
  }
  if (config.supervised && state.C > 0) {
    f += eta_objective(state, network, labels, state.eta.data());
  }
  if (!std::isfinite(f)) throw NumericalFailure("free energy is not finite", 0);
  return f;
}

Matrix expected_pi(const VariationalState& state) {
  Matrix pi = state.omega;
  const double total = pi.sum();
  for (double& x : pi.data()) x /= total;
  return pi;
}

Matrix expected_phi(const VariationalState& state) {
  Matrix phi = state.zeta;
  for (std::size_t k = 0; k < phi.rows(); ++k) {
    auto row = phi.row(k);
    double total = 0.0;
    for (double x : row) total += x;
    for (double& x : row) x /= total;
  }
  return phi;
}

FitReport fit_from(VariationalState& state, const InteractionNetwork& network,
                   const LabelSet& labels, const ModelConfig& config) {
  FitReport report;
  report.init_mode = config.init_mode;
  const auto train = labels.train_nodes();
  const bool has_train =
      state.C > 0 && std::any_of(train.begin(), train.end(), [&](NodeId v) {
        return network.incidence_count(v) > 0;
      });
  const bool supervised = config.supervised && has_train;
  ModelConfig loop_config = config;
  loop_config.supervised = supervised;

  for (std::size_t it = 1; it <= config.max_iterations; ++it) {
    e_step(state, network, labels, loop_config, it);
    m_step_counts(state, network, loop_config);
    if (supervised) {
      if (optimize_eta(state, network, labels, loop_config).line_search_failed) {
        ++report.line_search_failures;
      }
    }
    double f = 0.0;
    try {
      f = free_energy(state, network, labels, loop_config);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(e.what(), it);
    }
    report.free_energy_trace.push_back(f);
    report.iterations_used = it;
    if (report.free_energy_trace.size() >= 2) {
      const double prev = report.free_energy_trace[report.free_energy_trace.size() - 2];
      if (std::abs(f - prev) <= config.free_energy_rel_tol * std::abs(f)) {
        report.converged = true;
        break;
      }
    }
  }
  if (!supervised && has_train) {
    // Positions were fitted without labels; train the classifier on them.
    if (optimize_eta(state, network, labels, loop_config).line_search_failed) {
      ++report.line_search_failures;
    }
  }

  if (has_train) {
    const auto predictions =
        predict(state, network, train, majority_train_class(labels));
    report.train_macro_f1 = score(predictions, labels).macro_f1;
  }
  report.eta_final = state.eta;
  report.pi_hat = expected_pi(state);
  report.phi_hat = expected_phi(state);
  return report;
}

std::pair<VariationalState, FitReport> fit(const InteractionNetwork& network,
                                           const LabelSet& labels,
                                           const ModelConfig& config) {
  VariationalState state = init_state(network, labels, config);
  FitReport report = fit_from(state, network, labels, config);
  return {std::move(state), std::move(report)};
}

}  // namespace sbsn
