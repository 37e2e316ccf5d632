#include "sbsn/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace sbsn {

namespace {

std::string padded(char prefix, std::size_t value, std::size_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string digits = std::to_string(value);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

void check_params(const GenerativeParams& p) {
  if (p.K == 0 || p.N == 0 || p.C == 0) {
    throw std::invalid_argument("K, N and C must be positive");
  }
  if (p.pi.rows() != p.K || p.pi.cols() != p.K || p.phi.rows() != p.K ||
      p.phi.cols() != p.N || p.eta.rows() != p.C || p.eta.cols() != p.K) {
    throw std::invalid_argument("generative parameter shapes do not match");
  }
  for (double x : p.pi.data()) {
    if (!(x >= 0.0)) throw std::invalid_argument("pi has a negative entry");
  }
  if (std::abs(p.pi.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("pi must sum to 1");
  }
  for (std::size_t k = 0; k < p.K; ++k) {
    double total = 0.0;
    for (double x : p.phi.row(k)) {
      if (!(x >= 0.0)) throw std::invalid_argument("phi has a negative entry");
      total += x;
    }
    if (total == 0.0) {
      throw std::invalid_argument("phi row " + std::to_string(k) + " is all zero");
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("phi row " + std::to_string(k) + " must sum to 1");
    }
  }
}

}  // namespace

SyntheticNetwork generate(const GenerativeParams& params) {
  check_params(params);
  const std::size_t K = params.K;
  std::mt19937_64 rng(params.seed);
  std::discrete_distribution<std::size_t> pair_dist(params.pi.data().begin(),
                                                    params.pi.data().end());
  std::vector<std::discrete_distribution<NodeId>> node_dist;
  for (std::size_t k = 0; k < K; ++k) {
    node_dist.emplace_back(params.phi.row(k).begin(), params.phi.row(k).end());
  }

  SyntheticNetwork out;
  std::vector<Interaction> interactions;
  interactions.reserve(params.I);
  out.positions.reserve(params.I);
  Matrix position_counts(params.N, K);
  for (std::size_t i = 0; i < params.I; ++i) {
    const std::size_t cell = pair_dist(rng);
    const PositionPair z{cell / K, cell % K};
    const NodeId s = node_dist[z.sender](rng);
    const NodeId r = node_dist[z.receiver](rng);
    interactions.push_back({s, r});
    out.positions.push_back(z);
    position_counts(s, z.sender) += 1.0;
    position_counts(r, z.receiver) += 1.0;
  }

  std::vector<std::string> names;
  for (std::size_t v = 0; v < params.N; ++v) names.push_back(padded('v', v, params.N));
  out.network = InteractionNetwork(std::move(names), std::move(interactions));

  std::vector<std::string> classes;
  for (std::size_t c = 0; c < params.C; ++c) classes.push_back(padded('c', c, params.C));
  out.labels = LabelSet(std::move(classes), params.N);

  // y_v ~ Softmax(eta, z-bar_v) from the realised position indicators.
  std::vector<double> logits(params.C);
  for (NodeId v = 0; v < params.N; ++v) {
    const auto n = static_cast<double>(out.network.incidence_count(v));
    if (n == 0.0) continue;
    double top = -INFINITY;
    for (std::size_t c = 0; c < params.C; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        s += params.eta(c, k) * position_counts(v, k) / n;
      }
      logits[c] = s;
      top = std::max(top, s);
    }
    for (double& l : logits) l = std::exp(l - top);
    std::discrete_distribution<ClassId> label_dist(logits.begin(), logits.end());
    out.labels.set_label(v, label_dist(rng));
  }
  return out;
}

GenerativeParams planted_partition(std::size_t K, std::size_t N, std::size_t I,
                                   double p_in, std::size_t C,
                                   double eta_scale, std::uint64_t seed) {
  if (!(p_in > 0.0 && p_in <= 1.0)) {
    throw std::invalid_argument("p_in must lie in (0, 1]");
  }
  if (K == 0 || C == 0 || N == 0 || N % K != 0) {
    throw std::invalid_argument("N must be a positive multiple of K");
  }
  GenerativeParams p;
  p.K = K;
  p.N = N;
  p.I = I;
  p.C = C;
  p.seed = seed;
  p.pi = Matrix(K, K);
  if (K == 1) {
    p.pi(0, 0) = 1.0;
  } else {
    const double off = (1.0 - p_in) / static_cast<double>(K * K - K);
    for (std::size_t a = 0; a < K; ++a) {
      for (std::size_t b = 0; b < K; ++b) {
        p.pi(a, b) = a == b ? p_in / static_cast<double>(K) : off;
      }
    }
  }
  const std::size_t block = N / K;
  p.phi = Matrix(K, N);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t v = k * block; v < (k + 1) * block; ++v) {
      p.phi(k, v) = 1.0 / static_cast<double>(block);
    }
  }
  p.eta = Matrix(C, K);
  for (std::size_t k = 0; k < K; ++k) p.eta(k % C, k) = eta_scale;
  return p;
}

void write_fixture(const SyntheticNetwork& sample,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  auto edges = open("edges.tsv");
  write_edge_list(edges, sample.network);
  auto labels = open("labels.tsv");
  write_labels(labels, sample.network, sample.labels);
  auto positions = open("positions.csv");
  positions << "interaction,z_s,z_r\n";
  for (std::size_t i = 0; i < sample.positions.size(); ++i) {
    positions << i << ',' << sample.positions[i].sender << ','
              << sample.positions[i].receiver << '\n';
  }
}

}  // namespace sbsn
