#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "sbsn/matrix.hpp"
#include "sbsn/network.hpp"

namespace sbsn {

// Ground-truth parameters of the generative process.
struct GenerativeParams {
  std::size_t K = 1;
  std::size_t N = 1;
  std::size_t I = 0;
  std::size_t C = 1;
  Matrix pi;   // K x K, sums to 1
  Matrix phi;  // K x N, rows sum to 1
  Matrix eta;  // C x K
  std::uint64_t seed = 0;
};

struct PositionPair {
  std::size_t sender;
  std::size_t receiver;
};

struct SyntheticNetwork {
  InteractionNetwork network;
  LabelSet labels;  // nodes that took part in no interaction stay unlabelled
  std::vector<PositionPair> positions;  // drawn (z_s, z_r) per interaction
};

SyntheticNetwork generate(const GenerativeParams& params);

// Assortative fixture: p_in of the interaction mass on the diagonal of pi,
// disjoint equal node blocks per position, and eta = eta_scale on the cells
// (c, k) with k mod C == c. N must be divisible by K.
GenerativeParams planted_partition(std::size_t K, std::size_t N, std::size_t I,
                                   double p_in, std::size_t C,
                                   double eta_scale, std::uint64_t seed);

// Writes edges.tsv, labels.tsv and positions.csv into dir.
void write_fixture(const SyntheticNetwork& sample,
                   const std::filesystem::path& dir);

}  // namespace sbsn
