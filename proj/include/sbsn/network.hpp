#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sbsn {

using NodeId = std::uint32_t;
using ClassId = std::uint32_t;

// Raised for malformed or inconsistent input files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interaction {
  NodeId sender;
  NodeId receiver;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Which end of an interaction a node occupies.
enum class Role : std::uint8_t { sender = 0, receiver = 1 };

// One endpoint occurrence of a node. A self-loop yields two incidences.
struct Incidence {
  std::size_t interaction;
  Role role;
};

// Directed multigraph stored as an ordered interaction list.
class InteractionNetwork {
 public:
  InteractionNetwork() = default;

  // Nodes are 0..names.size()-1; every interaction endpoint must be in range.
  InteractionNetwork(std::vector<std::string> names,
                     std::vector<Interaction> interactions);

  std::size_t node_count() const { return names_.size(); }
  std::size_t interaction_count() const { return interactions_.size(); }

  const std::vector<Interaction>& interactions() const { return interactions_; }
  const Interaction& interaction(std::size_t i) const { return interactions_[i]; }

  // n_v: number of interaction endpoints at v.
  std::size_t incidence_count(NodeId v) const {
    return offsets_[v + 1] - offsets_[v];
  }
  const std::vector<std::size_t>& incidence_counts() const { return degree_; }

  // Incidences of v in interaction order (sender before receiver for loops).
  std::span<const Incidence> incidences(NodeId v) const;

  const std::string& name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Interaction> interactions_;
  std::vector<std::size_t> degree_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidences_;
};

// Partial node -> class assignment with train/test membership.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::vector<std::string> class_names, std::size_t node_count);

  std::size_t class_count() const { return class_names_.size(); }
  std::size_t node_count() const { return labels_.size(); }
  const std::vector<std::string>& class_names() const { return class_names_; }

  void set_label(NodeId v, ClassId c);
  std::optional<ClassId> label(NodeId v) const { return labels_.at(v); }

  // Labelled node ids in increasing order.
  std::vector<NodeId> labelled_nodes() const;

  bool in_train(NodeId v) const { return role_.at(v) == MaskRole::train; }
  bool in_test(NodeId v) const { return role_.at(v) == MaskRole::test; }
  std::vector<NodeId> train_nodes() const;
  std::vector<NodeId> test_nodes() const;

  // Replaces both masks. Every listed node must be labelled; the lists must
  // be disjoint.
  void assign_masks(const std::vector<NodeId>& train,
                    const std::vector<NodeId>& test);
  void clear_masks();

  // Class of v if v is a train node, else nullopt.
  std::optional<ClassId> train_label(NodeId v) const {
    return in_train(v) ? labels_[v] : std::nullopt;
  }

 private:
  enum class MaskRole : std::uint8_t { none, train, test };
  std::vector<std::string> class_names_;
  std::vector<std::optional<ClassId>> labels_;
  std::vector<MaskRole> role_;
};

InteractionNetwork load_edge_list(const std::filesystem::path& path,
                                  bool directed);
InteractionNetwork parse_edge_list(std::istream& in, bool directed);

LabelSet load_labels(const std::filesystem::path& path,
                     const InteractionNetwork& network);
LabelSet parse_labels(std::istream& in, const InteractionNetwork& network);

// Seeded random train/test partition of the labelled nodes. Every class with
// at least two labelled nodes keeps at least one train node when the train
// size allows it.
LabelSet split(const LabelSet& labels, double train_fraction,
               std::uint64_t seed);

void write_edge_list(std::ostream& out, const InteractionNetwork& network);
void write_labels(std::ostream& out, const InteractionNetwork& network,
                  const LabelSet& labels);
void write_split_manifest(std::ostream& out, const InteractionNetwork& network,
                          const LabelSet& labels);

}  // namespace sbsn
