#include "sbsn/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace sbsn {

InteractionNetwork::InteractionNetwork(std::vector<std::string> names,
                                       std::vector<Interaction> interactions)
    : names_(std::move(names)), interactions_(std::move(interactions)) {
  const std::size_t n = names_.size();
  index_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!index_.emplace(names_[v], v).second) {
      throw InputError("duplicate node name: " + names_[v]);
    }
  }
  degree_.assign(n, 0);
  for (const auto& e : interactions_) {
    if (e.sender >= n || e.receiver >= n) {
      throw InputError("interaction endpoint out of range");
    }
    ++degree_[e.sender];
    ++degree_[e.receiver];
  }
  offsets_.assign(n + 1, 0);
  std::partial_sum(degree_.begin(), degree_.end(), offsets_.begin() + 1);
  incidences_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < interactions_.size(); ++i) {
    const auto& e = interactions_[i];
    incidences_[fill[e.sender]++] = {i, Role::sender};
    incidences_[fill[e.receiver]++] = {i, Role::receiver};
  }
}

std::span<const Incidence> InteractionNetwork::incidences(NodeId v) const {
  return {incidences_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::optional<NodeId> InteractionNetwork::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabelSet::LabelSet(std::vector<std::string> class_names, std::size_t node_count)
    : class_names_(std::move(class_names)),
      labels_(node_count),
      role_(node_count, MaskRole::none) {}

void LabelSet::set_label(NodeId v, ClassId c) {
  if (c >= class_names_.size()) throw InputError("class index out of range");
  labels_.at(v) = c;
}

std::vector<NodeId> LabelSet::labelled_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < labels_.size(); ++v) {
    if (labels_[v]) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> LabelSet::train_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < role_.size(); ++v) {
    if (role_[v] == MaskRole::train) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> LabelSet::test_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < role_.size(); ++v) {
    if (role_[v] == MaskRole::test) out.push_back(v);
  }
  return out;
}

void LabelSet::assign_masks(const std::vector<NodeId>& train,
                            const std::vector<NodeId>& test) {
  std::vector<MaskRole> role(labels_.size(), MaskRole::none);
  auto mark = [&](const std::vector<NodeId>& nodes, MaskRole r) {
    for (NodeId v : nodes) {
      if (v >= labels_.size() || !labels_[v]) {
        throw InputError("mask contains an unlabelled node");
      }
      if (role[v] != MaskRole::none) {
        throw InputError("train and test masks overlap");
      }
      role[v] = r;
    }
  };
  mark(train, MaskRole::train);
  mark(test, MaskRole::test);
  role_ = std::move(role);
}

void LabelSet::clear_masks() {
  std::fill(role_.begin(), role_.end(), MaskRole::none);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

// Splits a line into whitespace-separated tokens; returns false for blank
// and '#' comment lines.
bool tokenize(const std::string& line, std::vector<std::string>& tokens) {
  tokens.clear();
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return !tokens.empty() && tokens.front()[0] != '#';
}

}  // namespace

InteractionNetwork parse_edge_list(std::istream& in, bool directed) {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Interaction> interactions;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] =
        index.emplace(name, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };

  std::string line;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!tokenize(line, tokens)) continue;
    if (tokens.size() != 2) {
      throw InputError("edge list line " + std::to_string(line_no) +
                       ": expected two node names");
    }
    const NodeId s = intern(tokens[0]);
    const NodeId r = intern(tokens[1]);
    interactions.push_back({s, r});
    if (!directed) interactions.push_back({r, s});
  }
  if (interactions.empty()) throw InputError("empty network");
  return InteractionNetwork(std::move(names), std::move(interactions));
}

InteractionNetwork load_edge_list(const std::filesystem::path& path,
                                  bool directed) {
  auto in = open_input(path);
  return parse_edge_list(in, directed);
}

LabelSet parse_labels(std::istream& in, const InteractionNetwork& network) {
  std::vector<std::pair<NodeId, std::string>> entries;
  std::set<std::string> classes;
  std::string line;
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!tokenize(line, tokens)) continue;
    if (tokens.size() != 2) {
      throw InputError("label file line " + std::to_string(line_no) +
                       ": expected node and class");
    }
    auto v = network.find(tokens[0]);
    if (!v) {
      throw InputError("label file line " + std::to_string(line_no) +
                       ": unknown node " + tokens[0]);
    }
    entries.emplace_back(*v, tokens[1]);
    classes.insert(tokens[1]);
  }

  std::vector<std::string> class_names(classes.begin(), classes.end());
  LabelSet labels(class_names, network.node_count());
  std::map<std::string, ClassId> class_index;
  for (ClassId c = 0; c < class_names.size(); ++c) class_index[class_names[c]] = c;
  for (const auto& [v, cls] : entries) {
    const ClassId c = class_index.at(cls);
    if (auto prev = labels.label(v); prev && *prev != c) {
      throw InputError("node " + network.name(v) +
                       " labelled with two different classes");
    }
    labels.set_label(v, c);
  }
  return labels;
}

LabelSet load_labels(const std::filesystem::path& path,
                     const InteractionNetwork& network) {
  auto in = open_input(path);
  return parse_labels(in, network);
}

LabelSet split(const LabelSet& labels, double train_fraction,
               std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  std::vector<NodeId> pool = labels.labelled_nodes();
  if (pool.empty()) throw std::invalid_argument("no labelled nodes to split");

  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(pool.size())));

  // Stratified floor: pull the first test node of each unrepresented class
  // into train, displacing the latest train node of the best-stocked class.
  const std::size_t C = labels.class_count();
  std::vector<std::size_t> total(C, 0), in_train(C, 0);
  for (std::size_t p = 0; p < pool.size(); ++p) {
    const ClassId c = *labels.label(pool[p]);
    ++total[c];
    if (p < n_train) ++in_train[c];
  }
  for (ClassId c = 0; c < C; ++c) {
    if (total[c] < 2 || in_train[c] > 0) continue;
    const auto donor = static_cast<ClassId>(
        std::max_element(in_train.begin(), in_train.end()) - in_train.begin());
    if (in_train[donor] < 2) break;
    std::size_t give = n_train;
    while (give-- > 0 && *labels.label(pool[give]) != donor) {
    }
    std::size_t take = n_train;
    while (*labels.label(pool[take]) != c) ++take;
    std::swap(pool[give], pool[take]);
    --in_train[donor];
    ++in_train[c];
  }

  LabelSet out = labels;
  out.assign_masks({pool.begin(), pool.begin() + n_train},
                   {pool.begin() + n_train, pool.end()});
  return out;
}

void write_edge_list(std::ostream& out, const InteractionNetwork& network) {
  for (const auto& e : network.interactions()) {
    out << network.name(e.sender) << '\t' << network.name(e.receiver) << '\n';
  }
}

void write_labels(std::ostream& out, const InteractionNetwork& network,
                  const LabelSet& labels) {
  for (NodeId v : labels.labelled_nodes()) {
    out << network.name(v) << '\t' << labels.class_names()[*labels.label(v)]
        << '\n';
  }
}

void write_split_manifest(std::ostream& out, const InteractionNetwork& network,
                          const LabelSet& labels) {
  out << "node,role\n";
  for (NodeId v : labels.labelled_nodes()) {
    if (labels.in_train(v)) {
      out << network.name(v) << ",train\n";
    } else if (labels.in_test(v)) {
      out << network.name(v) << ",test\n";
    }
  }
}

}  // namespace sbsn
