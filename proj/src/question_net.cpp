#include "ctdnet/question_net.hpp"

#include <stdexcept>
#include <string>

namespace ctdnet {

QuestionNetwork::QuestionNetwork(std::vector<NodeSpec> nodes, std::size_t feature_count,
                                 std::size_t activation_count)
    : feature_count_(feature_count), activation_count_(activation_count) {
  const std::size_t n = nodes.size();
  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& spec = nodes[i];
    if (const auto* f = std::get_if<FeatureObs>(&spec.parent)) {
      if (f->feature >= feature_count_) {
        throw std::invalid_argument("QuestionNetwork: node " + std::to_string(i) +
                                    " targets a feature out of range");
      }
    } else if (std::get<NodePred>(spec.parent).node >= n) {
      throw std::invalid_argument("QuestionNetwork: node " + std::to_string(i) +
                                  " targets a node out of range");
    }
    if (spec.condition && *spec.condition >= activation_count_) {
      throw std::invalid_argument("QuestionNetwork: node " + std::to_string(i) +
                                  " has a condition out of range");
    }
    nodes_[i].parent = spec.parent;
    nodes_[i].condition = spec.condition;
  }

  // Depth = length of the parent walk to a feature; a walk longer than n
  // revisits a node.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t depth = 1;
    Target t = nodes_[i].parent;
    while (const auto* p = std::get_if<NodePred>(&t)) {
      if (nodes_[p->node].condition != nodes_[i].condition) {
        throw std::invalid_argument("QuestionNetwork: node " + std::to_string(i) +
                                    " has a condition different from its chain");
      }
      if (++depth > n) throw std::invalid_argument("QuestionNetwork: parent links form a cycle");
      t = nodes_[p->node].parent;
    }
    nodes_[i].depth = depth;
    if (depth > chain_depth_) chain_depth_ = depth;
  }

  offset_.resize(n);
  children_.resize(feature_count_);
  for (std::size_t i = 0; i < n; ++i) {
    offset_[i] = ancestors_.size();
    Target t = NodePred{i};
    ancestors_.push_back(t);
    for (std::size_t k = 0; k < nodes_[i].depth; ++k) {
      t = nodes_[std::get<NodePred>(t).node].parent;
      ancestors_.push_back(t);
    }
    if (const auto* f = std::get_if<FeatureObs>(&nodes_[i].parent)) {
      children_[f->feature].push_back(FeatureChild{i, nodes_[i].condition});
    }
  }
}

Target QuestionNetwork::kth_parent(std::size_t node, std::size_t k) const {
  if (node >= nodes_.size()) throw std::out_of_range("kth_parent: node out of range");
  if (k > nodes_[node].depth) {
    throw std::out_of_range("kth_parent: k = " + std::to_string(k) + " exceeds depth " +
                            std::to_string(nodes_[node].depth) + " of node " +
                            std::to_string(node));
  }
  return ancestors_[offset_[node] + k];
}

const std::vector<FeatureChild>& QuestionNetwork::children_of_feature(std::size_t feature) const {
  if (feature >= feature_count_) throw std::out_of_range("children_of_feature: feature out of range");
  return children_[feature];
}

void QuestionNetwork::dump(std::ostream& os) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& nd = nodes_[i];
    os << i << ' ';
    if (const auto* f = std::get_if<FeatureObs>(&nd.parent)) {
      os << 'f' << f->feature;
    } else {
      os << 'n' << std::get<NodePred>(nd.parent).node;
    }
    os << ' ';
    if (nd.condition) {
      os << *nd.condition;
    } else {
      os << '-';
    }
    os << ' ' << nd.depth << '\n';
  }
}

QuestionNetwork build_chain_network(std::size_t feature_count, std::size_t activation_count,
                                    std::size_t chain_depth) {
  if (feature_count == 0) throw std::invalid_argument("build_chain_network: feature_count is 0");
  if (chain_depth == 0) throw std::invalid_argument("build_chain_network: chain_depth is 0");
  const std::size_t chains_per_feature = activation_count == 0 ? 1 : activation_count;

  std::vector<QuestionNetwork::NodeSpec> nodes;
  nodes.reserve(feature_count * chains_per_feature * chain_depth);
  for (std::size_t f = 0; f < feature_count; ++f) {
    for (std::size_t j = 0; j < chains_per_feature; ++j) {
      std::optional<std::size_t> condition;
      if (activation_count > 0) condition = j;
      for (std::size_t level = 0; level < chain_depth; ++level) {
        Target parent = level == 0 ? Target{FeatureObs{f}} : Target{NodePred{nodes.size() - 1}};
        nodes.push_back({parent, condition});
      }
    }
  }
  return QuestionNetwork(std::move(nodes), feature_count, activation_count);
}

}  // namespace ctdnet
