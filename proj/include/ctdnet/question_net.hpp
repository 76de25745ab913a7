#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

namespace ctdnet {

/// Target that is an observation feature: the node predicts phi_feature.
struct FeatureObs {
  std::size_t feature;
  friend bool operator==(const FeatureObs&, const FeatureObs&) = default;
};

/// Target that is another node's prediction.
struct NodePred {
  std::size_t node;
  friend bool operator==(const NodePred&, const NodePred&) = default;
};

using Target = std::variant<FeatureObs, NodePred>;

/// A single-target question-network node.
struct QuestionNode {
  Target parent;
  /// Index into the action activation set; empty for unconditioned links.
  std::optional<std::size_t> condition;
  /// Number of parent links to reach an observation feature (>= 1).
  std::size_t depth = 1;
};

struct FeatureChild {
  std::size_t node;
  std::optional<std::size_t> condition;
  friend bool operator==(const FeatureChild&, const FeatureChild&) = default;
};

/// A forest of single-parent chains rooted at observation features.
///
/// Node ids are dense. Networks built by build_chain_network() order nodes
/// feature-major, then by action condition, then by depth, so node
/// (f, j, depth) has id (f * max(m, 1) + j) * d + depth - 1.
class QuestionNetwork {
 public:
  struct NodeSpec {
    Target parent;
    std::optional<std::size_t> condition;
  };

  /// General constructor for hand-built networks. Depths are derived from
  /// the parent links. Throws std::invalid_argument on out-of-range targets
  /// or conditions, cycles, or a node whose condition differs from its
  /// parent node's condition.
  QuestionNetwork(std::vector<NodeSpec> nodes, std::size_t feature_count,
                  std::size_t activation_count);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t feature_count() const noexcept { return feature_count_; }
  /// Zero for uncontrolled networks.
  std::size_t activation_count() const noexcept { return activation_count_; }
  bool controlled() const noexcept { return activation_count_ > 0; }
  /// Maximum node depth (0 for an empty network).
  std::size_t chain_depth() const noexcept { return chain_depth_; }

  const QuestionNode& node(std::size_t id) const { return nodes_.at(id); }
  std::size_t depth(std::size_t id) const { return nodes_.at(id).depth; }

  /// p^k(node). k = 0 is the node itself; k = depth(node) is its feature.
  /// Throws std::out_of_range if k > depth(node).
  Target kth_parent(std::size_t node, std::size_t k) const;

  /// Depth-1 nodes whose parent is FeatureObs(feature), in id order.
  const std::vector<FeatureChild>& children_of_feature(std::size_t feature) const;

  /// One line per node: "<id> <parent> <condition> <depth>", where parent is
  /// "f<k>" or "n<k>" and condition is an index or "-".
  void dump(std::ostream& os) const;

 private:
  std::vector<QuestionNode> nodes_;
  std::size_t feature_count_;
  std::size_t activation_count_;
  std::size_t chain_depth_ = 0;
  // ancestors_[offset_[i] + k] = p^k(i) for k in [0, depth(i)].
  std::vector<Target> ancestors_;
  std::vector<std::size_t> offset_;
  std::vector<std::vector<FeatureChild>> children_;
};

/// The chain topology used for every experiment: for each feature and each
/// activation (or once, if activation_count == 0) a chain of `chain_depth`
/// nodes sharing one action condition. Throws std::invalid_argument if
/// feature_count or chain_depth is zero.
QuestionNetwork build_chain_network(std::size_t feature_count, std::size_t activation_count,
                                    std::size_t chain_depth);

}  // namespace ctdnet
