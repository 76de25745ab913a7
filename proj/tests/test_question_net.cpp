#include "doctest.h"

#include <set>
#include <sstream>
#include <stdexcept>

#include "ctdnet/question_net.hpp"

using namespace ctdnet;

TEST_CASE("chain network sizes") {
  const auto ctl = build_chain_network(4, 4, 5);
  CHECK(ctl.node_count() == 80);
  CHECK(ctl.controlled());
  CHECK(ctl.chain_depth() == 5);

  const auto unc = build_chain_network(4, 0, 5);
  CHECK(unc.node_count() == 20);
  for (std::size_t i = 0; i < unc.node_count(); ++i) CHECK_FALSE(unc.node(i).condition.has_value());

  const auto tiny = build_chain_network(1, 1, 1);
  REQUIRE(tiny.node_count() == 1);
  CHECK(tiny.node(0).parent == Target{FeatureObs{0}});

  CHECK_THROWS_AS(build_chain_network(0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_chain_network(1, 1, 0), std::invalid_argument);
}

TEST_CASE("kth parent walks the chain") {
  const auto net = build_chain_network(4, 4, 5);
  // feature 2, condition 1: ids (2*4+1)*5 + depth-1
  const std::size_t base = (2 * 4 + 1) * 5;
  const std::size_t deepest = base + 4;
  CHECK(net.depth(deepest) == 5);
  CHECK(net.kth_parent(deepest, 0) == Target{NodePred{deepest}});
  CHECK(net.kth_parent(deepest, 3) == Target{NodePred{base + 1}});
  CHECK(net.kth_parent(deepest, 5) == Target{FeatureObs{2}});
  CHECK(net.kth_parent(base, 1) == Target{FeatureObs{2}});
  CHECK_THROWS_AS(net.kth_parent(deepest, 6), std::out_of_range);
}

TEST_CASE("depth bookkeeping holds for every node") {
  const auto net = build_chain_network(3, 2, 4);
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    const std::size_t d = net.depth(i);
    CHECK(std::holds_alternative<FeatureObs>(net.kth_parent(i, d)));
    if (d >= 2) CHECK(std::holds_alternative<NodePred>(net.kth_parent(i, d - 1)));
    for (std::size_t k = 0; k < d; ++k) {
      const auto t = net.kth_parent(i, k);
      REQUIRE(std::holds_alternative<NodePred>(t));
      CHECK(net.node(std::get<NodePred>(t).node).condition == net.node(i).condition);
    }
  }
}

TEST_CASE("children of a feature") {
  const auto ctl = build_chain_network(4, 4, 5);
  for (std::size_t f = 0; f < 4; ++f) {
    const auto& kids = ctl.children_of_feature(f);
    REQUIRE(kids.size() == 4);
    std::set<std::size_t> conds;
    for (const auto& k : kids) {
      conds.insert(*k.condition);
      CHECK(ctl.depth(k.node) == 1);
    }
    CHECK(conds == std::set<std::size_t>{0, 1, 2, 3});
  }
  const auto unc = build_chain_network(4, 0, 2);
  CHECK(unc.children_of_feature(3).size() == 1);
  CHECK_FALSE(unc.children_of_feature(3)[0].condition.has_value());

  const QuestionNetwork lonely({{FeatureObs{0}, std::nullopt}}, 2, 0);
  CHECK(lonely.children_of_feature(1).empty());
}

TEST_CASE("hand-built networks are validated") {
  using NS = QuestionNetwork::NodeSpec;
  CHECK_THROWS_AS(QuestionNetwork({NS{FeatureObs{3}, std::nullopt}}, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(QuestionNetwork({NS{NodePred{5}, std::nullopt}}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(QuestionNetwork({NS{FeatureObs{0}, 2}}, 1, 2), std::invalid_argument);
  // cycle
  CHECK_THROWS_AS(QuestionNetwork({NS{NodePred{1}, std::nullopt}, NS{NodePred{0}, std::nullopt}}, 1, 0),
                  std::invalid_argument);
  // condition changes along a chain
  CHECK_THROWS_AS(QuestionNetwork({NS{FeatureObs{0}, 0}, NS{NodePred{0}, 1}}, 1, 2),
                  std::invalid_argument);
  // parent listed after its child is fine
  const QuestionNetwork ok({NS{NodePred{1}, 0}, NS{FeatureObs{0}, 0}}, 1, 1);
  CHECK(ok.depth(0) == 2);
  CHECK(ok.depth(1) == 1);
}

TEST_CASE("dump golden output") {
  std::ostringstream ctl;
  build_chain_network(2, 2, 2).dump(ctl);
  CHECK(ctl.str() ==
        "0 f0 0 1\n"
        "1 n0 0 2\n"
        "2 f0 1 1\n"
        "3 n2 1 2\n"
        "4 f1 0 1\n"
        "5 n4 0 2\n"
        "6 f1 1 1\n"
        "7 n6 1 2\n");

  std::ostringstream unc;
  build_chain_network(1, 0, 3).dump(unc);
  CHECK(unc.str() == "0 f0 - 1\n1 n0 - 2\n2 n1 - 3\n");
}
