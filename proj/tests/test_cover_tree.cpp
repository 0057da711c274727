#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "durable/cover_tree.hpp"
#include "testutil.hpp"

using namespace durable;

namespace {

std::set<int32_t> ballUnion(const CoverTree& tree, const std::vector<CoverTree::Ball>& balls) {
  std::set<int32_t> ids;
  for (const auto& b : balls) {
    tree.forEachMember(b.nodeIdx, [&](int32_t pid) {
      bool inserted = ids.insert(pid).second;
      CHECK(inserted);  // balls must be pairwise disjoint
    });
  }
  return ids;
}

void checkBallReport(const Dataset& ds, const CoverTree& tree, int32_t center, double radius,
                     double eps) {
  auto balls = tree.ballReport(center, radius, eps);
  std::set<int32_t> got = ballUnion(tree, balls);

  for (const auto& b : balls) {
    const TemporalPoint& rep = ds.pt(b.repId);
    CHECK(b.repDist == distance(ds, center, b.repId));
    tree.forEachMember(b.nodeIdx, [&](int32_t pid) {
      CHECK(distance(ds.pt(pid), rep, ds.metric) <= eps * radius / 2.0);
    });
  }
  for (int32_t q = 0; q < static_cast<int32_t>(ds.size()); ++q) {
    double d = distance(ds, center, q);
    if (d <= radius) CHECK(got.count(q));
    if (got.count(q)) CHECK(d <= (1.0 + eps) * radius);
  }
}

}  // namespace

TEST_CASE("single point tree") {
  Dataset ds = makeDataset({tt::mk(0, {0.5, 0.5}, 0, 1)}, Metric::l2());
  CoverTree tree = CoverTree::build(ds);
  tree.checkInvariants();
  REQUIRE(!tree.empty());
  CHECK(tree.node(tree.root()).isLeaf());

  auto balls = tree.ballReport(0, 1.0, 0.1);
  REQUIRE(balls.size() == 1);
  CHECK(ballUnion(tree, balls) == std::set<int32_t>{0});
}

TEST_CASE("two points in 1-d") {
  Dataset ds = makeDataset({tt::mk(0, {0.0}, 0, 1), tt::mk(1, {1.0}, 0, 1)}, Metric::l2());
  CoverTree tree = CoverTree::build(ds);
  tree.checkInvariants();
  const auto& root = tree.node(tree.root());
  CHECK(!root.isLeaf());
  CHECK(root.level >= 0);  // children 1 apart need separation 2^level >= their distance
  CHECK(root.children.size() == 2);
  CHECK(root.pointCount == 2);
}

TEST_CASE("co-located points share a leaf bucket") {
  Dataset ds = makeDataset({tt::mk(0, {1, 1}, 0, 1), tt::mk(1, {1, 1}, 2, 3),
                            tt::mk(2, {0, 0}, 0, 1)},
                           Metric::l2());
  CoverTree tree = CoverTree::build(ds);
  tree.checkInvariants();
  int buckets2 = 0;
  for (const auto& v : tree.nodes()) {
    if (v.isLeaf() && v.bucket.size() == 2) {
      ++buckets2;
      CHECK(v.bucket == std::vector<int32_t>{0, 1});
    }
  }
  CHECK(buckets2 == 1);

  auto balls = tree.ballReport(2, 2.0, 0.5);
  CHECK(ballUnion(tree, balls) == std::set<int32_t>{0, 1, 2});
}

TEST_CASE("invariants and level bound on uniform points") {
  Dataset ds = tt::randomInstance(42, 64, 2, Metric::l2(), 1.0);
  CoverTree tree = CoverTree::build(ds);
  tree.checkInvariants();

  std::set<int> levels;
  for (const auto& v : tree.nodes()) {
    if (!v.isLeaf()) levels.insert(v.level);
  }
  double sp = spread(ds);
  REQUIRE(std::isfinite(sp));
  CHECK(static_cast<double>(levels.size()) <= std::log2(sp) + 2.0);
}

TEST_CASE("invariants hold across metrics and shapes") {
  int kind = 0;
  for (uint64_t seed : {101u, 102u, 103u, 104u, 105u, 106u}) {
    Metric m = (kind % 3 == 0) ? Metric::l2() : (kind % 3 == 1) ? Metric::l1() : Metric::linf();
    int n = 20 + static_cast<int>(seed % 60);
    Dataset ds = tt::randomInstance(seed, n, 1 + kind % 3, m);
    CoverTree tree = CoverTree::build(ds);
    tree.checkInvariants();
    ++kind;
  }
}

TEST_CASE("ballReport on the t3 hand instance") {
  Dataset ds = tt::t3();
  CoverTree tree = CoverTree::build(ds);
  auto balls = tree.ballReport(2, 1.0, 0.5);
  std::set<int32_t> got = ballUnion(tree, balls);
  CHECK(got == std::set<int32_t>{0, 1, 2});
  for (int32_t q : got) CHECK(distance(ds, 2, q) <= 1.5);
}

TEST_CASE("ballReport sandwich against a linear scan") {
  Dataset ds = tt::randomInstance(7, 200, 2, Metric::l2(), 1.0);
  CoverTree tree = CoverTree::build(ds);
  tree.checkInvariants();
  std::mt19937_64 rng(77);
  for (int k = 0; k < 50; ++k) {
    int32_t center = static_cast<int32_t>(rng() % 200);
    double radius = (k % 2 == 0) ? 0.25 : 0.6;
    checkBallReport(ds, tree, center, radius, 0.2);
  }

  SUBCASE("coordinate-vector centers and other eps values") {
    std::mt19937_64 rng2(78);
    for (int k = 0; k < 20; ++k) {
      double c[2] = {double(rng2() % 1025) / 1024.0, double(rng2() % 1025) / 1024.0};
      auto balls = tree.ballReport(c, 2, 0.5, 0.6);
      std::set<int32_t> got = ballUnion(tree, balls);
      for (int32_t q = 0; q < 200; ++q) {
        double d = distanceToCoords(ds.pt(q), c, 2, ds.metric);
        if (d <= 0.5) CHECK(got.count(q));
        if (got.count(q)) CHECK(d <= 1.6 * 0.5);
      }
    }
  }
}

TEST_CASE("member enumeration touches each subtree point once") {
  Dataset ds = tt::randomInstance(55, 120, 2, Metric::l2());
  CoverTree tree = CoverTree::build(ds);
  for (size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& v = tree.nodes()[i];
    std::vector<int32_t> members = tree.memberIds(static_cast<int32_t>(i));
    CHECK(static_cast<int32_t>(members.size()) == v.pointCount);
    std::set<int32_t> uniq(members.begin(), members.end());
    CHECK(uniq.size() == members.size());
  }
}

TEST_CASE("debug dump mentions every level once per node") {
  Dataset ds = tt::t4();
  CoverTree tree = CoverTree::build(ds);
  std::string dump = tree.debugDump();
  CHECK(!dump.empty());
  size_t lines = std::count(dump.begin(), dump.end(), '\n');
  CHECK(lines == tree.nodes().size());
}
