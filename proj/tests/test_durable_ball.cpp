#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>
#include <random>
#include <set>
#include <vector>

#include "durable/durable_ball.hpp"
#include "testutil.hpp"

using namespace durable;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Flattened candidate ids of a query result; checks subset disjointness.
std::set<int32_t> candidateUnion(const std::vector<DurableSubset>& subs) {
  std::set<int32_t> ids;
  for (const auto& sub : subs) {
    forEachCandidate(sub, [&](int32_t pid, bool) {
      bool inserted = ids.insert(pid).second;
      CHECK(inserted);
    });
  }
  return ids;
}

// Ground truth for durableBallQ at distance threshold thr.
std::set<int32_t> scanDurable(const Dataset& ds, int32_t p, double tau, double thr,
                              double radiusScale = 1.0) {
  const TemporalPoint& P = ds.pt(p);
  std::set<int32_t> out;
  for (const TemporalPoint& q : ds.points) {
    if (q.id == p || !anchorPrecedes(q, P)) continue;
    if (!reachesTau(P.lifespan.start, q.lifespan.end, tau)) continue;
    if (distance(ds.pt(p), q, ds.metric) <= thr * radiusScale) out.insert(q.id);
  }
  return out;
}

}  // namespace

TEST_CASE("empty dataset builds an empty structure") {
  Dataset ds = makeDataset({}, Metric::l2());
  DurableBallStructure dbs = DurableBallStructure::build(ds, true);
  CHECK(dbs.tree().empty());
  CHECK(dbs.totalIndexedEntries() == 0);
}

TEST_CASE("per-node indexes mirror subtree lifespans on t3") {
  Dataset ds = tt::t3();
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  const CoverTree& tree = dbs.tree();

  int leaves = 0;
  for (size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& v = tree.nodes()[i];
    if (v.isLeaf()) ++leaves;
    const IntervalIndex& idx = dbs.nodeIndex(static_cast<int32_t>(i));
    std::vector<int32_t> members = tree.memberIds(static_cast<int32_t>(i));
    CHECK(idx.size() == members.size());
    double lo = kInf, hi = -kInf;
    for (int32_t pid : members) {
      lo = std::min(lo, ds.pt(pid).lifespan.start);
      hi = std::max(hi, ds.pt(pid).lifespan.end);
    }
    CHECK(idx.minStart() == lo);
    CHECK(idx.maxEnd() == hi);
  }
  CHECK(leaves == 3);
}

TEST_CASE("index sizes sum to the stored path lengths") {
  Dataset ds = tt::randomInstance(64, 300, 2, Metric::l2());
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  const CoverTree& tree = dbs.tree();

  // Locate each point's leaf, then walk parents to the root.
  std::vector<int32_t> leafOf(ds.size(), -1);
  for (size_t i = 0; i < tree.nodes().size(); ++i) {
    const auto& v = tree.nodes()[i];
    if (!v.isLeaf()) continue;
    for (int32_t pid : v.bucket) leafOf[static_cast<size_t>(pid)] = static_cast<int32_t>(i);
  }
  size_t pathTotal = 0;
  for (size_t p = 0; p < ds.size(); ++p) {
    REQUIRE(leafOf[p] >= 0);
    for (int32_t v = leafOf[p]; v >= 0; v = tree.node(v).parent) ++pathTotal;
  }
  size_t indexTotal = 0;
  for (size_t i = 0; i < tree.nodes().size(); ++i) {
    indexTotal += dbs.nodeIndex(static_cast<int32_t>(i)).size();
  }
  CHECK(indexTotal == pathTotal);
  CHECK(dbs.totalIndexedEntries() == indexTotal);
}

TEST_CASE("durableBallQ on t3") {
  Dataset ds = tt::t3();
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);

  auto subs = dbs.durableBallQ(2, 3.0, 0.1);
  CHECK(candidateUnion(subs) == std::set<int32_t>{0, 1});

  subs = dbs.durableBallQ(2, 5.0, 0.1);
  CHECK(candidateUnion(subs) == std::set<int32_t>{0});

  // p1 and p2 precede the anchor order's maximum; they see fewer candidates.
  CHECK(candidateUnion(dbs.durableBallQ(0, 0.0, 0.1)).empty());
  CHECK(candidateUnion(dbs.durableBallQ(1, 0.0, 0.1)) == std::set<int32_t>{0});
}

TEST_CASE("durableBallQ sandwich on random instances") {
  for (uint64_t seed : {201u, 202u, 203u}) {
    Dataset ds = tt::randomInstance(seed, 150, 2, seed % 2 ? Metric::l1() : Metric::l2());
    DurableBallStructure dbs = DurableBallStructure::build(ds, false);
    std::mt19937_64 rng(seed * 7);
    for (int k = 0; k < 50; ++k) {
      int32_t p = static_cast<int32_t>(rng() % 150);
      double tau = double(rng() % 4097) / 1024.0;
      double eps = 0.2;
      auto subs = dbs.durableBallQ(p, tau, eps);
      std::set<int32_t> got = candidateUnion(subs);
      std::set<int32_t> exact = scanDurable(ds, p, tau, 1.0);
      std::set<int32_t> relaxed = scanDurable(ds, p, tau, 1.0 + eps);
      CHECK(tt::isSubset(exact, got));
      CHECK(tt::isSubset(got, relaxed));
    }
  }
}

TEST_CASE("radius parameter scales the geometric ball") {
  Dataset ds = tt::randomInstance(77, 100, 2, Metric::l2());
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  std::mt19937_64 rng(78);
  for (int k = 0; k < 25; ++k) {
    int32_t p = static_cast<int32_t>(rng() % 100);
    double eps = 0.3;
    auto subs = dbs.durableBallQ(p, 0.5, eps, 2.0);
    std::set<int32_t> got = candidateUnion(subs);
    std::set<int32_t> exact = scanDurable(ds, p, 0.5, 1.0, 2.0);
    std::set<int32_t> relaxed = scanDurable(ds, p, 0.5, 1.0 + eps, 2.0);
    CHECK(tt::isSubset(exact, got));
    CHECK(tt::isSubset(got, relaxed));
  }
}

TEST_CASE("durableBallQPrime splits candidates at the upper threshold") {
  Dataset ds = tt::t3();
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);

  auto subs = dbs.durableBallQPrime(2, 3.0, 5.0, 0.1);
  std::set<int32_t> lam, lamBar;
  for (const auto& sub : subs) {
    forEachCandidate(sub, [&](int32_t pid, bool inBand) {
      (inBand ? lam : lamBar).insert(pid);
    });
  }
  CHECK(lam == std::set<int32_t>{1});     // end 8 lies in [4+3, 4+5)
  CHECK(lamBar == std::set<int32_t>{0});  // end 10 >= 9

  CHECK_THROWS_AS(dbs.durableBallQPrime(2, 5.0, 5.0, 0.1), InputError);
  CHECK_THROWS_AS(dbs.durableBallQPrime(2, -1.0, 5.0, 0.1), InputError);

  SUBCASE("degenerate tauLo=0 partitions all stabbing candidates") {
    auto all = dbs.durableBallQPrime(2, 0.0, 5.0, 0.1);
    std::set<int32_t> both;
    size_t bar = 0;
    for (const auto& sub : all) {
      forEachCandidate(sub, [&](int32_t pid, bool inBand) {
        both.insert(pid);
        if (!inBand) ++bar;
      });
    }
    CHECK(both == candidateUnion(dbs.durableBallQ(2, 0.0, 0.1)));
    CHECK(bar == 1);  // only p1's end 10 reaches 4+5
  }
}

TEST_CASE("durableBallQPrime matches scans on random instances") {
  Dataset ds = tt::randomInstance(88, 120, 2, Metric::l2());
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  std::mt19937_64 rng(89);
  for (int k = 0; k < 100; ++k) {
    int32_t p = static_cast<int32_t>(rng() % 120);
    double tauLo = double(rng() % 2049) / 1024.0;
    double tauHi = tauLo + double(rng() % 2048 + 1) / 1024.0;
    double eps = 0.25;
    auto subs = dbs.durableBallQPrime(p, tauLo, tauHi, eps);

    std::set<int32_t> lam, lamBar;
    for (const auto& sub : subs) {
      forEachCandidate(sub, [&](int32_t pid, bool inBand) {
        (inBand ? lam : lamBar).insert(pid);
      });
    }
    double start = ds.pt(p).lifespan.start;
    // Band members: exact ones must appear, all must be within the relaxed ball.
    for (int32_t q = 0; q < 120; ++q) {
      if (q == p || !anchorPrecedes(ds.pt(q), ds.pt(p))) continue;
      double end = ds.pt(q).lifespan.end;
      double d = distance(ds, p, q);
      bool inLam = lam.count(q), inBar = lamBar.count(q);
      CHECK(!(inLam && inBar));
      if (d <= 1.0 && end >= start + tauLo && end < start + tauHi) CHECK(inLam);
      if (d <= 1.0 && end >= start + tauHi) CHECK(inBar);
      if (inLam) {
        CHECK(d <= 1.0 + eps);
        CHECK(end >= start + tauLo);
        CHECK(end < start + tauHi);
      }
      if (inBar) {
        CHECK(d <= 1.0 + eps);
        CHECK(end >= start + tauHi);
      }
    }
    // The union agrees with the single-threshold query on the same structure.
    std::set<int32_t> merged = lam;
    merged.insert(lamBar.begin(), lamBar.end());
    CHECK(merged == candidateUnion(dbs.durableBallQ(p, tauLo, eps)));
  }
}
