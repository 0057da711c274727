#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "durable/incremental.hpp"
#include "durable/oracle.hpp"
#include "testutil.hpp"

using namespace durable;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::set<TriangleKey> oracleKeys(const Dataset& ds, double tau, double thr) {
  std::vector<TriangleRecord> v;
  oracleTriangles(ds, tau, thr, tt::collect(v));
  return tt::keySet(v);
}

}  // namespace

TEST_CASE("computeActivation on the hand instances") {
  Dataset ds3 = tt::t3();
  DurableBallStructure d3 = DurableBallStructure::build(ds3, false);
  CHECK(computeActivation(d3, 2, kInf, 0.1) == 4.0);
  CHECK(computeActivation(d3, 0, kInf, 0.1) == -kInf);
  CHECK(computeActivation(d3, 1, kInf, 0.1) == -kInf);
  // No anchored triangle has durability strictly below 4.
  CHECK(computeActivation(d3, 2, 4.0, 0.1) == -kInf);
  CHECK(computeActivation(d3, 2, 5.0, 0.1) == 4.0);

  Dataset ds4 = tt::t4();
  DurableBallStructure d4 = DurableBallStructure::build(ds4, false);
  CHECK(computeActivation(d4, 1, kInf, 0.1) == 4.0);
  CHECK(computeActivation(d4, 2, kInf, 0.1) == 4.0);
  CHECK(computeActivation(d4, 0, kInf, 0.1) == -kInf);
  CHECK(computeActivation(d4, 3, kInf, 0.1) == -kInf);
  CHECK(computeActivation(d4, 2, 4.0, 0.1) == 2.0);

  CHECK_THROWS_AS(computeActivation(d3, 2, 0.0, 0.1), InputError);
}

TEST_CASE("computeActivation sandwich on random instances") {
  for (uint64_t seed : {401u, 402u, 403u}) {
    Dataset ds = tt::randomInstance(seed, 60, 2, Metric::l2());
    DurableBallStructure dbs = DurableBallStructure::build(ds, false);
    double eps = 0.2;
    for (int32_t p = 0; p < 60; ++p) {
      double v = computeActivation(dbs, p, kInf, eps);
      double exact = oracleActivation(ds, p, 1.0);
      double relaxed = oracleActivation(ds, p, 1.0 + eps);
      CHECK(exact <= v);
      CHECK(v <= relaxed);
    }
  }
}

TEST_CASE("detectTriangle existence checks") {
  Dataset ds = tt::t3();
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  // The single anchored triangle's common lifespan ends at 8.
  CHECK(detectTriangle(dbs, 2, 8.0, 0.1));
  CHECK(detectTriangle(dbs, 2, 7.0, 0.1));
  CHECK(!detectTriangle(dbs, 2, 8.0 + 1.0 / 1024.0, 0.1));
  CHECK(!detectTriangle(dbs, 0, 0.0, 0.1));
  CHECK(!detectTriangle(dbs, 1, 0.0, 0.1));
}

TEST_CASE("reportDeltaTriangle") {
  Dataset ds = tt::t4();
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);

  std::vector<TriangleRecord> got;
  reportDeltaTriangle(dbs, 2, 2.0, 4.0, 0.1, tt::collect(got));
  CHECK(tt::keySet(got) == std::set<TriangleKey>{{2, 0, 3}, {2, 1, 3}});

  SUBCASE("no emissions for anchors without band members") {
    got.clear();
    reportDeltaTriangle(dbs, 0, 2.0, 4.0, 0.1, tt::collect(got));
    CHECK(got.empty());
    got.clear();
    reportDeltaTriangle(dbs, 2, 5.0, 6.0, 0.1, tt::collect(got));
    CHECK(got.empty());
  }

  SUBCASE("prevTau=inf degenerates to the full per-anchor report") {
    for (int32_t p = 0; p < 4; ++p) {
      std::vector<TriangleRecord> delta, full;
      reportDeltaTriangle(dbs, p, 2.0, kInf, 0.1, tt::collect(delta));
      reportTrianglesForAnchor(dbs, p, 2.0, 0.1, tt::collect(full));
      CHECK(tt::keySet(delta) == tt::keySet(full));
      CHECK(delta.size() == full.size());
    }
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(reportDeltaTriangle(dbs, 2, 4.0, 4.0, 0.1, tt::collect(got)), InputError);
    CHECK_THROWS_AS(reportDeltaTriangle(dbs, 2, -1.0, 4.0, 0.1, tt::collect(got)), InputError);
  }
}

TEST_CASE("session trace on t4") {
  Dataset ds = tt::t4();
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  IncrementalSession session(dbs, 0.1);

  std::vector<TriangleRecord> step;
  size_t n1 = session.query(4.0, tt::collect(step));
  CHECK(n1 == 2);
  CHECK(tt::keySet(step) == std::set<TriangleKey>{{1, 0, 3}, {2, 0, 1}});
  CHECK(session.cumulativeCount() == 2);

  step.clear();
  size_t n2 = session.query(2.0, tt::collect(step));
  CHECK(n2 == 2);
  CHECK(tt::keySet(step) == std::set<TriangleKey>{{2, 0, 3}, {2, 1, 3}});
  CHECK(session.cumulativeCount() == 4);

  SUBCASE("repeating the same tau adds nothing") {
    step.clear();
    CHECK(session.query(2.0, tt::collect(step)) == 0);
    CHECK(step.empty());
  }

  SUBCASE("raising tau resets the baseline and re-reports") {
    step.clear();
    CHECK(session.query(4.0, tt::collect(step)) == 2);
    CHECK(tt::keySet(step) == std::set<TriangleKey>{{1, 0, 3}, {2, 0, 1}});
    // A later decrease only emits the difference again.
    step.clear();
    CHECK(session.query(3.0, tt::collect(step)) == 0);
    step.clear();
    CHECK(session.query(2.0, tt::collect(step)) == 2);
  }

  SUBCASE("reset forgets history") {
    session.reset();
    step.clear();
    CHECK(session.query(2.0, tt::collect(step)) == 4);
    CHECK(session.cumulativeCount() == 4);
  }

  SUBCASE("query above every durability") {
    IncrementalSession fresh(dbs, 0.1);
    step.clear();
    CHECK(fresh.query(10.0, tt::collect(step)) == 0);
  }

  SUBCASE("non-positive tau is rejected") {
    CHECK_THROWS_AS(session.query(0.0, tt::collect(step)), InputError);
  }
}

TEST_CASE("monotone decreasing sequence covers the final threshold") {
  for (uint64_t seed : {411u, 412u, 413u}) {
    Dataset ds = tt::randomInstance(seed, 60, 2, Metric::l2());
    DurableBallStructure dbs = DurableBallStructure::build(ds, false);
    double eps = 0.2;
    IncrementalSession session(dbs, eps);

    std::set<TriangleKey> cumulative;
    double prev = kInf;
    for (double tau : {5.0, 4.0, 3.0, 2.0, 1.0}) {
      std::vector<TriangleRecord> step;
      session.query(tau, tt::collect(step));
      auto stepKeys = tt::keySet(step);
      CHECK(stepKeys.size() == step.size());

      // Delta sandwich: every exact triangle entering at this step appears,
      // and nothing already durable at the previous threshold reappears.
      auto exactNew = tt::setMinus(oracleKeys(ds, tau, 1.0), oracleKeys(ds, prev, 1.0));
      auto relaxedNew =
          tt::setMinus(oracleKeys(ds, tau, 1.0 + eps), oracleKeys(ds, prev, 1.0 + eps));
      CHECK(tt::isSubset(exactNew, stepKeys));
      CHECK(tt::isSubset(stepKeys, relaxedNew));

      for (const TriangleKey& k : stepKeys) CHECK(!cumulative.count(k));
      cumulative.insert(stepKeys.begin(), stepKeys.end());
      prev = tau;
    }
    CHECK(tt::isSubset(oracleKeys(ds, 1.0, 1.0), cumulative));
    CHECK(tt::isSubset(cumulative, oracleKeys(ds, 1.0, 1.2)));
    CHECK(session.cumulativeCount() == cumulative.size());
  }
}

TEST_CASE("mixed sequence with resets") {
  Dataset ds = tt::randomInstance(421, 50, 2, Metric::l2());
  DurableBallStructure dbs = DurableBallStructure::build(ds, false);
  double eps = 0.25;
  IncrementalSession session(dbs, eps);

  std::set<TriangleKey> sinceBaseline;
  double prev = kInf;
  for (double tau : {3.0, 1.5, 2.5, 2.0, 1.0, 0.5}) {
    std::vector<TriangleRecord> step;
    session.query(tau, tt::collect(step));
    auto stepKeys = tt::keySet(step);
    CHECK(stepKeys.size() == step.size());

    if (tau > prev) {
      // Reset: the step is a full sandwich report at tau.
      CHECK(tt::isSubset(oracleKeys(ds, tau, 1.0), stepKeys));
      CHECK(tt::isSubset(stepKeys, oracleKeys(ds, tau, 1.0 + eps)));
      sinceBaseline = stepKeys;
    } else {
      auto exactNew = tt::setMinus(oracleKeys(ds, tau, 1.0), oracleKeys(ds, prev, 1.0));
      auto relaxedNew =
          tt::setMinus(oracleKeys(ds, tau, 1.0 + eps), oracleKeys(ds, prev, 1.0 + eps));
      CHECK(tt::isSubset(exactNew, stepKeys));
      CHECK(tt::isSubset(stepKeys, relaxedNew));
      for (const TriangleKey& k : stepKeys) CHECK(!sinceBaseline.count(k));
      sinceBaseline.insert(stepKeys.begin(), stepKeys.end());
    }
    prev = tau;
  }
  // After the final (minimum) threshold the baseline run covers T_0.5 exactly.
  CHECK(tt::isSubset(oracleKeys(ds, 0.5, 1.0), sinceBaseline));
  CHECK(tt::isSubset(sinceBaseline, oracleKeys(ds, 0.5, 1.0 + eps)));
}
