#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "durable/linf_exact.hpp"
#include "durable/oracle.hpp"
#include "testutil.hpp"

using namespace durable;

namespace {

Box closedBox(std::vector<double> lo, std::vector<double> hi) {
  Box b;
  b.dim = static_cast<int>(lo.size());
  for (int a = 0; a < b.dim; ++a) {
    b.lo[static_cast<size_t>(a)] = lo[static_cast<size_t>(a)];
    b.hi[static_cast<size_t>(a)] = hi[static_cast<size_t>(a)];
    b.loClosed[static_cast<size_t>(a)] = true;
    b.hiClosed[static_cast<size_t>(a)] = true;
  }
  return b;
}

std::vector<int32_t> scanRange(const Dataset& ds, int32_t p, const Box& box, double tau) {
  const TemporalPoint& P = ds.pt(p);
  std::vector<int32_t> out;
  for (const TemporalPoint& q : ds.points) {
    if (q.id == p || !anchorPrecedes(q, P)) continue;
    if (!reachesTau(P.lifespan.start, q.lifespan.end, tau)) continue;
    if (box.contains(q.coords)) out.push_back(q.id);
  }
  return out;
}

std::set<TriangleKey> exactKeys(const Dataset& ds, double tau) {
  std::vector<TriangleRecord> v;
  oracleTriangles(ds, tau, 1.0, tt::collect(v));
  return tt::keySet(v);
}

}  // namespace

TEST_CASE("build requirements") {
  CHECK_THROWS_AS(DurableRangeStructure::build(tt::t3(Metric::l2())), InputError);
  Dataset d5 = tt::randomInstance(601, 10, 5, Metric::linf());
  CHECK_THROWS_AS(DurableRangeStructure::build(d5), InputError);
  CHECK_NOTHROW(DurableRangeStructure::build(tt::randomInstance(602, 10, 4, Metric::linf())));
}

TEST_CASE("durableRangeQuery on t3 as linf") {
  Dataset ds = tt::t3(Metric::linf());
  DurableRangeStructure drs = DurableRangeStructure::build(ds);

  auto got = drs.durableRangeQuery(2, closedBox({-1, -1}, {1, 1}), 3.0);
  CHECK(got == std::vector<int32_t>{0, 1});
  CHECK(drs.countRangeQuery(2, closedBox({-1, -1}, {1, 1}), 3.0) == 2);

  got = drs.durableRangeQuery(2, closedBox({5, 5}, {6, 6}), 0.0);
  CHECK(got.empty());
  CHECK(drs.countRangeQuery(2, closedBox({5, 5}, {6, 6}), 0.0) == 0);

  SUBCASE("open boundaries exclude points exactly on them") {
    Box b = closedBox({0, -1}, {1, 1});
    b.loClosed[0] = false;  // x > 0 drops p0 at (0,0) but keeps p1 at (0.5,0)
    auto r = drs.durableRangeQuery(2, b, 3.0);
    CHECK(r == std::vector<int32_t>{1});
  }
}

TEST_CASE("durableRangeQuery matches scans on random boxes") {
  Dataset ds = tt::randomInstance(611, 200, 2, Metric::linf());
  DurableRangeStructure drs = DurableRangeStructure::build(ds);
  std::mt19937_64 rng(612);
  auto dyadic = [&rng](uint64_t hi) { return double(rng() % (hi + 1)) / 1024.0; };
  for (int k = 0; k < 200; ++k) {
    int32_t p = static_cast<int32_t>(rng() % 200);
    double tau = dyadic(4096);
    Box b;
    b.dim = 2;
    for (int a = 0; a < 2; ++a) {
      double lo = dyadic(2048);
      b.lo[static_cast<size_t>(a)] = lo;
      b.hi[static_cast<size_t>(a)] = lo + dyadic(1024);
      b.loClosed[static_cast<size_t>(a)] = (rng() % 2) == 0;
      b.hiClosed[static_cast<size_t>(a)] = (rng() % 2) == 0;
    }
    CHECK(drs.durableRangeQuery(p, b, tau) == scanRange(ds, p, b, tau));
    CHECK(drs.countRangeQuery(p, b, tau) == scanRange(ds, p, b, tau).size());
  }
}

TEST_CASE("exact triangles on the linf-only hand instance") {
  Dataset ds = tt::li3();
  DurableRangeStructure drs = DurableRangeStructure::build(ds);
  std::vector<TriangleRecord> got;
  reportTrianglesExactLinf(drs, 5.0, tt::collect(got));
  REQUIRE(got.size() == 1);
  CHECK(got[0].anchor == 2);
  CHECK(got[0].q == 0);
  CHECK(got[0].s == 1);
  CHECK(got[0].lifespan.start == 0);
  CHECK(got[0].lifespan.end == 10);

  // The same instance under L2 has no triangle: dist(p0,p2) = 1.27.
  Dataset l2 = makeDataset({tt::mk(0, {0, 0}, 0, 10), tt::mk(1, {1, 0}, 0, 10),
                            tt::mk(2, {0.9, 0.9}, 0, 10)},
                           Metric::l2());
  CHECK(exactKeys(l2, 5.0).empty());
}

TEST_CASE("t3 under linf matches the L2 triangle") {
  Dataset ds = tt::t3(Metric::linf());
  DurableRangeStructure drs = DurableRangeStructure::build(ds);
  std::vector<TriangleRecord> got;
  reportTrianglesExactLinf(drs, 3.0, tt::collect(got));
  CHECK(tt::keySet(got) == std::set<TriangleKey>{{2, 0, 1}});
}

TEST_CASE("exact set equality with the oracle on random instances") {
  int i = 0;
  for (uint64_t seed : {621u, 622u, 623u, 624u, 625u, 626u}) {
    int dim = 2 + (i % 2);
    Dataset ds = tt::randomInstance(seed, 80, dim, Metric::linf(), 1.5);
    DurableRangeStructure drs = DurableRangeStructure::build(ds);
    double tau = tt::tauAtQuantile(ds, 0.25 * (1 + i % 3));

    std::vector<TriangleRecord> got;
    reportTrianglesExactLinf(drs, tau, tt::collect(got));
    auto keys = tt::keySet(got);
    CHECK(keys.size() == got.size());  // duplicate-freedom across both branches
    CHECK(keys == exactKeys(ds, tau));
    for (const TriangleRecord& r : got) {
      CHECK(r.q < r.s);
      CHECK(reachesTau(r.lifespan.start, r.lifespan.end, tau));
      CHECK(r.maxPairDist <= 1.0);
    }
    ++i;
  }
}

TEST_CASE("points exactly at distance 1 are included") {
  // Two points at linf distance exactly 1 from the anchor and from each other.
  Dataset ds = makeDataset({tt::mk(0, {0, 0}, 0, 10), tt::mk(1, {1, 0}, 0, 10),
                            tt::mk(2, {0, 1}, 0, 10)},
                           Metric::linf());
  DurableRangeStructure drs = DurableRangeStructure::build(ds);
  std::vector<TriangleRecord> got;
  reportTrianglesExactLinf(drs, 1.0, tt::collect(got));
  CHECK(tt::keySet(got) == std::set<TriangleKey>{{2, 0, 1}});
}

TEST_CASE("threaded exact reporting agrees") {
  Dataset ds = tt::randomInstance(631, 120, 2, Metric::linf(), 1.5);
  DurableRangeStructure drs = DurableRangeStructure::build(ds);
  double tau = tt::tauAtQuantile(ds, 0.5);
  std::vector<TriangleRecord> seq, par;
  reportTrianglesExactLinf(drs, tau, tt::collect(seq), 1);
  reportTrianglesExactLinf(drs, tau, tt::collect(par), 4);
  CHECK(tt::keySet(seq) == tt::keySet(par));
  CHECK(seq.size() == par.size());
}
