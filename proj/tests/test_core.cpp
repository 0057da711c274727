#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "durable/core.hpp"
#include "durable/io.hpp"
#include "testutil.hpp"

using namespace durable;

TEST_CASE("distance under the standard norms") {
  TemporalPoint o = tt::mk(0, {0, 0}, 0, 1);
  TemporalPoint a = tt::mk(1, {0.5, 0}, 0, 1);
  TemporalPoint b = tt::mk(2, {0.9, 0.9}, 0, 1);
  TemporalPoint c = tt::mk(3, {0, 0.5}, 0, 1);

  CHECK(distance(o, a, Metric::l2()) == 0.5);
  CHECK(distance(o, b, Metric::linf()) == 0.9);
  CHECK(distance(a, c, Metric::l2()) == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(distance(o, b, Metric::l1()) == doctest::Approx(1.8));
  // lalpha interpolates between l1 and linf.
  double d3 = distance(o, b, Metric::lalpha(3.0));
  CHECK(d3 > distance(o, b, Metric::linf()));
  CHECK(d3 < distance(o, b, Metric::l1()));
  CHECK_THROWS_AS(Metric::lalpha(0.5), InputError);

  SUBCASE("symmetry and identity on random points") {
    Dataset ds = tt::randomInstance(11, 30, 3, Metric::l2());
    for (int i = 0; i < 30; ++i) {
      CHECK(distance(ds, i, i) == 0.0);
      for (int j = i + 1; j < 30; ++j) CHECK(distance(ds, i, j) == distance(ds, j, i));
    }
  }

  SUBCASE("dimension mismatch is rejected") {
    TemporalPoint q = tt::mk(4, {0, 0, 0}, 0, 1);
    CHECK_THROWS_AS(distance(o, q, Metric::l2()), InputError);
  }
}

TEST_CASE("lifespan intersection and durability") {
  auto i3 = intersect({0, 10}, {2, 8}, {4, 12});
  REQUIRE(i3.has_value());
  CHECK(i3->start == 4);
  CHECK(i3->end == 8);
  CHECK(durabilityOf(i3) == 4);

  CHECK(!intersect({0, 1}, {2, 3}).has_value());
  CHECK(durabilityOf(intersect({0, 1}, {2, 3})) == 0.0);

  auto degenerate = intersect({5, 5}, {5, 5});
  REQUIRE(degenerate.has_value());
  CHECK(degenerate->length() == 0.0);

  SUBCASE("order independence") {
    auto perm = intersect({4, 12}, {0, 10}, {2, 8});
    REQUIRE(perm.has_value());
    CHECK(perm->start == i3->start);
    CHECK(perm->end == i3->end);
  }

  SUBCASE("durability bounded by the shorter interval") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
      Lifespan a{double(rng() % 100), 0}, b{double(rng() % 100), 0};
      a.end = a.start + double(rng() % 50);
      b.end = b.start + double(rng() % 50);
      CHECK(durabilityOf(intersect(a, b)) <= std::min(a.length(), b.length()));
    }
  }
}

TEST_CASE("spread") {
  Dataset line = makeDataset({tt::mk(0, {0}, 0, 1), tt::mk(1, {1}, 0, 1), tt::mk(2, {2}, 0, 1)},
                             Metric::l2());
  CHECK(spread(line) == 2.0);

  Dataset tri = makeDataset(
      {tt::mk(0, {0, 0}, 0, 1), tt::mk(1, {0.5, 0}, 0, 1), tt::mk(2, {0, 0.5}, 0, 1)},
      Metric::l2());
  CHECK(spread(tri) == doctest::Approx(1.41421356).epsilon(1e-8));

  Dataset two = makeDataset({tt::mk(0, {0}, 0, 1), tt::mk(1, {3}, 0, 1)}, Metric::l2());
  CHECK(spread(two) == 1.0);

  Dataset dup = makeDataset({tt::mk(0, {1, 1}, 0, 1), tt::mk(1, {1, 1}, 0, 1)}, Metric::l2());
  CHECK(std::isinf(spread(dup)));
}

TEST_CASE("makeDataset validation") {
  CHECK_THROWS_AS(makeDataset({tt::mk(0, {0}, 0, 1), tt::mk(0, {1}, 0, 1)}, Metric::l2()),
                  InputError);
  CHECK_THROWS_AS(makeDataset({tt::mk(0, {0}, 0, 1), tt::mk(2, {1}, 0, 1)}, Metric::l2()),
                  InputError);
  CHECK_THROWS_AS(makeDataset({tt::mk(0, {0}, 0, 1), tt::mk(1, {1, 1}, 0, 1)}, Metric::l2()),
                  InputError);
  CHECK_THROWS_AS(makeDataset({tt::mk(0, {std::nan("")}, 0, 1)}, Metric::l2()), InputError);
  CHECK_THROWS_AS(makeDataset({tt::mk(0, {0}, 2, 1)}, Metric::l2()), InputError);
  CHECK_THROWS_AS(makeDataset({tt::mk(0, {0}, 0, INFINITY)}, Metric::l2()), InputError);

  SUBCASE("points are stored by id regardless of input order") {
    Dataset ds = makeDataset({tt::mk(1, {1}, 0, 1), tt::mk(0, {0}, 0, 2)}, Metric::l2());
    CHECK(ds.pt(0).coords[0] == 0);
    CHECK(ds.pt(1).coords[0] == 1);
    CHECK(ds.dim == 1);
  }

  SUBCASE("empty dataset is allowed") {
    Dataset ds = makeDataset({}, Metric::l2());
    CHECK(ds.size() == 0);
  }
}

TEST_CASE("anchor rule") {
  Dataset ds = tt::t3();
  CHECK(anchorPrecedes(ds.pt(0), ds.pt(2)));
  CHECK(!anchorPrecedes(ds.pt(2), ds.pt(0)));
  CHECK(anchorOf(ds, 0, 1, 2) == 2);
  CHECK(anchorOf(ds, 2, 0, 1) == 2);

  // Ties on the start go to the larger id.
  Dataset tie = makeDataset(
      {tt::mk(0, {0}, 5, 9), tt::mk(1, {0.1}, 5, 9), tt::mk(2, {0.2}, 1, 9)}, Metric::l2());
  CHECK(anchorOf(tie, 0, 1, 2) == 1);
  CHECK(anchorPrecedes(tie.pt(0), tie.pt(1)));
  CHECK(!anchorPrecedes(tie.pt(1), tie.pt(0)));
}

TEST_CASE("csv round trip preserves every value exactly") {
  Dataset ds = tt::randomInstance(99, 40, 3, Metric::l1());
  std::ostringstream out;
  saveCsv(ds, out);

  std::istringstream in(out.str());
  Dataset back = loadCsv(in, Metric::l1());
  REQUIRE(back.size() == ds.size());
  CHECK(back.dim == ds.dim);
  for (size_t i = 0; i < ds.size(); ++i) {
    const TemporalPoint &a = ds.points[i], &b = back.points[i];
    CHECK(a.id == b.id);
    CHECK(a.coords == b.coords);
    CHECK(a.lifespan.start == b.lifespan.start);
    CHECK(a.lifespan.end == b.lifespan.end);
  }
}

TEST_CASE("csv parsing") {
  SUBCASE("t3 file loads with n=3, d=2") {
    std::istringstream in("id,x1,x2,t_start,t_end\n0,0,0,0,10\n1,0.5,0,2,8\n2,0,0.5,4,12\n");
    Dataset ds = loadCsv(in, Metric::l2());
    CHECK(ds.size() == 3);
    CHECK(ds.dim == 2);
    CHECK(ds.pt(2).lifespan.end == 12);
  }
  SUBCASE("header-only file gives an empty dataset") {
    std::istringstream in("id,x1,x2,t_start,t_end\n");
    Dataset ds = loadCsv(in, Metric::l2());
    CHECK(ds.size() == 0);
    CHECK(ds.dim == 2);
  }
  SUBCASE("start > end names the offending line") {
    std::istringstream in("id,x1,t_start,t_end\n0,0,0,10\n1,1,7,3\n");
    try {
      loadCsv(in, Metric::l2());
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("bad header") {
    std::istringstream in("id,x1,start,end\n0,0,0,10\n");
    CHECK_THROWS_AS(loadCsv(in, Metric::l2()), ParseError);
  }
  SUBCASE("non-finite values are rejected") {
    std::istringstream in1("id,x1,t_start,t_end\n0,nan,0,10\n");
    CHECK_THROWS_AS(loadCsv(in1, Metric::l2()), ParseError);
    std::istringstream in2("id,x1,t_start,t_end\n0,0,0,inf\n");
    CHECK_THROWS_AS(loadCsv(in2, Metric::l2()), ParseError);
  }
  SUBCASE("wrong column count names the line") {
    std::istringstream in("id,x1,x2,t_start,t_end\n0,1,2,3\n");
    try {
      loadCsv(in, Metric::l2());
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("duplicate ids are rejected") {
    std::istringstream in("id,x1,t_start,t_end\n0,0,0,10\n0,1,0,10\n");
    CHECK_THROWS_AS(loadCsv(in, Metric::l2()), ParseError);
  }
}

TEST_CASE("clustered generator") {
  GenerateParams gp;
  gp.n = 50;
  gp.dim = 2;
  gp.clusters = 4;
  gp.seed = 1234;

  SUBCASE("deterministic for a fixed seed") {
    Dataset a = generateClustered(gp, Metric::l2());
    Dataset b = generateClustered(gp, Metric::l2());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a.points[i].coords == b.points[i].coords);
      CHECK(a.points[i].lifespan.start == b.points[i].lifespan.start);
      CHECK(a.points[i].lifespan.end == b.points[i].lifespan.end);
    }
    gp.seed = 1235;
    Dataset c = generateClustered(gp, Metric::l2());
    bool differs = false;
    for (size_t i = 0; i < a.size() && !differs; ++i) {
      differs = a.points[i].coords != c.points[i].coords;
    }
    CHECK(differs);
  }

  SUBCASE("a single tight cluster stays tight") {
    gp.clusters = 1;
    gp.n = 10;
    gp.clusterStd = 0.01;
    Dataset ds = generateClustered(gp, Metric::l2());
    double maxD = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) maxD = std::max(maxD, distance(ds, i, j));
    }
    CHECK(maxD < 0.5);
  }

  SUBCASE("n=0 rejected") {
    gp.n = 0;
    CHECK_THROWS_AS(generateClustered(gp, Metric::l2()), InputError);
  }
}
