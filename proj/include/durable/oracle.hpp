#pragma once

// Brute-force reference implementations. Exact by exhaustive enumeration,
// guarded by input-size limits; intended for testing and the --oracle CLI
// mode, not production workloads.

#include <cstdint>
#include <vector>

#include "durable/aggregate.hpp"
#include "durable/core.hpp"
#include "durable/report.hpp"

namespace durable {

// Size guards; exceeding them throws LimitError.
inline constexpr int kOracleTriangleMaxN = 200;
inline constexpr int kOraclePatternMaxN = 40;
inline constexpr int kOracleUnionMaxN = 12;
inline constexpr int kOracleUnionMaxKappa = 3;

// All tau-durable triangles at distance threshold `thr` (pass 1 for the exact
// set, 1+eps for the relaxed superset). Emitted per anchor in (q,s) id order.
void oracleTriangles(const Dataset& ds, double tau, double thr, const TriangleSink& sink);

// Exhaustive m-cliques / m-paths / m-stars at threshold `thr`.
void oracleCliques(const Dataset& ds, int m, double tau, double thr, const PatternSink& sink);
void oraclePaths(const Dataset& ds, int m, double tau, double thr, const PatternSink& sink);
void oracleStars(const Dataset& ds, int m, double tau, double thr, const PatternSink& sink);

// SUM support of (p,q) over all other points within thr of both; reports
// pairs with support >= tau. Direct scan.
double oracleSumSupport(const Dataset& ds, int32_t p, int32_t q, double thr);
void oracleSumPairs(const Dataset& ds, double tau, double thr, const PairSink& sink);

// Best coverage of the joint lifespan of (p,q) by at most kappa witness
// lifespans within thr of both, by trying every subset. 0 if none qualify.
double oracleUnionOpt(const Dataset& ds, int32_t p, int32_t q, int kappa, double thr);
void oracleUnionPairs(const Dataset& ds, double tau, int kappa, double thr,
                      const PairSink& sink);

// Largest tau at which p anchors a triangle at threshold thr; -inf if none.
// Scans the O(n^2) candidate durabilities.
double oracleActivation(const Dataset& ds, int32_t p, double thr);

// Normalized triangle key (anchor, min other id, max other id) for set
// comparisons in tests.
struct TriangleKey {
  int32_t anchor, lo, hi;
  auto operator<=>(const TriangleKey&) const = default;
};
TriangleKey keyOf(const TriangleRecord& r);

}  // namespace durable
