#pragma once

// Aggregate-durable pairs: pairs (p,q) within distance 1 whose community
// support — total overlap of other points' lifespans with J = I_p cap I_q —
// reaches tau. SUM counts overlaps of all witnesses; UNION takes the best
// at-most-kappa witnesses by covered length (greedy, factor 1-1/e).

#include <cstdint>
#include <functional>

#include "durable/core.hpp"
#include "durable/durable_ball.hpp"

namespace durable {

struct PairRecord {
  int32_t p;
  int32_t q;
  double value;  // SUM: total witness overlap; UNION: greedy covered length
};

using PairSink = std::function<void(const PairRecord&)>;

// Pairs with SUM support >= tau (sandwich on the distance relaxation; the
// value excludes the self-overlap of p and q). Requires aggregate support in
// the structure.
void reportSumPairs(const DurableBallStructure& dbs, double tau, double eps,
                    const PairSink& sink, int threads = 1);
void reportSumPairsForAnchor(const DurableBallStructure& dbs, int32_t p, double tau,
                             double eps, const PairSink& sink);

// Pairs whose best kappa-subset of witnesses covers >= (1-1/e)*tau of J by
// the greedy bound; every pair with true optimum >= tau is reported.
void reportUnionPairs(const DurableBallStructure& dbs, double tau, int kappa,
                      double eps, const PairSink& sink, int threads = 1);
void reportUnionPairsForAnchor(const DurableBallStructure& dbs, int32_t p, double tau,
                               int kappa, double eps, const PairSink& sink);

}  // namespace durable
