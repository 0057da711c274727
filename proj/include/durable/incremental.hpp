#pragma once

// Incremental triangle reporting for a decreasing sequence of durability
// thresholds. A session precomputes per-anchor activation thresholds (the
// largest tau at which the anchor first participates in a triangle); a query
// at a smaller tau reports only the delta since the previous threshold.
// Increasing tau mid-session resets the baseline and re-reports in full.

#include <cstdint>
#include <map>
#include <vector>

#include "durable/durable_ball.hpp"
#include "durable/report.hpp"

namespace durable {

// Largest tau for which p anchors a triangle at distance <= 1+eps', where
// eps' follows the same relaxation as reporting. Returns -inf if p anchors
// no triangle at any tau in (0, tauCap); tauCap = +inf computes alpha_p.
double computeActivation(const DurableBallStructure& dbs, int32_t p, double tauCap,
                         double eps);

// True if p anchors at least one triangle whose common lifespan ends at or
// after endLo (absolute time); counts only, no enumeration.
bool detectTriangle(const DurableBallStructure& dbs, int32_t p, double endLo,
                    double eps);

// Triangles anchored at p with durability in [tauNew, tauOld): every pair
// with at least one member whose end falls in the band. Reports nothing
// already reported at tauOld.
void reportDeltaTriangle(const DurableBallStructure& dbs, int32_t p, double tauNew,
                         double tauOld, double eps, const TriangleSink& sink);

class IncrementalSession {
 public:
  IncrementalSession(const DurableBallStructure& dbs, double eps);

  // Reports the delta for the new threshold and returns the number of records
  // emitted. Decreasing tau emits only new triangles; increasing tau resets
  // the baseline and re-reports everything durable at tau.
  size_t query(double tau, const TriangleSink& sink);

  // Forget all reporting history; the next query re-reports in full.
  void reset();

  double previousTau() const { return prevTau_; }
  size_t cumulativeCount() const { return cumulative_; }

 private:
  const DurableBallStructure* dbs_;
  double eps_;
  double prevTau_;
  size_t cumulative_ = 0;
  // Sorted distinct lifespan ends; activation searches binary-search over it.
  std::vector<double> ends_;
  // alpha_p for every anchor, fixed at construction; -inf entries omitted.
  std::vector<std::pair<double, int32_t>> activationDesc_;  // (alpha, p), alpha desc
  // beta_p^{prevTau}: next activation below the current threshold, for anchors
  // already active. -inf entries omitted.
  std::map<int32_t, double> pending_;
};

}  // namespace durable
