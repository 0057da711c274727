#include "durable/durable_ball.hpp"

#include <cmath>

#include "durable/log.hpp"

namespace durable {

DurableBallStructure DurableBallStructure::build(const Dataset& ds, bool withAggregates) {
  DurableBallStructure dbs;
  dbs.ds_ = &ds;
  dbs.withAggregates_ = withAggregates;
  dbs.tree_ = CoverTree::build(ds);
  dbs.nodeIndex_.resize(dbs.tree_.nodes().size());
  std::vector<IntervalEntry> entries;
  for (size_t vi = 0; vi < dbs.tree_.nodes().size(); ++vi) {
    entries.clear();
    dbs.tree_.forEachMember(static_cast<int32_t>(vi), [&](int32_t pid) {
      const Lifespan& ls = ds.pt(pid).lifespan;
      entries.push_back({ls.start, ls.end, pid});
    });
    dbs.nodeIndex_[vi] = IntervalIndex::build(entries, withAggregates);
  }
  DP_LOG_INFO("durable ball structure: " << dbs.tree_.nodes().size() << " nodes, "
                                         << dbs.totalIndexedEntries() << " indexed entries");
  return dbs;
}

size_t DurableBallStructure::totalIndexedEntries() const {
  size_t total = 0;
  for (const IntervalIndex& idx : nodeIndex_) total += idx.size();
  return total;
}

std::vector<DurableSubset> DurableBallStructure::durableBallsAbs(int32_t p, double endLo,
                                                                 double endHi, double eps,
                                                                 double radius,
                                                                 bool splitBands) const {
  if (p < 0 || static_cast<size_t>(p) >= ds_->size()) {
    throw InputError("anchor id out of range");
  }
  if (!(eps > 0.0) || eps > 1.0) throw InputError("eps must be in (0,1]");
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  const double epsQ = eps / (2.0 * radius);
  const TemporalPoint& P = ds_->pt(p);
  StartKey key{P.lifespan.start, P.id};

  std::vector<DurableSubset> out;
  for (const CoverTree::Ball& ball : tree_.ballReport(p, radius, epsQ)) {
    const IntervalIndex& idx = nodeIndex_[static_cast<size_t>(ball.nodeIdx)];
    if (idx.size() == 0 || idx.maxEnd() < endLo || idx.minStart() > key.t0) continue;
    DurableSubset sub;
    sub.ball = ball;
    if (splitBands) {
      sub.lambdaBarCount =
          idx.durableCandidatesSplit(key, endLo, endHi, sub.candidates, sub.bandSplit);
    } else {
      idx.durableCandidates(key, endLo, endHi, sub.candidates);
    }
    for (const CanonicalRange& cr : sub.candidates) sub.candidateCount += cr.count();
    if (sub.candidateCount > 0) out.push_back(std::move(sub));
  }
  return out;
}

std::vector<DurableSubset> DurableBallStructure::durableBallQ(int32_t p, double tau, double eps,
                                                              double radius) const {
  if (!(tau >= 0.0)) throw InputError("tau must be nonnegative");
  const double endLo = ds_->pt(p).lifespan.start + tau;
  return durableBallsAbs(p, endLo, std::numeric_limits<double>::infinity(), eps, radius, false);
}

std::vector<DurableSubset> DurableBallStructure::durableBallQPrime(int32_t p, double tauLo,
                                                                   double tauHi,
                                                                   double eps) const {
  if (!(tauLo >= 0.0) || !(tauHi > tauLo)) {
    throw InputError("band thresholds require 0 <= tauLo < tauHi");
  }
  const double s = ds_->pt(p).lifespan.start;
  const double hi = std::isinf(tauHi) ? tauHi : s + tauHi;
  return durableBallsAbs(p, s + tauLo, hi, eps, 1.0, true);
}

}  // namespace durable
