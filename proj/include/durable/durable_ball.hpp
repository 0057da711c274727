#pragma once

// Durable ball structure: a cover tree whose every node carries an interval
// index over its subtree's lifespans. Anchored proximity queries return the
// canonical balls around the anchor together with canonical ranges of the
// temporally qualifying members ("durable candidates": points preceding the
// anchor in the (start,id) order whose end reaches the required threshold).

#include <cstdint>
#include <vector>

#include "durable/core.hpp"
#include "durable/cover_tree.hpp"
#include "durable/interval_index.hpp"

namespace durable {

// One canonical ball with its qualifying members. Ranges list members in
// descending end order per group; for two-threshold queries bandSplit[k]
// gives, per range, how many leading entries have end >= the upper
// threshold (the rest of the range is the [lo, hi) band). Enumerating the
// ranges in order yields the same member order whether or not a query was
// split, which keeps delta reports aligned with full reports.
struct DurableSubset {
  CoverTree::Ball ball;
  std::vector<CanonicalRange> candidates;
  std::vector<uint32_t> bandSplit;  // empty for single-threshold queries
  size_t candidateCount = 0;
  size_t lambdaBarCount = 0;  // entries at or above the upper threshold
};

class DurableBallStructure {
 public:
  static DurableBallStructure build(const Dataset& ds, bool withAggregates);

  const Dataset& dataset() const { return *ds_; }
  const CoverTree& tree() const { return tree_; }
  bool withAggregates() const { return withAggregates_; }
  const IntervalIndex& nodeIndex(int32_t nodeIdx) const {
    return nodeIndex_[static_cast<size_t>(nodeIdx)];
  }

  // Canonical balls around p (radius default 1) whose member lists are the
  // durable candidates for threshold tau: q precedes p in (start,id) order,
  // I_q^+ >= I_p^- + tau. Empty balls are dropped. eps is the pattern-level
  // relaxation; the geometric query is run at eps/(2*radius) so members stay
  // within eps/4 of their representative, and representative pairs are
  // compared against 1 + eps/2 by the pattern drivers.
  std::vector<DurableSubset> durableBallQ(int32_t p, double tau, double eps,
                                          double radius = 1.0) const;

  // Two-threshold variant at radius 1: splits candidates into ends in
  // [I_p^- + tauLo, I_p^- + tauHi) and ends >= I_p^- + tauHi.
  // Requires 0 <= tauLo < tauHi.
  std::vector<DurableSubset> durableBallQPrime(int32_t p, double tauLo, double tauHi,
                                               double eps) const;

  // Internal form with absolute end bounds; the activation search uses it so
  // bounds equal stored end values exactly (no threshold arithmetic). endHi
  // may be +inf, which makes the upper band empty.
  std::vector<DurableSubset> durableBallsAbs(int32_t p, double endLo, double endHi,
                                             double eps, double radius, bool splitBands) const;

  // Sum over all nodes of their index size (equals the sum over points of
  // their root-to-leaf stored-path length); diagnostic.
  size_t totalIndexedEntries() const;

 private:
  const Dataset* ds_ = nullptr;
  CoverTree tree_;
  std::vector<IntervalIndex> nodeIndex_;
  bool withAggregates_ = false;
};

// Enumerates (pid, inBand) over a subset's candidates in range order, where
// inBand is true for entries below the upper threshold of a split query
// (always true for unsplit queries).
template <typename Fn>
void forEachCandidate(const DurableSubset& sub, Fn&& fn) {
  for (size_t r = 0; r < sub.candidates.size(); ++r) {
    const CanonicalRange& cr = sub.candidates[r];
    uint32_t split = sub.bandSplit.empty() ? 0 : sub.bandSplit[r];
    for (uint32_t k = 0; k < cr.count(); ++k) {
      fn(cr.pidAt(k), k >= split);
    }
  }
}

}  // namespace durable
