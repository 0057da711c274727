#pragma once

// Static index over a set of lifespans answering, in O(log^2 n):
//   - durableCandidates: entries with (start,id) below a key and end in
//     [endLo, endHi), returned as O(log n) canonical ranges with counts;
//   - computeSumD: sum over all entries of |I /\ J| for a window J;
//   - computeMaxUnionD: the entry maximizing |I /\ J|, with up to two ids
//     excluded (top-3 retention per candidate class).
//
// One structure serves all three: entries are sorted by (start, id); a
// balanced implicit grouping tree over that order stores each group's entries
// sorted by descending end (ties ascending id). A (start,id)-prefix decomposes
// into O(log n) groups, and any end constraint is a contiguous slice of a
// group's array. Aggregate prefix arrays (only when built withAggregates) give
// window sums and top-3 candidates per slice.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "durable/core.hpp"

namespace durable {

struct IntervalEntry {
  double start = 0.0;
  double end = 0.0;
  int32_t pid = -1;
};

// Key for the (start, id) prefix order: selects entries with
// start < t0, or start == t0 and pid < beforeId. Plain start <= t0 queries
// use beforeId = kNoIdBound.
struct StartKey {
  static constexpr int64_t kNoIdBound = std::numeric_limits<int64_t>::max();
  double t0 = 0.0;
  int64_t beforeId = kNoIdBound;
};

struct EndEntry {
  double end;
  int32_t pid;
};

// Contiguous slice [lo, hi) of one group's end-descending array.
struct CanonicalRange {
  const EndEntry* data = nullptr;
  uint32_t lo = 0;
  uint32_t hi = 0;

  uint32_t count() const { return hi - lo; }
  int32_t pidAt(uint32_t k) const { return data[lo + k].pid; }
  double endAt(uint32_t k) const { return data[lo + k].end; }
};

class IntervalIndex {
 public:
  IntervalIndex() = default;
  static IntervalIndex build(std::vector<IntervalEntry> entries, bool withAggregates);

  size_t size() const { return startOrder_.size(); }
  bool hasAggregates() const { return withAggregates_; }
  double minStart() const { return minStart_; }
  double maxEnd() const { return maxEnd_; }

  // Appends canonical ranges for { (start,id) < key, endLo <= end < endHi }.
  void durableCandidates(const StartKey& key, double endLo, double endHi,
                         std::vector<CanonicalRange>& out) const;
  size_t countCandidates(const StartKey& key, double endLo, double endHi) const;

  // Like durableCandidates with endHi = +inf, but additionally reports per
  // range how many leading entries have end >= bandHi (ends are descending,
  // so each range is that prefix followed by the [endLo, bandHi) band).
  // Returns the total number of such leading entries.
  size_t durableCandidatesSplit(const StartKey& key, double endLo, double bandHi,
                                std::vector<CanonicalRange>& out,
                                std::vector<uint32_t>& splits) const;

  // Sum over all indexed lifespans I of |I /\ J|. Requires aggregates.
  double computeSumD(const Lifespan& J) const;

  // Entry maximizing |I /\ J| among entries whose pid is not excluded;
  // nullopt when every candidate has zero overlap. Requires aggregates.
  // Ties broken towards the smaller pid.
  std::optional<std::pair<int32_t, double>> computeMaxUnionD(
      const Lifespan& J, std::span<const int32_t> exclude) const;

 private:
  // Best-3 (value, pid) candidates: slots ordered best first, empty slots
  // have pid == -1. Retaining three survives excluding up to two pids.
  using Top3 = std::array<std::pair<double, int32_t>, 3>;

  // Grouping tree stored as levels: level l partitions the start order into
  // aligned groups of size 2^l (last one partial), each sorted by
  // (end desc, pid asc). Any [k1, k2) band decomposes into O(log n) full
  // groups; partial tail groups are never part of a decomposition.
  struct Level {
    std::vector<EndEntry> byEndDesc;
    // Aggregates only. Prefix sums are inclusive and restart at each group
    // boundary; sufTopLen[i] ranks entries [i, group end) by length.
    std::vector<double> pfxEnd, pfxStart, pfxLen;
    std::vector<Top3> sufTopLen;
  };

  // Calls fn(level, lo, hi) for aligned groups tiling [k1, k2) left to right.
  template <typename Fn>
  void decomposeBand(uint32_t k1, uint32_t k2, Fn&& fn) const;

  uint32_t prefixSize(const StartKey& key) const;

  bool withAggregates_ = false;
  double minStart_ = 0.0, maxEnd_ = 0.0;
  std::vector<IntervalEntry> startOrder_;  // sorted by (start, pid)
  std::vector<Level> levels_;              // levels 0..floor(log2 n)
  // For computeMaxUnionD classes (aggregates only):
  //   stabs J.start: start order with prefix top-3 by end;
  //   stabs J.end:   end-ascending order with suffix top-3 by min start.
  std::vector<Top3> pfxTopEnd_;
  std::vector<EndEntry> byEndAsc_;  // (end asc, pid asc)
  std::vector<Top3> sufMinStart_;
};

}  // namespace durable
