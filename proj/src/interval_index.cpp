#include "durable/interval_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace durable {

namespace {

// (end desc, pid asc), the order of every group's byEndDesc array.
bool endDescLess(const IntervalEntry& a, const IntervalEntry& b) {
  if (a.end != b.end) return a.end > b.end;
  return a.pid < b.pid;
}

void top3Init(std::array<std::pair<double, int32_t>, 3>& t) {
  t = {{{0.0, -1}, {0.0, -1}, {0.0, -1}}};
}

// Keeps the three best (value desc, pid asc) candidates.
void top3Insert(std::array<std::pair<double, int32_t>, 3>& t, double value, int32_t pid) {
  for (size_t k = 0; k < 3; ++k) {
    bool better = t[k].second < 0 || value > t[k].first ||
                  (value == t[k].first && pid < t[k].second);
    if (better) {
      for (size_t j = 2; j > k; --j) t[j] = t[j - 1];
      t[k] = {value, pid};
      return;
    }
  }
}

}  // namespace

IntervalIndex IntervalIndex::build(std::vector<IntervalEntry> entries, bool withAggregates) {
  IntervalIndex idx;
  idx.withAggregates_ = withAggregates;
  std::sort(entries.begin(), entries.end(), [](const IntervalEntry& a, const IntervalEntry& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.pid < b.pid;
  });
  idx.startOrder_ = std::move(entries);
  const uint32_t n = static_cast<uint32_t>(idx.startOrder_.size());
  idx.minStart_ = std::numeric_limits<double>::infinity();
  idx.maxEnd_ = -std::numeric_limits<double>::infinity();
  for (const IntervalEntry& e : idx.startOrder_) {
    idx.minStart_ = std::min(idx.minStart_, e.start);
    idx.maxEnd_ = std::max(idx.maxEnd_, e.end);
  }
  if (n == 0) return idx;

  const int numLevels = std::bit_width(n);  // levels 0..floor(log2 n)
  idx.levels_.resize(static_cast<size_t>(numLevels));

  // Level l+1 groups are merges of level-l pairs; work on full entries so the
  // aggregate arrays can be filled in the same pass, then strip to EndEntry.
  std::vector<IntervalEntry> cur = idx.startOrder_;
  std::vector<IntervalEntry> next(n);
  for (int l = 0; l < numLevels; ++l) {
    const uint32_t width = 1u << l;
    if (l > 0) {  // level 0 is the start order itself (singleton groups)
      for (uint32_t lo = 0; lo < n; lo += width) {
        uint32_t mid = std::min(n, lo + width / 2);
        uint32_t hi = std::min(n, lo + width);
        std::merge(cur.begin() + lo, cur.begin() + mid, cur.begin() + mid, cur.begin() + hi,
                   next.begin() + lo, endDescLess);
      }
      cur.swap(next);
    }
    Level& lev = idx.levels_[static_cast<size_t>(l)];
    lev.byEndDesc.resize(n);
    for (uint32_t i = 0; i < n; ++i) lev.byEndDesc[i] = {cur[i].end, cur[i].pid};
    if (withAggregates) {
      lev.pfxEnd.resize(n);
      lev.pfxStart.resize(n);
      lev.pfxLen.resize(n);
      lev.sufTopLen.resize(n);
      for (uint32_t lo = 0; lo < n; lo += width) {
        uint32_t hi = std::min(n, lo + width);
        double sEnd = 0.0, sStart = 0.0, sLen = 0.0;
        for (uint32_t i = lo; i < hi; ++i) {
          sEnd += cur[i].end;
          sStart += cur[i].start;
          sLen += cur[i].end - cur[i].start;
          lev.pfxEnd[i] = sEnd;
          lev.pfxStart[i] = sStart;
          lev.pfxLen[i] = sLen;
        }
        Top3 t;
        top3Init(t);
        for (uint32_t i = hi; i-- > lo;) {
          top3Insert(t, cur[i].end - cur[i].start, cur[i].pid);
          lev.sufTopLen[i] = t;
        }
      }
    }
  }

  if (withAggregates) {
    idx.pfxTopEnd_.resize(n + 1);
    top3Init(idx.pfxTopEnd_[0]);
    for (uint32_t i = 0; i < n; ++i) {
      idx.pfxTopEnd_[i + 1] = idx.pfxTopEnd_[i];
      top3Insert(idx.pfxTopEnd_[i + 1], idx.startOrder_[i].end, idx.startOrder_[i].pid);
    }
    std::vector<IntervalEntry> asc = idx.startOrder_;
    std::sort(asc.begin(), asc.end(), [](const IntervalEntry& a, const IntervalEntry& b) {
      if (a.end != b.end) return a.end < b.end;
      return a.pid < b.pid;
    });
    idx.byEndAsc_.resize(n);
    for (uint32_t i = 0; i < n; ++i) idx.byEndAsc_[i] = {asc[i].end, asc[i].pid};
    idx.sufMinStart_.resize(n + 1);
    top3Init(idx.sufMinStart_[n]);
    for (uint32_t i = n; i-- > 0;) {
      idx.sufMinStart_[i] = idx.sufMinStart_[i + 1];
      // Negated so "best" means smallest start.
      top3Insert(idx.sufMinStart_[i], -asc[i].start, asc[i].pid);
    }
  }
  return idx;
}

uint32_t IntervalIndex::prefixSize(const StartKey& key) const {
  auto it = std::lower_bound(
      startOrder_.begin(), startOrder_.end(), key, [](const IntervalEntry& e, const StartKey& k) {
        if (e.start != k.t0) return e.start < k.t0;
        return static_cast<int64_t>(e.pid) < k.beforeId;
      });
  return static_cast<uint32_t>(it - startOrder_.begin());
}

template <typename Fn>
void IntervalIndex::decomposeBand(uint32_t k1, uint32_t k2, Fn&& fn) const {
  const int maxLevel = static_cast<int>(levels_.size()) - 1;
  uint32_t o = k1;
  while (o < k2) {
    int l = std::bit_width(k2 - o) - 1;  // block must fit in the band...
    if (o != 0) l = std::min(l, std::countr_zero(o));  // ...and start group-aligned
    l = std::min(l, maxLevel);
    fn(l, o, o + (1u << l));
    o += 1u << l;
  }
}

namespace {

// Entries with end >= x form a prefix of an (end desc, pid asc) slice.
uint32_t countEndAtLeast(const std::vector<EndEntry>& arr, uint32_t lo, uint32_t hi, double x) {
  auto it = std::partition_point(arr.begin() + lo, arr.begin() + hi,
                                 [x](const EndEntry& e) { return e.end >= x; });
  return static_cast<uint32_t>(it - (arr.begin() + lo));
}

}  // namespace

void IntervalIndex::durableCandidates(const StartKey& key, double endLo, double endHi,
                                      std::vector<CanonicalRange>& out) const {
  uint32_t k = prefixSize(key);
  if (k == 0) return;
  decomposeBand(0, k, [&](int l, uint32_t lo, uint32_t hi) {
    const auto& arr = levels_[static_cast<size_t>(l)].byEndDesc;
    uint32_t cLo = countEndAtLeast(arr, lo, hi, endLo);
    uint32_t cHi = std::isinf(endHi) ? 0 : countEndAtLeast(arr, lo, hi, endHi);
    if (cHi < cLo) out.push_back({arr.data(), lo + cHi, lo + cLo});
  });
}

size_t IntervalIndex::countCandidates(const StartKey& key, double endLo, double endHi) const {
  uint32_t k = prefixSize(key);
  size_t total = 0;
  if (k == 0) return total;
  decomposeBand(0, k, [&](int l, uint32_t lo, uint32_t hi) {
    const auto& arr = levels_[static_cast<size_t>(l)].byEndDesc;
    uint32_t cLo = countEndAtLeast(arr, lo, hi, endLo);
    uint32_t cHi = std::isinf(endHi) ? 0 : countEndAtLeast(arr, lo, hi, endHi);
    total += cLo - cHi;
  });
  return total;
}

size_t IntervalIndex::durableCandidatesSplit(const StartKey& key, double endLo, double bandHi,
                                             std::vector<CanonicalRange>& out,
                                             std::vector<uint32_t>& splits) const {
  uint32_t k = prefixSize(key);
  size_t totalHi = 0;
  if (k == 0) return totalHi;
  decomposeBand(0, k, [&](int l, uint32_t lo, uint32_t hi) {
    const auto& arr = levels_[static_cast<size_t>(l)].byEndDesc;
    uint32_t cLo = countEndAtLeast(arr, lo, hi, endLo);
    if (cLo == 0) return;
    uint32_t cHi = std::isinf(bandHi) ? 0 : countEndAtLeast(arr, lo, hi, bandHi);
    out.push_back({arr.data(), lo, lo + cLo});
    splits.push_back(cHi);
    totalHi += cHi;
  });
  return totalHi;
}

double IntervalIndex::computeSumD(const Lifespan& J) const {
  if (!withAggregates_) throw InputError("interval index was built without aggregates");
  if (startOrder_.empty()) return 0.0;
  const double s = J.start, e = J.end;
  uint32_t k1 = prefixSize({s, StartKey::kNoIdBound});  // start <= J.start
  uint32_t k2 = prefixSize({e, StartKey::kNoIdBound});  // start <= J.end
  double total = 0.0;
  // Entries starting at or before J: overlap is min(end, e) - s, clipped at 0.
  decomposeBand(0, k1, [&](int l, uint32_t lo, uint32_t hi) {
    const Level& lev = levels_[static_cast<size_t>(l)];
    uint32_t cE = countEndAtLeast(lev.byEndDesc, lo, hi, e);
    uint32_t cS = countEndAtLeast(lev.byEndDesc, lo, hi, s);
    total += static_cast<double>(cE) * (e - s);
    if (cS > cE) {
      double sumEnd = lev.pfxEnd[lo + cS - 1] - (cE > 0 ? lev.pfxEnd[lo + cE - 1] : 0.0);
      total += sumEnd - static_cast<double>(cS - cE) * s;
    }
  });
  // Entries starting inside (s, e]: overlap is min(end, e) - start.
  decomposeBand(k1, k2, [&](int l, uint32_t lo, uint32_t hi) {
    const Level& lev = levels_[static_cast<size_t>(l)];
    uint32_t cE = countEndAtLeast(lev.byEndDesc, lo, hi, e);
    if (cE > 0) {
      // Prefix sums restart at each group and blocks are whole groups, so the
      // first cE entries of the block sum directly.
      total += static_cast<double>(cE) * e - lev.pfxStart[lo + cE - 1];
    }
    if (hi - lo > cE) {
      double sumLen = lev.pfxLen[hi - 1] - (cE > 0 ? lev.pfxLen[lo + cE - 1] : 0.0);
      total += sumLen;
    }
  });
  return total;
}

std::optional<std::pair<int32_t, double>> IntervalIndex::computeMaxUnionD(
    const Lifespan& J, std::span<const int32_t> exclude) const {
  if (!withAggregates_) throw InputError("interval index was built without aggregates");
  if (startOrder_.empty()) return std::nullopt;
  const double s = J.start, e = J.end;
  auto excluded = [&](int32_t pid) {
    for (int32_t x : exclude) {
      if (x == pid) return true;
    }
    return false;
  };
  double bestOverlap = 0.0;
  int32_t bestPid = -1;
  auto consider = [&](double overlap, int32_t pid) {
    if (overlap <= 0.0) return;
    if (overlap > bestOverlap || (overlap == bestOverlap && (bestPid < 0 || pid < bestPid))) {
      bestOverlap = overlap;
      bestPid = pid;
    }
  };

  uint32_t k1 = prefixSize({s, StartKey::kNoIdBound});
  // Stabs J.start (start <= s): overlap = min(end, e) - s, best end wins.
  for (const auto& [end, pid] : pfxTopEnd_[k1]) {
    if (pid < 0) break;
    if (excluded(pid)) continue;
    consider(std::min(end, e) - s, pid);
    break;  // candidates are end-descending; the first kept one dominates
  }
  // Stabs J.end (end >= e): overlap = e - max(start, s), smallest start wins.
  {
    auto it = std::partition_point(byEndAsc_.begin(), byEndAsc_.end(),
                                   [e](const EndEntry& en) { return en.end < e; });
    uint32_t i = static_cast<uint32_t>(it - byEndAsc_.begin());
    for (const auto& [negStart, pid] : sufMinStart_[i]) {
      if (pid < 0) break;
      if (excluded(pid)) continue;
      consider(e - std::max(-negStart, s), pid);
      break;
    }
  }
  // Inside J (start > s, end < e): overlap is the whole length.
  uint32_t k2 = prefixSize({e, StartKey::kNoIdBound});
  decomposeBand(k1, k2, [&](int l, uint32_t lo, uint32_t hi) {
    const Level& lev = levels_[static_cast<size_t>(l)];
    uint32_t cE = countEndAtLeast(lev.byEndDesc, lo, hi, e);
    if (lo + cE >= hi) return;
    for (const auto& [len, pid] : lev.sufTopLen[lo + cE]) {
      if (pid < 0) break;
      if (excluded(pid)) continue;
      consider(len, pid);
      break;
    }
  });

  if (bestPid < 0) return std::nullopt;
  return std::make_pair(bestPid, bestOverlap);
}

}  // namespace durable
